#pragma once

#include <algorithm>
#include <atomic>
#include <string>
#include <vector>

namespace mrv::detail {

// Process-wide counter for alpha-renaming. The result avoids every name in
// `taken` (sorted).
inline std::string fresh_name(const std::string& base, const std::vector<std::string>& taken) {
  static std::atomic<unsigned long> counter{0};
  std::string stem = base.substr(0, base.find('_'));
  if (stem.empty()) stem = "X";
  for (;;) {
    std::string candidate = stem + "_" + std::to_string(++counter);
    if (!std::binary_search(taken.begin(), taken.end(), candidate)) return candidate;
  }
}

inline std::vector<std::string> merge_names(const std::vector<std::string>& a,
                                            const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool has_name(const std::vector<std::string>& names, const std::string& x) {
  return std::binary_search(names.begin(), names.end(), x);
}

inline void mix_hash(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

}  // namespace mrv::detail
