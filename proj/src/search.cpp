#include "mrv/search.hpp"

namespace mrv {

HistorySearch smallest_history(const std::vector<Trace>& pool, std::size_t max_size, const HistoryPredicate& accept,
                               std::size_t budget) {
  HistorySearch res;
  const std::size_t n = pool.size();
  for (std::size_t k = 1; k <= max_size && k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      if (budget && res.candidates >= budget) {
        res.exhausted = false;
        return res;
      }
      History h;
      for (auto i : idx) h.insert(pool[i]);
      ++res.candidates;
      if (accept(h)) {
        res.history = std::move(h);
        return res;
      }
      // Next combination.
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return res;
}

History shrink_history(History h, const HistoryPredicate& accept) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : h.traces()) {
      std::vector<Trace> rest;
      for (const auto& u : h.traces())
        if (u != t) rest.push_back(u);
      History smaller(std::move(rest));
      if (accept(smaller)) {
        h = std::move(smaller);
        changed = true;
        break;
      }
    }
  }
  return h;
}

std::vector<Trace> maximal_traces(const std::vector<Trace>& pool) {
  std::vector<Trace> out;
  for (const auto& t : pool) {
    bool covered = false;
    for (const auto& u : pool)
      if (u.size() > t.size() && is_prefix(t, u)) {
        covered = true;
        break;
      }
    if (!covered) out.push_back(t);
  }
  return out;
}

}  // namespace mrv
