#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "mrv/action.hpp"

namespace mrv {

using Trace = std::vector<Action>;

// Space separated labels; the empty trace prints as "eps".
std::string trace_to_string(const Trace& t);
// Accepts whitespace separated labels. "eps" or blank yields the empty trace.
// Throws std::invalid_argument on a silent action.
Trace parse_trace(std::string_view text);
bool is_prefix(const Trace& prefix, const Trace& t);

// Finite set of traces kept sorted and deduplicated, so the vector itself is
// a canonical key.
class History {
 public:
  History() = default;
  History(std::initializer_list<Trace> ts);
  explicit History(std::vector<Trace> ts);

  bool insert(const Trace& t);  // true when t was not already present
  bool contains(const Trace& t) const;
  bool empty() const { return traces_.empty(); }
  std::size_t size() const { return traces_.size(); }
  const std::vector<Trace>& traces() const { return traces_; }
  auto begin() const { return traces_.begin(); }
  auto end() const { return traces_.end(); }

  History united(const History& other) const;
  bool subset_of(const History& other) const;
  // Longest trace length, 0 for the empty history.
  std::size_t depth() const;
  std::size_t hash() const;

  // "{r s a, eps}"
  std::string to_string() const;

  friend bool operator==(const History&, const History&) = default;
  friend auto operator<=>(const History& a, const History& b) {
    return a.traces_ <=> b.traces_;
  }

 private:
  std::vector<Trace> traces_;
};

// History file format: one trace per line, blank line is the empty trace,
// lines starting with '#' are comments. A trailing newline does not add a
// trace.
History parse_history_file(std::string_view text);
std::string format_history_file(const History& h);

std::size_t hash_trace(const Trace& t);

}  // namespace mrv

template <>
struct std::hash<mrv::History> {
  std::size_t operator()(const mrv::History& h) const noexcept { return h.hash(); }
};
