#include "mrv/history.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mrv {

std::string trace_to_string(const Trace& t) {
  if (t.empty()) return "eps";
  std::string out;
  for (const auto& a : t) {
    if (!out.empty()) out += ' ';
    out += a.to_string();
  }
  return out;
}

Trace parse_trace(std::string_view text) {
  Trace t;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) {
    if (word == "eps") continue;
    Action a = Action::parse(word);
    if (a.is_silent()) throw std::invalid_argument("silent action in trace: " + word);
    t.push_back(a);
  }
  return t;
}

bool is_prefix(const Trace& prefix, const Trace& t) {
  return prefix.size() <= t.size() && std::equal(prefix.begin(), prefix.end(), t.begin());
}

History::History(std::initializer_list<Trace> ts) : History(std::vector<Trace>(ts)) {}

History::History(std::vector<Trace> ts) : traces_(std::move(ts)) {
  std::sort(traces_.begin(), traces_.end());
  traces_.erase(std::unique(traces_.begin(), traces_.end()), traces_.end());
}

bool History::insert(const Trace& t) {
  auto it = std::lower_bound(traces_.begin(), traces_.end(), t);
  if (it != traces_.end() && *it == t) return false;
  traces_.insert(it, t);
  return true;
}

bool History::contains(const Trace& t) const {
  return std::binary_search(traces_.begin(), traces_.end(), t);
}

History History::united(const History& other) const {
  History h;
  std::set_union(traces_.begin(), traces_.end(), other.traces_.begin(), other.traces_.end(),
                 std::back_inserter(h.traces_));
  return h;
}

bool History::subset_of(const History& other) const {
  return std::includes(other.traces_.begin(), other.traces_.end(), traces_.begin(), traces_.end());
}

std::size_t History::depth() const {
  std::size_t d = 0;
  for (const auto& t : traces_) d = std::max(d, t.size());
  return d;
}

std::size_t hash_trace(const Trace& t) {
  std::size_t h = 0x9e3779b97f4a7c15ull ^ t.size();
  for (const auto& a : t) h = (h ^ std::hash<Action>{}(a)) * 0x100000001b3ull;
  return h;
}

std::size_t History::hash() const {
  std::size_t h = traces_.size();
  for (const auto& t : traces_) h = (h * 31) ^ hash_trace(t);
  return h;
}

namespace {

bool trace_text_less(const Trace& a, const Trace& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), Action::text_less);
}

std::vector<Trace> text_sorted(const std::vector<Trace>& ts) {
  std::vector<Trace> sorted = ts;
  std::sort(sorted.begin(), sorted.end(), trace_text_less);
  return sorted;
}

}  // namespace

std::string History::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& t : text_sorted(traces_)) {
    if (!first) out += ", ";
    first = false;
    out += trace_to_string(t);
  }
  return out + "}";
}

History parse_history_file(std::string_view text) {
  History h;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] == '#') continue;
    h.insert(parse_trace(line));
  }
  return h;
}

std::string format_history_file(const History& h) {
  std::string out;
  for (const auto& t : text_sorted(h.traces())) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out += ' ';
      out += t[i].to_string();
    }
    out += '\n';
  }
  return out;
}

}  // namespace mrv
