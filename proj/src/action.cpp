#include "mrv/action.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace mrv {

namespace {

struct InternTable {
  std::shared_mutex mu;
  std::deque<std::string> strings{std::string()};
  std::unordered_map<std::string_view, std::uint32_t> index{{std::string_view(), 0}};
};

InternTable& table() {
  static InternTable t;
  return t;
}

}  // namespace

Symbol Symbol::intern(std::string_view text) {
  auto& t = table();
  {
    std::shared_lock lock(t.mu);
    if (auto it = t.index.find(text); it != t.index.end()) return Symbol(it->second);
  }
  std::unique_lock lock(t.mu);
  if (auto it = t.index.find(text); it != t.index.end()) return Symbol(it->second);
  t.strings.emplace_back(text);
  auto id = static_cast<std::uint32_t>(t.strings.size() - 1);
  t.index.emplace(t.strings.back(), id);
  return Symbol(id);
}

std::string_view Symbol::str() const {
  auto& t = table();
  std::shared_lock lock(t.mu);
  return t.strings[id_];
}

std::string Action::to_string() const {
  switch (kind) {
    case ActionKind::Silent: return "tau";
    case ActionKind::Internal: return "~" + std::string(label.str());
    case ActionKind::External: break;
  }
  return std::string(label.str());
}

Action Action::parse(std::string_view text) {
  if (text == "tau") return silent();
  if (!text.empty() && text.front() == '~') {
    text.remove_prefix(1);
    if (text.empty()) throw std::invalid_argument("empty internal action label");
    return internal(text);
  }
  if (text.empty()) throw std::invalid_argument("empty action label");
  return external(text);
}

}  // namespace mrv

namespace mrv {

bool Action::text_less(const Action& a, const Action& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.label.str() < b.label.str();
}

}  // namespace mrv
