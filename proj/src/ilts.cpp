#include "mrv/ilts.hpp"

#include <algorithm>
#include <sstream>

namespace mrv {

Determinacy Determinacy::of(std::set<Action> actions) {
  Determinacy d;
  d.set_ = std::move(actions);
  return d;
}

Determinacy Determinacy::parse(std::string_view list) {
  std::string text(list);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::set<Action> actions;
  std::string word;
  while (in >> word) {
    Action a = Action::parse(word);
    if (a.is_silent()) throw std::invalid_argument("the silent action has no determinacy");
    actions.insert(a);
  }
  return of(std::move(actions));
}

Determinacy Determinacy::all() {
  Determinacy d;
  d.mode_ = Mode::All;
  return d;
}

Determinacy Determinacy::actor_calculus() {
  Determinacy d;
  d.mode_ = Mode::Actor;
  return d;
}

Determinacy Determinacy::with(const Action& a) const {
  Determinacy d = *this;
  d.set_.insert(a);
  return d;
}

Determinacy Determinacy::with_all_internal() const {
  Determinacy d = *this;
  d.all_internal_ = true;
  return d;
}

bool Determinacy::operator()(const Action& a) const {
  if (a.is_silent()) return false;
  switch (mode_) {
    case Mode::All:
      return true;
    case Mode::Actor: {
      auto label = a.label.str();
      if (a.is_external()) return label.empty() || label.front() != '(';
      return label != "nu.comm";
    }
    case Mode::Set:
      break;
  }
  if (a.is_internal() && all_internal_) return true;
  return set_.count(a) > 0;
}

std::string Determinacy::to_string() const {
  if (mode_ == Mode::All) return "all";
  if (mode_ == Mode::Actor) return "actor";
  std::vector<std::string> labels;
  for (const auto& a : set_) labels.push_back(a.to_string());
  std::sort(labels.begin(), labels.end());
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? ", " : "") + labels[i];
  if (all_internal_) out += labels.empty() ? "~*" : ", ~*";
  return out + "}";
}

std::vector<StateId> reachable(const Ilts& ilts, StateId from) {
  std::vector<StateId> order{from};
  std::unordered_map<StateId, bool> seen{{from, true}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& t : ilts.step(order[i])) {
      if (seen.emplace(t.target, true).second) {
        order.push_back(t.target);
        if (order.size() > ilts.state_bound())
          throw BoundExceeded("state bound of " + std::to_string(ilts.state_bound()) + " exceeded");
      }
    }
  }
  return order;
}

void validate_determinacy(const Ilts& ilts, StateId from) {
  for (StateId s : reachable(ilts, from)) {
    const auto& ts = ilts.step(s);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (!ilts.det()(ts[i].action)) continue;
      for (std::size_t j = i + 1; j < ts.size(); ++j) {
        if (ts[j].action == ts[i].action && !ilts.equiv(ts[i].target, ts[j].target)) {
          throw DeterminacyViolation("action " + ts[i].action.to_string() + " is declared deterministic but state " +
                                     ilts.describe(s) + " reaches both " + ilts.describe(ts[i].target) + " and " +
                                     ilts.describe(ts[j].target));
        }
      }
    }
  }
}

std::optional<std::string> check_silent_confluence(const Ilts& ilts, StateId from) {
  for (StateId p : reachable(ilts, from)) {
    const auto& ts = ilts.step(p);
    for (const auto& silent : ts) {
      if (!silent.action.is_silent()) continue;
      for (const auto& other : ts) {
        if (&other == &silent) continue;
        if (other.action.is_silent() && ilts.equiv(silent.target, other.target)) continue;
        bool joined = false;
        for (const auto& left : ilts.step(silent.target)) {
          if (left.action != other.action) continue;
          for (const auto& right : ilts.step(other.target)) {
            if (right.action.is_silent() && ilts.equiv(left.target, right.target)) joined = true;
          }
          if (joined) break;
        }
        if (!joined)
          return "state " + ilts.describe(p) + ": silent step to " + ilts.describe(silent.target) +
                 " does not commute with " + other.action.to_string() + " to " + ilts.describe(other.target);
      }
    }
  }
  return std::nullopt;
}

}  // namespace mrv
