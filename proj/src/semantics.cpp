#include "mrv/semantics.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

namespace mrv {

namespace {

template <class Keep>
StateSet closure(const Ilts& ilts, StateId p, Keep keep) {
  StateSet seen{p};
  std::vector<StateId> todo{p};
  while (!todo.empty()) {
    StateId s = todo.back();
    todo.pop_back();
    for (const auto& t : ilts.step(s)) {
      if (keep(t.action) && seen.insert(t.target).second) {
        if (seen.size() > ilts.state_bound()) throw BoundExceeded("state bound exceeded during closure");
        todo.push_back(t.target);
      }
    }
  }
  return seen;
}

bool weakly_hidden(const Action& a) { return !a.is_external(); }
bool silent(const Action& a) { return a.is_silent(); }

template <class Close>
StateSet step_then_close(const Ilts& ilts, const StateSet& from, const Action& a, Close close) {
  StateSet out;
  for (StateId s : from) {
    for (const auto& t : ilts.step(s)) {
      if (t.action == a) {
        auto c = close(t.target);
        out.insert(c.begin(), c.end());
      }
    }
  }
  return out;
}

}  // namespace

StateSet weak_closure(const Ilts& ilts, StateId p) { return closure(ilts, p, weakly_hidden); }
StateSet silent_closure(const Ilts& ilts, StateId p) { return closure(ilts, p, silent); }

StateSet weak_step(const Ilts& ilts, StateId p, const Action& a) {
  return step_then_close(ilts, weak_closure(ilts, p), a, [&](StateId q) { return weak_closure(ilts, q); });
}

StateSet weak_traceable_step(const Ilts& ilts, StateId p, const Action& eta) {
  return step_then_close(ilts, silent_closure(ilts, p), eta, [&](StateId q) { return silent_closure(ilts, q); });
}

History traces(const Ilts& ilts, StateId p, std::size_t max_len) {
  // Layer by layer: each trace of the current length with the set of states
  // that can follow it (already closed under silent steps).
  std::map<Trace, StateSet> layer{{Trace{}, silent_closure(ilts, p)}};
  std::vector<Trace> all{Trace{}};
  for (std::size_t len = 0; len < max_len && !layer.empty(); ++len) {
    std::map<Trace, StateSet> next;
    for (const auto& [t, states] : layer) {
      for (StateId s : states) {
        for (const auto& tr : ilts.step(s)) {
          if (tr.action.is_silent()) continue;
          Trace ext = t;
          ext.push_back(tr.action);
          auto c = silent_closure(ilts, tr.target);
          next[ext].insert(c.begin(), c.end());
        }
      }
    }
    for (const auto& [t, _] : next) all.push_back(t);
    layer = std::move(next);
  }
  return History(std::move(all));
}

bool produces(const Ilts& ilts, StateId p, const Trace& t) {
  StateSet current = silent_closure(ilts, p);
  for (const auto& a : t) {
    current = step_then_close(ilts, current, a, [&](StateId q) { return silent_closure(ilts, q); });
    if (current.empty()) return false;
  }
  return true;
}

namespace {

using Bits = std::vector<char>;

class Evaluator {
 public:
  Evaluator(const Ilts& ilts, StateId root) : ilts_(ilts), states_(reachable(ilts, root)) {
    for (std::size_t i = 0; i < states_.size(); ++i) index_[states_[i]] = i;
  }

  Bits run(const Formula& f, std::map<std::string, Bits>& env) {
    std::size_t n = states_.size();
    switch (f.kind()) {
      case FormulaKind::Tt: return Bits(n, 1);
      case FormulaKind::Ff: return Bits(n, 0);
      case FormulaKind::Var: {
        auto it = env.find(f.name());
        if (it == env.end()) throw std::invalid_argument("eval: unbound variable " + f.name());
        return it->second;
      }
      case FormulaKind::And:
      case FormulaKind::Or: {
        Bits l = run(f.lhs(), env), r = run(f.rhs(), env);
        for (std::size_t i = 0; i < n; ++i) l[i] = f.kind() == FormulaKind::And ? (l[i] && r[i]) : (l[i] || r[i]);
        return l;
      }
      case FormulaKind::Box:
      case FormulaKind::Diamond: {
        Bits body = run(f.body(), env);
        const auto& succ = successors(f.action());
        Bits out(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
          bool box = true, dia = false;
          for (std::size_t j : succ[i]) {
            box = box && body[j];
            dia = dia || body[j];
          }
          out[i] = f.kind() == FormulaKind::Box ? box : dia;
        }
        return out;
      }
      case FormulaKind::Max:
      case FormulaKind::Min: {
        bool greatest = f.kind() == FormulaKind::Max;
        auto saved = env.find(f.name()) == env.end() ? std::nullopt : std::optional<Bits>(env[f.name()]);
        Bits current(n, greatest ? 1 : 0);
        for (;;) {
          env[f.name()] = current;
          Bits next = run(f.body(), env);
          if (next == current) break;
          current = std::move(next);
        }
        if (saved) env[f.name()] = *saved; else env.erase(f.name());
        return current;
      }
    }
    return Bits(n, 0);
  }

  Bits from_set(const StateSet& s) const {
    Bits b(states_.size(), 0);
    for (StateId id : s) {
      if (auto it = index_.find(id); it != index_.end()) b[it->second] = 1;
    }
    return b;
  }

  StateSet to_set(const Bits& b) const {
    StateSet s;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b[i]) s.insert(states_[i]);
    return s;
  }

 private:
  const std::vector<std::vector<std::size_t>>& successors(const Action& a) {
    auto it = weak_.find(a);
    if (it != weak_.end()) return it->second;
    std::vector<std::vector<std::size_t>> succ(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) {
      for (StateId q : weak_step(ilts_, states_[i], a)) succ[i].push_back(index_.at(q));
    }
    return weak_.emplace(a, std::move(succ)).first->second;
  }

  const Ilts& ilts_;
  std::vector<StateId> states_;
  std::unordered_map<StateId, std::size_t> index_;
  std::unordered_map<Action, std::vector<std::vector<std::size_t>>> weak_;
};

}  // namespace

StateSet eval(const Ilts& ilts, StateId root, const Formula& phi, const Env& env) {
  Evaluator ev(ilts, root);
  std::map<std::string, Bits> bits;
  for (const auto& [x, s] : env) bits[x] = ev.from_set(s);
  return ev.to_set(ev.run(phi, bits));
}

bool satisfies(const Ilts& ilts, StateId p, const Formula& phi) {
  return eval(ilts, p, phi).count(p) > 0;
}

}  // namespace mrv
