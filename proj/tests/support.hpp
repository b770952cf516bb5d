#pragma once

// Generators and enumerators shared by the unit tests and the acceptance
// runner.

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mrv/action.hpp"
#include "mrv/ccs.hpp"
#include "mrv/formula.hpp"
#include "mrv/fragments.hpp"
#include "mrv/history.hpp"
#include "mrv/ilts.hpp"
#include "mrv/monitor.hpp"

namespace mrv::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(gen_) < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline std::vector<Action> externals(std::initializer_list<const char*> labels) {
  std::vector<Action> out;
  for (auto* l : labels) out.push_back(Action::external(l));
  return out;
}

// Tree-shaped processes whose leaves may loop back to an ancestor. A node
// is either a lone tau prefix or a sum of visible prefixes in which labels
// from `unique` occur at most once, so declaring them deterministic is
// sound and silent steps commute with everything.
struct CcsGen {
  std::vector<Action> actions;  // external and internal labels
  std::set<Action> unique;      // labels never repeated in one sum
  std::size_t max_nodes = 8;
  std::size_t max_branch = 3;
  double tau = 0.1;
  double back = 0.35;
  double nil = 0.15;
};

inline CcsProcess random_ccs(Rng& rng, const CcsGen& g) {
  std::size_t nodes = 0;
  std::function<CcsProcess(std::vector<std::string>&)> node = [&](std::vector<std::string>& anc) -> CcsProcess {
    ++nodes;
    std::string x = "X" + std::to_string(nodes);
    anc.push_back(x);
    auto child = [&]() -> CcsProcess {
      if (nodes >= g.max_nodes || rng.chance(g.back)) {
        if (rng.chance(g.nil)) return CcsProcess::nil();
        return CcsProcess::var(rng.pick(anc));
      }
      return node(anc);
    };
    CcsProcess body;
    if (g.tau > 0 && rng.chance(g.tau)) {
      body = CcsProcess::prefix(Action::silent(), child());
    } else {
      std::size_t k = rng.below(g.max_branch + 1);
      std::set<Action> used;
      bool first = true;
      for (std::size_t i = 0; i < k; ++i) {
        Action a = rng.pick(g.actions);
        if (g.unique.count(a) && !used.insert(a).second) continue;
        CcsProcess branch = CcsProcess::prefix(a, child());
        body = first ? branch : CcsProcess::sum(body, branch);
        first = false;
      }
      if (first) body = CcsProcess::nil();
    }
    anc.pop_back();
    return CcsProcess::rec(x, body);
  };
  std::vector<std::string> anc;
  return node(anc);
}

// Random closed guarded formula built from tt, ff, [a], &, |, max and
// variables. With det_guard set, disjunctions are placed only below
// modalities in `det`, and candidates that still leave the fragment through
// recursion are redrawn.
struct FormulaGen {
  std::vector<Action> actions;
  std::set<Action> det;
  bool det_guard = true;
  bool disjunction = true;
  std::size_t depth = 4;  // modal depth
  std::size_t size = 10;  // node budget
  std::size_t vars = 2;
};

inline Formula random_formula_once(Rng& rng, const FormulaGen& g) {
  std::size_t budget = g.size;
  std::size_t next_var = 0;
  // vars: (name, guarded)
  std::function<Formula(std::size_t, bool, std::vector<std::pair<std::string, bool>>)> go =
      [&](std::size_t depth, bool flag, std::vector<std::pair<std::string, bool>> vars) -> Formula {
    if (budget > 0) --budget;
    std::vector<int> opts{0, 1};  // tt, ff
    bool guarded_var = false;
    for (auto& v : vars) guarded_var = guarded_var || v.second;
    if (guarded_var) opts.insert(opts.end(), {2, 2});
    if (budget > 0 && depth > 0) opts.insert(opts.end(), {3, 3, 3});
    if (budget > 1) opts.insert(opts.end(), {4, 4});
    if (budget > 1 && g.disjunction && (flag || !g.det_guard)) opts.insert(opts.end(), {5, 5});
    if (budget > 1 && depth > 0 && next_var < g.vars) opts.push_back(6);
    switch (rng.pick(opts)) {
      case 0:
        return Formula::tt();
      case 1:
        return Formula::ff();
      case 2: {
        std::vector<std::string> names;
        for (auto& v : vars)
          if (v.second) names.push_back(v.first);
        return Formula::var(rng.pick(names));
      }
      case 3: {
        Action a = rng.pick(g.actions);
        for (auto& v : vars) v.second = true;
        return Formula::box(a, go(depth - 1, flag && g.det.count(a), vars));
      }
      case 4: {
        Formula l = go(depth, flag, vars);
        return Formula::conj(l, go(depth, flag, vars));
      }
      case 5: {
        Formula l = go(depth, flag, vars);
        return Formula::disj(l, go(depth, flag, vars));
      }
      default: {
        std::string x = "X" + std::to_string(next_var++);
        vars.emplace_back(x, false);
        return Formula::max(x, go(depth, flag, vars));
      }
    }
  };
  return go(g.depth, true, {});
}

inline Formula random_formula(Rng& rng, const FormulaGen& g) {
  for (;;) {
    Formula phi = random_formula_once(rng, g);
    if (!g.det_guard || !g.disjunction || in_shml_det(phi, Determinacy::of(g.det))) return phi;
  }
}

// Every trace over `actions` of length at most max_len.
inline std::vector<Trace> all_traces(const std::vector<Action>& actions, std::size_t max_len) {
  std::vector<Trace> out{{}};
  std::vector<Trace> layer{{}};
  for (std::size_t n = 1; n <= max_len; ++n) {
    std::vector<Trace> next;
    for (const auto& t : layer)
      for (const auto& a : actions) {
        Trace u = t;
        u.push_back(a);
        next.push_back(u);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Every history of at most k traces drawn from pool, including the empty
// history.
inline void for_each_history(const std::vector<Trace>& pool, std::size_t k,
                             const std::function<void(const History&)>& f) {
  std::vector<Trace> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    f(History(chosen));
    if (chosen.size() == k) return;
    for (std::size_t i = from; i < pool.size(); ++i) {
      chosen.push_back(pool[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
}

inline History random_history(Rng& rng, const std::vector<Trace>& pool, std::size_t max_traces) {
  History h;
  std::size_t n = rng.below(max_traces + 1);
  for (std::size_t i = 0; i < n && !pool.empty(); ++i) h.insert(rng.pick(pool));
  return h;
}

}  // namespace mrv::testing
