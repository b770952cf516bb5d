#include "mrv/synthesis.hpp"

#include <set>

#include "fresh.hpp"
#include "mrv/fragments.hpp"

namespace mrv {

Monitor translate(const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::Ff: return Monitor::no();
    case FormulaKind::Tt: return Monitor::end();
    case FormulaKind::Var: return Monitor::var(phi.name());
    case FormulaKind::Box: return Monitor::act(phi.action(), translate(phi.body()));
    case FormulaKind::And: return Monitor::par_and(translate(phi.lhs()), translate(phi.rhs()));
    case FormulaKind::Or: return Monitor::par_or(translate(phi.lhs()), translate(phi.rhs()));
    case FormulaKind::Max: return Monitor::rec(phi.name(), translate(phi.body()));
    case FormulaKind::Min:
    case FormulaKind::Diamond: break;
  }
  throw FragmentError("no monitor for " + phi.to_string() + ": least fixpoints and diamonds are not monitorable here");
}

Monitor synth(const Formula& phi, const Determinacy& det) {
  if (auto m = in_shml_det(phi, det); !m) throw FragmentError("formula is not monitorable under det " + det.to_string() + ": " + m.reason);
  return translate(phi);
}

Formula rev_synth(const Monitor& m) {
  switch (m.kind()) {
    case MonitorKind::No: return Formula::ff();
    case MonitorKind::End: return Formula::tt();
    case MonitorKind::Var: return Formula::var(m.name());
    case MonitorKind::Act: return Formula::box(m.action(), rev_synth(m.body()));
    case MonitorKind::ParAnd: return Formula::conj(rev_synth(m.lhs()), rev_synth(m.rhs()));
    case MonitorKind::ParOr: return Formula::disj(rev_synth(m.lhs()), rev_synth(m.rhs()));
    case MonitorKind::Rec: return Formula::max(m.name(), rev_synth(m.body()));
  }
  return Formula::tt();
}

// The flag only ever drops from true to false along a path, so a variable is
// re-expanded at most once and the recursion terminates without a memo table.
Monitor normalize(const Monitor& m, const Determinacy& det, bool flag, const NormEnv& env) {
  switch (m.kind()) {
    case MonitorKind::No:
    case MonitorKind::End:
      return m;
    case MonitorKind::Var: {
      auto it = env.find(m.name());
      if (it == env.end()) return m;
      const auto& [bound, bound_flag] = it->second;
      if (bound_flag == flag) return m;
      return normalize(bound, det, flag, env);
    }
    case MonitorKind::Rec: {
      NormEnv inner = env;
      inner[m.name()] = {m, flag};
      return Monitor::rec(m.name(), normalize(m.body(), det, flag, inner));
    }
    case MonitorKind::Act:
      return Monitor::act(m.action(), normalize(m.body(), det, flag && det(m.action()), env));
    case MonitorKind::ParAnd:
      return Monitor::par_and(normalize(m.lhs(), det, flag, env), normalize(m.rhs(), det, flag, env));
    case MonitorKind::ParOr:
      if (!flag) return Monitor::end();
      return Monitor::par_or(normalize(m.lhs(), det, flag, env), normalize(m.rhs(), det, flag, env));
  }
  return m;
}

namespace {

// Gives every rec binder a distinct name, so that bodies copied by the
// re-expansion above are never placed under a binder that shadows one of
// their free variables.
Monitor distinct_binders(const Monitor& m, std::set<std::string>& used) {
  switch (m.kind()) {
    case MonitorKind::Act:
      return Monitor::act(m.action(), distinct_binders(m.body(), used));
    case MonitorKind::ParAnd:
      return Monitor::par_and(distinct_binders(m.lhs(), used), distinct_binders(m.rhs(), used));
    case MonitorKind::ParOr:
      return Monitor::par_or(distinct_binders(m.lhs(), used), distinct_binders(m.rhs(), used));
    case MonitorKind::Rec: {
      std::string x = m.name();
      Monitor body = m.body();
      if (used.count(x)) {
        std::vector<std::string> taken(used.begin(), used.end());
        taken = detail::merge_names(taken, body.free_vars());
        x = detail::fresh_name(x, taken);
        body = substitute(body, m.name(), Monitor::var(x));
      }
      used.insert(x);
      return Monitor::rec(x, distinct_binders(body, used));
    }
    default:
      return m;
  }
}

}  // namespace

Monitor normalize(const Monitor& m, const Determinacy& det) {
  std::set<std::string> used(m.free_vars().begin(), m.free_vars().end());
  return normalize(distinct_binders(m, used), det, true, {});
}

}  // namespace mrv
