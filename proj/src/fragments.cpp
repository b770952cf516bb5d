#include "mrv/fragments.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace mrv {

bool is_shml(const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::Tt:
    case FormulaKind::Ff:
    case FormulaKind::Var:
      return true;
    case FormulaKind::Box:
    case FormulaKind::Max:
      return is_shml(phi.body());
    case FormulaKind::And:
      return is_shml(phi.lhs()) && is_shml(phi.rhs());
    default:
      return false;
  }
}

namespace {

// Greatest fixed point: pairs already on the table count as established.
// Every rule is syntax directed, so any failure sinks the whole judgement.
class DetChecker {
 public:
  explicit DetChecker(const Determinacy& det) : det_(det) {}

  Membership check(const Formula& phi) {
    Membership m;
    m.member = visit(true, phi);
    m.reason = reason_;
    return m;
  }

  Membership check(const Monitor& m) {
    Membership r;
    r.member = visit(true, m);
    r.reason = reason_;
    return r;
  }

 private:
  bool fail(std::string why) {
    if (reason_.empty()) reason_ = std::move(why);
    return false;
  }

  bool visit(bool flag, const Formula& phi) {
    if (!seen_.insert({flag, phi.canonical()}).second) return true;
    switch (phi.kind()) {
      case FormulaKind::Tt:
      case FormulaKind::Ff:
      case FormulaKind::Var:
        return true;
      case FormulaKind::Box:
        return visit(flag && det_(phi.action()), phi.body());
      case FormulaKind::And:
        return visit(flag, phi.lhs()) && visit(flag, phi.rhs());
      case FormulaKind::Or:
        if (!flag) return fail("disjunction " + phi.to_string() + " follows a non-deterministic action");
        return visit(true, phi.lhs()) && visit(true, phi.rhs());
      case FormulaKind::Max:
        return visit(flag, unfold(phi));
      case FormulaKind::Min:
        return fail("least fixpoint " + phi.to_string() + " is outside the fragment");
      case FormulaKind::Diamond:
        return fail("diamond modality " + phi.to_string() + " is outside the fragment");
    }
    return false;
  }

  bool visit(bool flag, const Monitor& m) {
    if (!seen_.insert({flag, m.canonical()}).second) return true;
    switch (m.kind()) {
      case MonitorKind::No:
      case MonitorKind::End:
      case MonitorKind::Var:
        return true;
      case MonitorKind::Act:
        return visit(flag && det_(m.action()), m.body());
      case MonitorKind::ParAnd:
        return visit(flag, m.lhs()) && visit(flag, m.rhs());
      case MonitorKind::ParOr:
        if (!flag) return fail("parallel disjunction " + m.to_string() + " follows a non-deterministic action");
        return visit(true, m.lhs()) && visit(true, m.rhs());
      case MonitorKind::Rec:
        return visit(flag, unfold(m));
    }
    return false;
  }

  const Determinacy& det_;
  std::set<std::pair<bool, std::string>> seen_;
  std::string reason_;
};

void collect_disjuncts(const Formula& phi, std::vector<Formula>& out) {
  if (phi.kind() == FormulaKind::Or) {
    collect_disjuncts(phi.lhs(), out);
    collect_disjuncts(phi.rhs(), out);
  } else {
    out.push_back(phi);
  }
}

bool collect_boxes(const Formula& phi, std::vector<Formula>& out) {
  if (phi.kind() == FormulaKind::Box) {
    out.push_back(phi);
    return true;
  }
  if (phi.kind() == FormulaKind::And) return collect_boxes(phi.lhs(), out) && collect_boxes(phi.rhs(), out);
  return false;
}

}  // namespace

Membership in_shml_det(const Formula& phi, const Determinacy& det) { return DetChecker(det).check(phi); }

Membership in_mon_det(const Monitor& m, const Determinacy& det) { return DetChecker(det).check(m); }

bool in_shml_nf(const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::Tt:
    case FormulaKind::Ff:
    case FormulaKind::Var:
      return true;
    case FormulaKind::Box:
    case FormulaKind::Max:
      return in_shml_nf(phi.body());
    case FormulaKind::And:
      return in_shml_nf(phi.lhs()) && in_shml_nf(phi.rhs());
    case FormulaKind::Or: {
      std::vector<Formula> parts;
      collect_disjuncts(phi, parts);
      // Each disjunct is a box or a conjunction of boxes; the guarding
      // actions of distinct disjuncts must not overlap.
      std::set<Action> actions;
      for (const auto& p : parts) {
        std::vector<Formula> boxes;
        if (!collect_boxes(p, boxes)) return false;
        std::set<Action> own;
        for (const auto& b : boxes) {
          if (actions.count(b.action())) return false;
          own.insert(b.action());
          if (!in_shml_nf(b.body())) return false;
        }
        actions.insert(own.begin(), own.end());
      }
      return true;
    }
    default:
      return false;
  }
}

BoundValue lb(const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::Ff: return BoundValue(0);
    case FormulaKind::Tt:
    case FormulaKind::Var: return BoundValue::infinity();
    case FormulaKind::Box:
    case FormulaKind::Max: return lb(phi.body());
    case FormulaKind::And: return std::min(lb(phi.lhs()), lb(phi.rhs()));
    case FormulaKind::Or: return lb(phi.lhs()) + lb(phi.rhs()) + BoundValue(1);
    default: throw std::invalid_argument("lb: " + phi.to_string() + " is outside the disjunctive safety grammar");
  }
}

}  // namespace mrv
