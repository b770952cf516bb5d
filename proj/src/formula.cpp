#include "mrv/formula.hpp"

#include <cassert>
#include <functional>
#include <mutex>
#include <stdexcept>

#include "fresh.hpp"

namespace mrv {

struct Formula::Node {
  FormulaKind kind;
  std::string name;
  Action action;
  Formula a{nullptr};
  Formula b{nullptr};
  std::vector<std::string> fv;
  std::size_t size = 1;
  std::size_t depth = 1;
  mutable std::once_flag once;
  mutable std::string canon;
  mutable std::size_t hash = 0;
};

namespace {

using Node = Formula::Node;

std::shared_ptr<Node> make(FormulaKind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

void canon_into(const Formula& f, std::vector<std::string>& bound, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Tt: out += 'T'; return;
    case FormulaKind::Ff: out += 'F'; return;
    case FormulaKind::Var: {
      for (std::size_t i = bound.size(); i-- > 0;) {
        if (bound[i] == f.name()) {
          out += '#' + std::to_string(bound.size() - 1 - i) + ';';
          return;
        }
      }
      out += '$' + std::to_string(f.name().size()) + ':' + f.name();
      return;
    }
    case FormulaKind::Box:
    case FormulaKind::Diamond: {
      auto label = f.action().to_string();
      out += f.kind() == FormulaKind::Box ? '[' : '<';
      out += std::to_string(label.size()) + ':' + label;
      canon_into(f.body(), bound, out);
      return;
    }
    case FormulaKind::And:
    case FormulaKind::Or:
      out += f.kind() == FormulaKind::And ? "(&" : "(|";
      canon_into(f.lhs(), bound, out);
      out += ',';
      canon_into(f.rhs(), bound, out);
      out += ')';
      return;
    case FormulaKind::Max:
    case FormulaKind::Min:
      out += f.kind() == FormulaKind::Max ? "M." : "m.";
      bound.push_back(f.name());
      canon_into(f.body(), bound, out);
      bound.pop_back();
      return;
  }
}

const Formula& tt_value() {
  static const Formula v = [] { return Formula::tt(); }();
  return v;
}

}  // namespace

Formula::Formula() : Formula(tt_value()) {}

Formula Formula::tt() {
  static const std::shared_ptr<const Node> n = make(FormulaKind::Tt);
  return Formula(n);
}

Formula Formula::ff() {
  static const std::shared_ptr<const Node> n = make(FormulaKind::Ff);
  return Formula(n);
}

Formula Formula::var(std::string name) {
  auto n = make(FormulaKind::Var);
  n->fv = {name};
  n->name = std::move(name);
  return Formula(std::move(n));
}

namespace {

std::shared_ptr<Node> unary(FormulaKind k, Formula body) {
  auto n = make(k);
  n->fv = body.free_vars();
  n->size = body.size() + 1;
  n->depth = body.depth() + 1;
  n->a = std::move(body);
  return n;
}

std::shared_ptr<Node> binary(FormulaKind k, Formula l, Formula r) {
  auto n = make(k);
  n->fv = detail::merge_names(l.free_vars(), r.free_vars());
  n->size = l.size() + r.size() + 1;
  n->depth = std::max(l.depth(), r.depth()) + 1;
  n->a = std::move(l);
  n->b = std::move(r);
  return n;
}

std::shared_ptr<Node> binder(FormulaKind k, std::string x, Formula body) {
  auto n = unary(k, std::move(body));
  std::erase(n->fv, x);
  n->name = std::move(x);
  return n;
}

}  // namespace

Formula Formula::box(Action a, Formula body) {
  auto n = unary(FormulaKind::Box, std::move(body));
  n->action = a;
  return Formula(std::move(n));
}

Formula Formula::diamond(Action a, Formula body) {
  auto n = unary(FormulaKind::Diamond, std::move(body));
  n->action = a;
  return Formula(std::move(n));
}

Formula Formula::conj(Formula l, Formula r) { return Formula(binary(FormulaKind::And, std::move(l), std::move(r))); }
Formula Formula::disj(Formula l, Formula r) { return Formula(binary(FormulaKind::Or, std::move(l), std::move(r))); }
Formula Formula::max(std::string x, Formula body) { return Formula(binder(FormulaKind::Max, std::move(x), std::move(body))); }
Formula Formula::min(std::string x, Formula body) { return Formula(binder(FormulaKind::Min, std::move(x), std::move(body))); }

FormulaKind Formula::kind() const { return n_->kind; }
const std::string& Formula::name() const { return n_->name; }
const Action& Formula::action() const { return n_->action; }
const Formula& Formula::body() const { return n_->a; }
const Formula& Formula::lhs() const { return n_->a; }
const Formula& Formula::rhs() const { return n_->b; }
const std::vector<std::string>& Formula::free_vars() const { return n_->fv; }
std::size_t Formula::size() const { return n_->size; }
std::size_t Formula::depth() const { return n_->depth; }

const std::string& Formula::canonical() const {
  std::call_once(n_->once, [this] {
    std::vector<std::string> bound;
    canon_into(*this, bound, n_->canon);
    n_->hash = std::hash<std::string>{}(n_->canon);
  });
  return n_->canon;
}

std::size_t Formula::hash() const {
  canonical();
  return n_->hash;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  return a.canonical() == b.canonical();
}

// Printing. A fixpoint extends as far right as possible, so it is wrapped
// unless nothing follows it.
namespace {

void print_into(const Formula& f, bool tail, std::string& out);

void print_operand(const Formula& f, bool parens, bool tail, std::string& out) {
  if (parens) {
    out += '(';
    print_into(f, true, out);
    out += ')';
  } else {
    print_into(f, tail, out);
  }
}

void print_into(const Formula& f, bool tail, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Tt: out += "tt"; return;
    case FormulaKind::Ff: out += "ff"; return;
    case FormulaKind::Var: out += f.name(); return;
    case FormulaKind::Box:
    case FormulaKind::Diamond: {
      bool box = f.kind() == FormulaKind::Box;
      out += box ? '[' : '<';
      out += f.action().to_string();
      out += box ? ']' : '>';
      print_operand(f.body(), f.body().is_binary(), tail, out);
      return;
    }
    case FormulaKind::And:
      print_operand(f.lhs(), f.lhs().kind() == FormulaKind::Or, false, out);
      out += " & ";
      print_operand(f.rhs(), f.rhs().is_binary(), tail, out);
      return;
    case FormulaKind::Or:
      print_operand(f.lhs(), false, false, out);
      out += " | ";
      print_operand(f.rhs(), f.rhs().kind() == FormulaKind::Or, tail, out);
      return;
    case FormulaKind::Max:
    case FormulaKind::Min:
      if (!tail) out += '(';
      out += f.kind() == FormulaKind::Max ? "max " : "min ";
      out += f.name();
      out += '.';
      print_operand(f.body(), f.body().is_binary(), true, out);
      if (!tail) out += ')';
      return;
  }
}

}  // namespace

std::string Formula::to_string() const {
  std::string out;
  print_into(*this, true, out);
  return out;
}

namespace {

Formula rebuild(const Formula& f, const Formula& a, const Formula& b) {
  switch (f.kind()) {
    case FormulaKind::Box:
      return a.same_node(f.body()) ? f : Formula::box(f.action(), a);
    case FormulaKind::Diamond:
      return a.same_node(f.body()) ? f : Formula::diamond(f.action(), a);
    case FormulaKind::And:
      return a.same_node(f.lhs()) && b.same_node(f.rhs()) ? f : Formula::conj(a, b);
    case FormulaKind::Or:
      return a.same_node(f.lhs()) && b.same_node(f.rhs()) ? f : Formula::disj(a, b);
    default:
      return f;
  }
}

Formula subst(const Formula& f, const std::string& x, const Formula& psi) {
  if (!detail::has_name(f.free_vars(), x)) return f;
  switch (f.kind()) {
    case FormulaKind::Var:
      return psi;
    case FormulaKind::Box:
    case FormulaKind::Diamond:
      return rebuild(f, subst(f.body(), x, psi), f.body());
    case FormulaKind::And:
    case FormulaKind::Or:
      return rebuild(f, subst(f.lhs(), x, psi), subst(f.rhs(), x, psi));
    case FormulaKind::Max:
    case FormulaKind::Min: {
      std::string y = f.name();
      Formula body = f.body();
      if (detail::has_name(psi.free_vars(), y)) {
        auto taken = detail::merge_names(psi.free_vars(), body.free_vars());
        taken = detail::merge_names(taken, {x});
        std::string fresh = detail::fresh_name(y, taken);
        body = subst(body, y, Formula::var(fresh));
        y = fresh;
      }
      body = subst(body, x, psi);
      return f.kind() == FormulaKind::Max ? Formula::max(y, body) : Formula::min(y, body);
    }
    default:
      return f;
  }
}

}  // namespace

Formula substitute(const Formula& phi, const std::string& x, const Formula& psi) {
  return subst(phi, x, psi);
}

Formula unfold(const Formula& fixpoint) {
  if (!fixpoint.is_fixpoint()) throw std::invalid_argument("unfold: not a fixpoint: " + fixpoint.to_string());
  return subst(fixpoint.body(), fixpoint.name(), fixpoint);
}

namespace {

bool guarded_in(const Formula& f, std::vector<std::string>& unguarded) {
  switch (f.kind()) {
    case FormulaKind::Var:
      return std::find(unguarded.begin(), unguarded.end(), f.name()) == unguarded.end();
    case FormulaKind::Box:
    case FormulaKind::Diamond: {
      std::vector<std::string> none;
      return guarded_in(f.body(), none);
    }
    case FormulaKind::And:
    case FormulaKind::Or:
      return guarded_in(f.lhs(), unguarded) && guarded_in(f.rhs(), unguarded);
    case FormulaKind::Max:
    case FormulaKind::Min: {
      unguarded.push_back(f.name());
      bool ok = guarded_in(f.body(), unguarded);
      unguarded.pop_back();
      return ok;
    }
    default:
      return true;
  }
}

}  // namespace

bool is_guarded(const Formula& phi) {
  std::vector<std::string> unguarded;
  return guarded_in(phi, unguarded);
}

}  // namespace mrv
