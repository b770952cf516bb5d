#include "mrv/monitor.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <stdexcept>

#include "fresh.hpp"
#include "lexer.hpp"

namespace mrv {

struct Monitor::Node {
  MonitorKind kind;
  std::string name;
  Action action;
  Monitor a{nullptr};
  Monitor b{nullptr};
  std::vector<std::string> fv;
  std::size_t size = 1;
  std::size_t depth = 1;
  mutable std::once_flag once;
  mutable std::string canon;
  mutable std::size_t hash = 0;
};

namespace {

using Node = Monitor::Node;

std::shared_ptr<Node> make(MonitorKind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

void canon_into(const Monitor& m, std::vector<std::string>& bound, std::string& out) {
  switch (m.kind()) {
    case MonitorKind::No: out += 'N'; return;
    case MonitorKind::End: out += 'E'; return;
    case MonitorKind::Var: {
      for (std::size_t i = bound.size(); i-- > 0;) {
        if (bound[i] == m.name()) {
          out += '#' + std::to_string(bound.size() - 1 - i) + ';';
          return;
        }
      }
      out += '$' + std::to_string(m.name().size()) + ':' + m.name();
      return;
    }
    case MonitorKind::Act: {
      auto label = m.action().to_string();
      out += '.' + std::to_string(label.size()) + ':' + label;
      canon_into(m.body(), bound, out);
      return;
    }
    case MonitorKind::ParOr:
    case MonitorKind::ParAnd:
      out += m.kind() == MonitorKind::ParAnd ? "(*" : "(+";
      canon_into(m.lhs(), bound, out);
      out += ',';
      canon_into(m.rhs(), bound, out);
      out += ')';
      return;
    case MonitorKind::Rec:
      out += "R.";
      bound.push_back(m.name());
      canon_into(m.body(), bound, out);
      bound.pop_back();
      return;
  }
}

const Monitor& end_value() {
  static const Monitor v = [] { return Monitor::end(); }();
  return v;
}

}  // namespace

Monitor::Monitor() : Monitor(end_value()) {}

Monitor Monitor::no() {
  static const std::shared_ptr<const Node> n = make(MonitorKind::No);
  return Monitor(n);
}

Monitor Monitor::end() {
  static const std::shared_ptr<const Node> n = make(MonitorKind::End);
  return Monitor(n);
}

Monitor Monitor::var(std::string name) {
  auto n = make(MonitorKind::Var);
  n->fv = {name};
  n->name = std::move(name);
  return Monitor(std::move(n));
}

Monitor Monitor::act(Action a, Monitor cont) {
  auto n = make(MonitorKind::Act);
  n->fv = cont.free_vars();
  n->size = cont.size() + 1;
  n->depth = cont.depth() + 1;
  n->action = a;
  n->a = std::move(cont);
  return Monitor(std::move(n));
}

Monitor Monitor::rec(std::string x, Monitor body) {
  auto n = make(MonitorKind::Rec);
  n->fv = body.free_vars();
  std::erase(n->fv, x);
  n->size = body.size() + 1;
  n->depth = body.depth() + 1;
  n->name = std::move(x);
  n->a = std::move(body);
  return Monitor(std::move(n));
}

namespace {

Monitor binary(MonitorKind k, Monitor l, Monitor r);

}  // namespace

Monitor Monitor::par_or(Monitor l, Monitor r) {
  auto n = make(MonitorKind::ParOr);
  n->fv = detail::merge_names(l.free_vars(), r.free_vars());
  n->size = l.size() + r.size() + 1;
  n->depth = std::max(l.depth(), r.depth()) + 1;
  n->a = std::move(l);
  n->b = std::move(r);
  return Monitor(std::move(n));
}

Monitor Monitor::par_and(Monitor l, Monitor r) {
  auto n = make(MonitorKind::ParAnd);
  n->fv = detail::merge_names(l.free_vars(), r.free_vars());
  n->size = l.size() + r.size() + 1;
  n->depth = std::max(l.depth(), r.depth()) + 1;
  n->a = std::move(l);
  n->b = std::move(r);
  return Monitor(std::move(n));
}

namespace {

Monitor binary(MonitorKind k, Monitor l, Monitor r) {
  return k == MonitorKind::ParOr ? Monitor::par_or(std::move(l), std::move(r))
                                 : Monitor::par_and(std::move(l), std::move(r));
}

}  // namespace

MonitorKind Monitor::kind() const { return n_->kind; }
const std::string& Monitor::name() const { return n_->name; }
const Action& Monitor::action() const { return n_->action; }
const Monitor& Monitor::body() const { return n_->a; }
const Monitor& Monitor::lhs() const { return n_->a; }
const Monitor& Monitor::rhs() const { return n_->b; }
const std::vector<std::string>& Monitor::free_vars() const { return n_->fv; }
std::size_t Monitor::size() const { return n_->size; }
std::size_t Monitor::depth() const { return n_->depth; }

const std::string& Monitor::canonical() const {
  std::call_once(n_->once, [this] {
    std::vector<std::string> bound;
    canon_into(*this, bound, n_->canon);
    n_->hash = std::hash<std::string>{}(n_->canon);
  });
  return n_->canon;
}

std::size_t Monitor::hash() const {
  canonical();
  return n_->hash;
}

bool operator==(const Monitor& a, const Monitor& b) {
  if (a.n_ == b.n_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  return a.canonical() == b.canonical();
}

namespace {

void print_into(const Monitor& m, bool tail, std::string& out);

void print_operand(const Monitor& m, bool parens, bool tail, std::string& out) {
  if (parens) {
    out += '(';
    print_into(m, true, out);
    out += ')';
  } else {
    print_into(m, tail, out);
  }
}

void print_into(const Monitor& m, bool tail, std::string& out) {
  switch (m.kind()) {
    case MonitorKind::No: out += "no"; return;
    case MonitorKind::End: out += "end"; return;
    case MonitorKind::Var: out += m.name(); return;
    case MonitorKind::Act:
      out += detail::quote_action(m.action().to_string());
      out += '.';
      print_operand(m.body(), m.body().is_par(), tail, out);
      return;
    case MonitorKind::ParAnd:
      print_operand(m.lhs(), m.lhs().kind() == MonitorKind::ParOr, false, out);
      out += " (*) ";
      print_operand(m.rhs(), m.rhs().is_par(), tail, out);
      return;
    case MonitorKind::ParOr:
      print_operand(m.lhs(), false, false, out);
      out += " (+) ";
      print_operand(m.rhs(), m.rhs().kind() == MonitorKind::ParOr, tail, out);
      return;
    case MonitorKind::Rec:
      if (!tail) out += '(';
      out += "rec " + m.name() + '.';
      print_operand(m.body(), m.body().is_par(), true, out);
      if (!tail) out += ')';
      return;
  }
}

Monitor rebuild(const Monitor& m, const Monitor& a, const Monitor& b) {
  switch (m.kind()) {
    case MonitorKind::Act:
      return a.same_node(m.body()) ? m : Monitor::act(m.action(), a);
    case MonitorKind::ParOr:
    case MonitorKind::ParAnd:
      return a.same_node(m.lhs()) && b.same_node(m.rhs()) ? m : binary(m.kind(), a, b);
    default:
      return m;
  }
}

Monitor subst(const Monitor& m, const std::string& x, const Monitor& n) {
  if (!detail::has_name(m.free_vars(), x)) return m;
  switch (m.kind()) {
    case MonitorKind::Var:
      return n;
    case MonitorKind::Act:
      return rebuild(m, subst(m.body(), x, n), m.body());
    case MonitorKind::ParOr:
    case MonitorKind::ParAnd:
      return rebuild(m, subst(m.lhs(), x, n), subst(m.rhs(), x, n));
    case MonitorKind::Rec: {
      std::string y = m.name();
      Monitor body = m.body();
      if (detail::has_name(n.free_vars(), y)) {
        auto taken = detail::merge_names(n.free_vars(), body.free_vars());
        taken = detail::merge_names(taken, {x});
        std::string fresh = detail::fresh_name(y, taken);
        body = subst(body, y, Monitor::var(fresh));
        y = fresh;
      }
      return Monitor::rec(y, subst(body, x, n));
    }
    default:
      return m;
  }
}

bool guarded_in(const Monitor& m, std::vector<std::string>& unguarded) {
  switch (m.kind()) {
    case MonitorKind::Var:
      return std::find(unguarded.begin(), unguarded.end(), m.name()) == unguarded.end();
    case MonitorKind::Act: {
      std::vector<std::string> none;
      return guarded_in(m.body(), none);
    }
    case MonitorKind::ParOr:
    case MonitorKind::ParAnd:
      return guarded_in(m.lhs(), unguarded) && guarded_in(m.rhs(), unguarded);
    case MonitorKind::Rec: {
      unguarded.push_back(m.name());
      bool ok = guarded_in(m.body(), unguarded);
      unguarded.pop_back();
      return ok;
    }
    default:
      return true;
  }
}

}  // namespace

std::string Monitor::to_string() const {
  std::string out;
  print_into(*this, true, out);
  return out;
}

Monitor substitute(const Monitor& m, const std::string& x, const Monitor& n) { return subst(m, x, n); }

Monitor unfold(const Monitor& rec) {
  if (rec.kind() != MonitorKind::Rec) throw std::invalid_argument("unfold: not a rec monitor: " + rec.to_string());
  return subst(rec.body(), rec.name(), rec);
}

bool is_guarded(const Monitor& m) {
  std::vector<std::string> unguarded;
  return guarded_in(m, unguarded);
}

}  // namespace mrv
