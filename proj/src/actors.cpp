#include "mrv/actors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lexer.hpp"
#include "mrv/parse.hpp"

namespace mrv::actor {

// Terms

bool Term::is_value() const {
  if (kind == Kind::Var) return false;
  return std::all_of(elems.begin(), elems.end(), [](const Term& t) { return t.is_value(); });
}

std::string Term::to_string() const {
  if (kind != Kind::Tuple) return name;
  std::string out = "{";
  for (std::size_t i = 0; i < elems.size(); ++i) out += (i ? "," : "") + elems[i].to_string();
  return out + "}";
}

namespace {

void collect_names(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Id) out.insert(t.name);
  for (const auto& e : t.elems) collect_names(e, out);
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  for (const auto& e : t.elems) collect_vars(e, out);
}

Term subst_term(const Term& t, const Subst& s) {
  if (t.kind == Term::Kind::Var) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  if (t.kind != Term::Kind::Tuple) return t;
  Term out = t;
  for (auto& e : out.elems) e = subst_term(e, s);
  return out;
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& ids) {
  Term out = t;
  if (t.kind == Term::Kind::Id) {
    if (auto it = ids.find(t.name); it != ids.end()) out.name = it->second;
  }
  for (auto& e : out.elems) e = rename_term(e, ids);
  return out;
}

}  // namespace

std::set<std::string> names_of(const Term& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

std::optional<Subst> match(const Term& pattern, const Term& value) {
  switch (pattern.kind) {
    case Term::Kind::Var:
      return Subst{{pattern.name, value}};
    case Term::Kind::Atom:
    case Term::Kind::Id:
      if (value.kind == pattern.kind && value.name == pattern.name) return Subst{};
      return std::nullopt;
    case Term::Kind::Tuple: {
      if (value.kind != Term::Kind::Tuple || value.elems.size() != pattern.elems.size()) return std::nullopt;
      Subst out;
      for (std::size_t i = 0; i < pattern.elems.size(); ++i) {
        auto part = match(pattern.elems[i], value.elems[i]);
        if (!part) return std::nullopt;
        for (auto& [x, v] : *part) {
          auto [it, fresh] = out.emplace(x, v);
          if (!fresh && !(it->second == v)) return std::nullopt;
        }
      }
      return out;
    }
  }
  return std::nullopt;
}

bool absent(const Term& pattern, const std::vector<Term>& mailbox) {
  return std::none_of(mailbox.begin(), mailbox.end(), [&](const Term& v) { return match(pattern, v).has_value(); });
}

// Expressions

namespace {

Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

}  // namespace

Expr done() {
  static const Expr d = make({});
  return d;
}

Expr send(Term target, Term payload, Expr cont) {
  ExprNode n;
  n.kind = ExprKind::Send;
  n.target = std::move(target);
  n.payload = std::move(payload);
  n.first = std::move(cont);
  return make(std::move(n));
}

Expr recv(std::vector<std::pair<Term, Expr>> branches) {
  ExprNode n;
  n.kind = ExprKind::Recv;
  n.branches = std::move(branches);
  return make(std::move(n));
}

Expr spawn(Expr body, std::string x, Expr cont) {
  ExprNode n;
  n.kind = ExprKind::Spawn;
  n.name = std::move(x);
  n.first = std::move(body);
  n.second = std::move(cont);
  return make(std::move(n));
}

Expr self(std::string x, Expr cont) {
  ExprNode n;
  n.kind = ExprKind::Self;
  n.name = std::move(x);
  n.first = std::move(cont);
  return make(std::move(n));
}

Expr rec(std::string x, Expr body) {
  ExprNode n;
  n.kind = ExprKind::Rec;
  n.name = std::move(x);
  n.first = std::move(body);
  return make(std::move(n));
}

Expr tvar(std::string x) {
  ExprNode n;
  n.kind = ExprKind::Var;
  n.name = std::move(x);
  return make(std::move(n));
}

std::string to_string(const Expr& e) {
  switch (e->kind) {
    case ExprKind::Done:
      return "done";
    case ExprKind::Send: {
      std::string out = e->target.to_string() + "!" + e->payload.to_string();
      if (e->first->kind != ExprKind::Done) out += "." + to_string(e->first);
      return out;
    }
    case ExprKind::Recv: {
      std::string out = "rcv {";
      for (std::size_t i = 0; i < e->branches.size(); ++i)
        out += (i ? ", " : "") + e->branches[i].first.to_string() + " -> " + to_string(e->branches[i].second);
      return out + "}";
    }
    case ExprKind::Spawn:
      return "spawn (" + to_string(e->first) + ") as " + e->name + " in " + to_string(e->second);
    case ExprKind::Self:
      return "self " + e->name + " in " + to_string(e->first);
    case ExprKind::Rec:
      return "rec " + e->name + "." + to_string(e->first);
    case ExprKind::Var:
      return e->name;
  }
  return "?";
}

Expr substitute(const Expr& e, const Subst& s) {
  if (s.empty()) return e;
  switch (e->kind) {
    case ExprKind::Done:
    case ExprKind::Var:
      return e;
    case ExprKind::Send:
      return send(subst_term(e->target, s), subst_term(e->payload, s), substitute(e->first, s));
    case ExprKind::Recv: {
      std::vector<std::pair<Term, Expr>> bs;
      for (const auto& [p, body] : e->branches) {
        std::set<std::string> bound;
        collect_vars(p, bound);
        Subst inner = s;
        for (const auto& x : bound) inner.erase(x);
        bs.emplace_back(p, substitute(body, inner));
      }
      return recv(std::move(bs));
    }
    case ExprKind::Spawn: {
      Subst inner = s;
      inner.erase(e->name);
      return spawn(substitute(e->first, s), e->name, substitute(e->second, inner));
    }
    case ExprKind::Self: {
      Subst inner = s;
      inner.erase(e->name);
      return self(e->name, substitute(e->first, inner));
    }
    case ExprKind::Rec:
      return rec(e->name, substitute(e->first, s));
  }
  return e;
}

namespace {

Expr subst_tvar(const Expr& e, const std::string& x, const Expr& r) {
  switch (e->kind) {
    case ExprKind::Done:
      return e;
    case ExprKind::Var:
      return e->name == x ? r : e;
    case ExprKind::Send:
      return send(e->target, e->payload, subst_tvar(e->first, x, r));
    case ExprKind::Recv: {
      std::vector<std::pair<Term, Expr>> bs;
      for (const auto& [p, body] : e->branches) bs.emplace_back(p, subst_tvar(body, x, r));
      return recv(std::move(bs));
    }
    case ExprKind::Spawn:
      return spawn(subst_tvar(e->first, x, r), e->name, subst_tvar(e->second, x, r));
    case ExprKind::Self:
      return self(e->name, subst_tvar(e->first, x, r));
    case ExprKind::Rec:
      return e->name == x ? e : rec(e->name, subst_tvar(e->first, x, r));
  }
  return e;
}

void collect_names(const Expr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case ExprKind::Send:
      collect_names(e->target, out);
      collect_names(e->payload, out);
      collect_names(e->first, out);
      break;
    case ExprKind::Recv:
      for (const auto& [p, body] : e->branches) {
        collect_names(p, out);
        collect_names(body, out);
      }
      break;
    case ExprKind::Spawn:
      collect_names(e->first, out);
      collect_names(e->second, out);
      break;
    case ExprKind::Self:
    case ExprKind::Rec:
      collect_names(e->first, out);
      break;
    default:
      break;
  }
}

}  // namespace

Expr unfold(const Expr& r) {
  if (r->kind != ExprKind::Rec) throw std::invalid_argument("unfold expects a recursive expression");
  return subst_tvar(r->first, r->name, r);
}

Expr rename(const Expr& e, const std::map<std::string, std::string>& ids) {
  if (ids.empty()) return e;
  switch (e->kind) {
    case ExprKind::Done:
    case ExprKind::Var:
      return e;
    case ExprKind::Send:
      return send(rename_term(e->target, ids), rename_term(e->payload, ids), rename(e->first, ids));
    case ExprKind::Recv: {
      std::vector<std::pair<Term, Expr>> bs;
      for (const auto& [p, body] : e->branches) bs.emplace_back(rename_term(p, ids), rename(body, ids));
      return recv(std::move(bs));
    }
    case ExprKind::Spawn:
      return spawn(rename(e->first, ids), e->name, rename(e->second, ids));
    case ExprKind::Self:
      return self(e->name, rename(e->first, ids));
    case ExprKind::Rec:
      return rec(e->name, rename(e->first, ids));
  }
  return e;
}

std::set<std::string> names_of(const Expr& e) {
  std::set<std::string> out;
  collect_names(e, out);
  return out;
}

// Tree systems

namespace {

ActorSystem make_sys(SystemNode n) { return std::make_shared<const SystemNode>(std::move(n)); }

}  // namespace

ActorSystem nil_system() {
  static const ActorSystem n = make_sys({});
  return n;
}

ActorSystem actor_system(std::string id, Expr e, std::vector<Term> mailbox) {
  SystemNode n;
  n.kind = SystemNode::Kind::Actor;
  n.id = std::move(id);
  n.expr = std::move(e);
  n.mailbox = std::move(mailbox);
  return make_sys(std::move(n));
}

ActorSystem ether(std::string target, Term v) {
  SystemNode n;
  n.kind = SystemNode::Kind::Ether;
  n.id = std::move(target);
  n.message = std::move(v);
  return make_sys(std::move(n));
}

ActorSystem par(ActorSystem a, ActorSystem b) {
  SystemNode n;
  n.kind = SystemNode::Kind::Par;
  n.left = std::move(a);
  n.right = std::move(b);
  return make_sys(std::move(n));
}

ActorSystem scoped(std::string id, ActorSystem a) {
  SystemNode n;
  n.kind = SystemNode::Kind::New;
  n.id = std::move(id);
  n.left = std::move(a);
  return make_sys(std::move(n));
}

namespace {

std::string mailbox_string(const std::vector<Term>& q) {
  std::string out;
  for (std::size_t i = 0; i < q.size(); ++i) out += (i ? ":" : "") + q[i].to_string();
  return out;
}

std::string actor_string(const std::string& id, const Expr& e, const std::vector<Term>& q) {
  return id + "<" + to_string(e) + (q.empty() ? "" : " | " + mailbox_string(q)) + ">";
}

}  // namespace

std::string to_string(const ActorSystem& a) {
  switch (a->kind) {
    case SystemNode::Kind::Nil:
      return "nil";
    case SystemNode::Kind::Actor:
      return actor_string(a->id, a->expr, a->mailbox);
    case SystemNode::Kind::Ether:
      return "[" + a->id + "!" + a->message.to_string() + "]";
    case SystemNode::Kind::Par:
      return "(" + to_string(a->left) + " || " + to_string(a->right) + ")";
    case SystemNode::Kind::New:
      return "nu " + a->id + "." + to_string(a->left);
  }
  return "?";
}

// Prenex configurations

std::string Component::to_string() const {
  if (is_ether) return "[" + id + "!" + message.to_string() + "]";
  return actor_string(id, expr, mailbox);
}

bool ActorConfig::is_bound(const std::string& n) const {
  return std::any_of(binders.begin(), binders.end(), [&](const Binder& b) { return b.name == n; });
}

namespace {

std::string set_string(const std::set<std::string>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& x : s) {
    out += (first ? "" : ", ") + x;
    first = false;
  }
  return out + "}";
}

Component rename_comp(const Component& c, const std::map<std::string, std::string>& ids) {
  Component out = c;
  if (auto it = ids.find(c.id); it != ids.end()) out.id = it->second;
  if (c.is_ether) {
    out.message = rename_term(c.message, ids);
  } else {
    out.expr = rename(c.expr, ids);
    for (auto& v : out.mailbox) v = rename_term(v, ids);
  }
  return out;
}

std::set<std::string> comp_names(const Component& c) {
  std::set<std::string> out{c.id};
  if (c.is_ether) {
    collect_names(c.message, out);
  } else {
    collect_names(c.expr, out);
    for (const auto& v : c.mailbox) collect_names(v, out);
  }
  return out;
}

std::string bound_name(std::size_t i) { return "#" + std::to_string(i); }

// Components renamed by the map and sorted, with their joined serialisation.
std::pair<std::vector<Component>, std::string> arrange(const std::vector<Component>& comps,
                                                       const std::map<std::string, std::string>& ids) {
  std::vector<std::pair<std::string, Component>> keyed;
  for (const auto& c : comps) {
    Component r = rename_comp(c, ids);
    keyed.emplace_back(r.to_string(), std::move(r));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Component> out;
  std::string joined;
  for (auto& [k, c] : keyed) {
    joined += k + " || ";
    out.push_back(std::move(c));
  }
  return {std::move(out), std::move(joined)};
}

constexpr std::size_t kExactBinders = 6;

}  // namespace

ActorConfig canonicalize(ActorConfig c) {
  const std::size_t n = c.binders.size();
  std::vector<std::size_t> order(n);  // order[k] = binder placed at index k
  std::iota(order.begin(), order.end(), 0);
  auto mapping = [&](const std::vector<std::size_t>& ord) {
    std::map<std::string, std::string> m;
    for (std::size_t k = 0; k < n; ++k) m[c.binders[ord[k]].name] = bound_name(k);
    return m;
  };
  std::vector<std::size_t> best = order;
  if (n <= kExactBinders) {
    std::string best_key;
    bool have = false;
    do {
      auto [comps, key] = arrange(c.comps, mapping(order));
      if (!have || key < best_key) {
        best_key = std::move(key);
        best = order;
        have = true;
      }
    } while (std::next_permutation(order.begin(), order.end()));
  } else {
    // Order by first use in the components sorted with bound names blanked.
    std::map<std::string, std::string> blank;
    for (const auto& b : c.binders) blank[b.name] = "#";
    std::vector<std::pair<std::string, const Component*>> sorted;
    for (const auto& comp : c.comps) sorted.emplace_back(rename_comp(comp, blank).to_string(), &comp);
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    best.clear();
    std::vector<bool> used(n, false);
    for (const auto& [k, comp] : sorted)
      for (const auto& name : comp_names(*comp))
        for (std::size_t i = 0; i < n; ++i)
          if (!used[i] && c.binders[i].name == name) {
            used[i] = true;
            best.push_back(i);
          }
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i]) best.push_back(i);
  }
  auto [comps, joined] = arrange(c.comps, mapping(best));
  std::vector<Binder> binders;
  for (std::size_t k = 0; k < n; ++k) binders.push_back({bound_name(k), c.binders[best[k]].base});
  c.binders = std::move(binders);
  c.comps = std::move(comps);
  c.key_ = "K" + set_string(c.knowledge) + " O" + set_string(c.observers) + " nu" + std::to_string(n) + ". " + joined;
  return c;
}

std::string ActorConfig::to_string() const {
  std::string out = "<" + set_string(knowledge) + " | " + set_string(observers) + "> ";
  if (!binders.empty()) {
    out += "nu";
    for (const auto& b : binders) out += " " + b.name + "(" + b.base + ")";
    out += ". ";
  }
  if (comps.empty()) return out + "nil";
  for (std::size_t i = 0; i < comps.size(); ++i) out += (i ? " || " : "") + comps[i].to_string();
  return out;
}

namespace {

void flatten(const ActorSystem& a, std::map<std::string, std::string> ids, ActorConfig& out) {
  switch (a->kind) {
    case SystemNode::Kind::Nil:
      return;
    case SystemNode::Kind::Actor: {
      Component c;
      c.id = a->id;
      c.expr = a->expr;
      c.mailbox = a->mailbox;
      out.comps.push_back(rename_comp(c, ids));
      return;
    }
    case SystemNode::Kind::Ether: {
      Component c;
      c.is_ether = true;
      c.id = a->id;
      c.message = a->message;
      out.comps.push_back(rename_comp(c, ids));
      return;
    }
    case SystemNode::Kind::Par:
      flatten(a->left, ids, out);
      flatten(a->right, ids, out);
      return;
    case SystemNode::Kind::New: {
      // Temporary spelling that cannot clash with canonical names.
      std::string fresh = "#t" + std::to_string(out.binders.size());
      out.binders.push_back({fresh, a->id});
      ids[a->id] = fresh;
      flatten(a->left, ids, out);
      return;
    }
  }
}

std::set<std::string> free_names(const ActorConfig& c) {
  std::set<std::string> out;
  for (const auto& comp : c.comps)
    for (const auto& n : comp_names(comp))
      if (!c.is_bound(n)) out.insert(n);
  return out;
}

}  // namespace

ActorConfig make_config(std::set<std::string> knowledge, std::set<std::string> observers, const ActorSystem& sys) {
  ActorConfig c;
  flatten(sys, {}, c);
  c.knowledge = std::move(knowledge);
  c.observers = std::move(observers);
  for (const auto& n : free_names(c)) c.knowledge.insert(n);
  c.knowledge.insert(c.observers.begin(), c.observers.end());
  return canonicalize(std::move(c));
}

ActorSystem to_system(const ActorConfig& c) {
  ActorSystem body = nil_system();
  bool first = true;
  for (auto it = c.comps.rbegin(); it != c.comps.rend(); ++it) {
    ActorSystem s = it->is_ether ? ether(it->id, it->message) : actor_system(it->id, it->expr, it->mailbox);
    body = first ? s : par(s, body);
    first = false;
  }
  for (auto it = c.binders.rbegin(); it != c.binders.rend(); ++it) body = scoped(it->name, body);
  return body;
}

ActorSystem congruence_normalize(const ActorSystem& a) { return to_system(make_config({}, {}, a)); }

bool structurally_equivalent(const ActorSystem& a, const ActorSystem& b) {
  return make_config({}, {}, a).key() == make_config({}, {}, b).key();
}

std::optional<std::string> well_formed(const ActorConfig& c) {
  for (const auto& n : free_names(c))
    if (!c.knowledge.count(n)) return "free name " + n + " is not in K";
  for (const auto& o : c.observers)
    if (!c.knowledge.count(o)) return "observer " + o + " is not in K";
  std::set<std::string> owners;
  for (const auto& comp : c.comps) {
    if (comp.is_ether) continue;
    if (!owners.insert(comp.id).second) return "actor id " + comp.id + " is owned twice";
    if (c.observers.count(comp.id)) return "actor id " + comp.id + " is also an observer";
  }
  return std::nullopt;
}

// Stepping

namespace {

ActorConfig with_comps(const ActorConfig& c, std::vector<Component> comps) {
  ActorConfig out = c;
  out.comps = std::move(comps);
  return out;
}

std::string extruded_name(const std::string& base, const std::set<std::string>& taken) {
  std::string stem = base.empty() ? "n" : base;
  if (!taken.count(stem)) return stem;
  for (std::size_t k = 1;; ++k) {
    std::string cand = stem + "'" + std::to_string(k);
    if (!taken.count(cand)) return cand;
  }
}

std::string lowercase(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace

std::vector<std::pair<Action, ActorConfig>> actor_step(const ActorConfig& c, const ActorOptions& opts) {
  std::vector<std::pair<Action, ActorConfig>> out;
  auto emit = [&](Action a, ActorConfig next) { out.emplace_back(a, canonicalize(std::move(next))); };
  auto full = [&](const std::vector<Term>& q) { return opts.mailbox_bound && q.size() >= opts.mailbox_bound; };

  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < c.comps.size(); ++i)
    if (!c.comps[i].is_ether) owner[c.comps[i].id] = i;

  for (std::size_t i = 0; i < c.comps.size(); ++i) {
    const Component& comp = c.comps[i];
    if (comp.is_ether) {
      const Term& v = comp.message;
      auto names = names_of(v);
      auto rest = c.comps;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      if (auto it = owner.find(comp.id); it != owner.end()) {
        std::size_t dest = it->second > i ? it->second - 1 : it->second;
        if (full(rest[dest].mailbox)) continue;
        rest[dest].mailbox.push_back(v);
        bool scoped_names = c.is_bound(comp.id) ||
                            std::any_of(names.begin(), names.end(), [&](const auto& n) { return c.is_bound(n); });
        Action a = scoped_names ? Action::internal("nu.comm") : Action::internal(comp.id + "." + v.to_string());
        emit(a, with_comps(c, std::move(rest)));
      } else if (c.observers.count(comp.id)) {
        ActorConfig next = with_comps(c, std::move(rest));
        std::set<std::string> taken = c.knowledge;
        taken.insert(opts.reserved.begin(), opts.reserved.end());
        std::map<std::string, std::string> ext;
        std::vector<std::string> shown;
        std::vector<Binder> kept;
        for (const auto& b : c.binders) {
          if (names.count(b.name)) {
            std::string fresh = extruded_name(b.base, taken);
            taken.insert(fresh);
            ext[b.name] = fresh;
            shown.push_back(fresh);
            next.knowledge.insert(fresh);
          } else {
            kept.push_back(b);
          }
        }
        if (ext.empty()) {
          emit(Action::external(comp.id + "!" + v.to_string()), std::move(next));
        } else {
          next.binders = std::move(kept);
          for (auto& rc : next.comps) rc = rename_comp(rc, ext);
          std::string label = "(";
          for (std::size_t k = 0; k < shown.size(); ++k) label += (k ? "," : "") + shown[k];
          label += ")" + comp.id + "!" + rename_term(v, ext).to_string();
          emit(Action::external(label), std::move(next));
        }
      }
      continue;
    }

    // Inputs from the observer reach free actors only.
    if (!c.is_bound(comp.id) && !full(comp.mailbox)) {
      for (const auto& [target, v] : opts.inputs) {
        if (target != comp.id) continue;
        ActorConfig next = c;
        next.comps[i].mailbox.push_back(v);
        for (const auto& n : names_of(v))
          if (!c.knowledge.count(n)) {
            next.knowledge.insert(n);
            next.observers.insert(n);
          }
        emit(Action::external(comp.id + "?" + v.to_string()), std::move(next));
      }
    }

    const Expr& e = comp.expr;
    switch (e->kind) {
      case ExprKind::Send: {
        if (!e->target.is_value() || !e->payload.is_value() || e->target.kind != Term::Kind::Id)
          throw std::invalid_argument("ill-formed send in " + comp.to_string());
        ActorConfig next = c;
        next.comps[i].expr = e->first;
        Component msg;
        msg.is_ether = true;
        msg.id = e->target.name;
        msg.message = e->payload;
        next.comps.push_back(std::move(msg));
        emit(Action::silent(), std::move(next));
        break;
      }
      case ExprKind::Rec: {
        ActorConfig next = c;
        next.comps[i].expr = unfold(e);
        emit(Action::silent(), std::move(next));
        break;
      }
      case ExprKind::Self: {
        ActorConfig next = c;
        next.comps[i].expr = substitute(e->first, Subst{{e->name, Term::id(comp.id)}});
        emit(Action::silent(), std::move(next));
        break;
      }
      case ExprKind::Spawn: {
        ActorConfig next = c;
        std::string fresh = bound_name(c.binders.size());
        next.binders.push_back({fresh, lowercase(e->name)});
        next.comps[i].expr = substitute(e->second, Subst{{e->name, Term::id(fresh)}});
        Component child;
        child.id = fresh;
        child.expr = e->first;
        next.comps.push_back(std::move(child));
        emit(Action::silent(), std::move(next));
        break;
      }
      case ExprKind::Recv: {
        // First message matching any branch; patterns are disjoint.
        for (std::size_t k = 0; k < comp.mailbox.size(); ++k) {
          const Term& v = comp.mailbox[k];
          std::optional<std::pair<const Expr*, Subst>> hit;
          for (const auto& [p, body] : e->branches)
            if (auto s = match(p, v)) {
              hit.emplace(&body, std::move(*s));
              break;
            }
          if (!hit) continue;
          ActorConfig next = c;
          next.comps[i].expr = substitute(*hit->first, hit->second);
          next.comps[i].mailbox.erase(next.comps[i].mailbox.begin() + static_cast<std::ptrdiff_t>(k));
          emit(Action::silent(), std::move(next));
          break;
        }
        break;
      }
      case ExprKind::Done:
      case ExprKind::Var:
        break;
    }
  }
  return out;
}

ActorIlts::ActorIlts(const ActorConfig& c0, ActorOptions opts) : opts_(std::move(opts)) {
  det_ = Determinacy::actor_calculus();
  intern(canonicalize(c0));
}

std::unique_ptr<ActorIlts> actor_ilts(const ActorConfig& c0, ActorOptions opts) {
  if (auto bad = well_formed(c0)) throw std::invalid_argument("ill-formed actor configuration: " + *bad);
  return std::make_unique<ActorIlts>(c0, std::move(opts));
}

// Parsing

namespace {

bool is_upper(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

class ActorParser {
 public:
  explicit ActorParser(std::string_view text) : cur_(text) {}

  detail::Cursor& cursor() { return cur_; }

  Term term() {
    if (cur_.accept("{")) {
      std::vector<Term> elems;
      if (!cur_.accept("}")) {
        do elems.push_back(term());
        while (cur_.accept(","));
        cur_.expect("}");
      }
      return Term::tuple(std::move(elems));
    }
    std::string w = cur_.ident();
    return is_upper(w) ? Term::var(w) : Term::atom(w);
  }

  std::string keyword() {
    std::size_t at = cur_.pos();
    std::string w = cur_.ident();
    cur_.set_pos(at);
    return w;
  }

  void expect_keyword(const std::string& k) {
    std::string w = cur_.ident();
    if (w != k) cur_.fail("expected '" + k + "'");
  }

  Expr expr() {
    if (cur_.accept("(")) {
      Expr e = expr();
      cur_.expect(")");
      return e;
    }
    std::size_t at = cur_.pos();
    std::string w = cur_.ident();
    if (w == "done" || w == "nil") return done();
    if (w == "rcv") {
      cur_.expect("{");
      std::vector<std::pair<Term, Expr>> bs;
      if (!cur_.accept("}")) {
        do {
          Term p = term();
          cur_.expect("->");
          bs.emplace_back(std::move(p), expr());
        } while (cur_.accept(","));
        cur_.expect("}");
      }
      return recv(std::move(bs));
    }
    if (w == "spawn") {
      Expr body = expr();
      expect_keyword("as");
      std::string x = cur_.ident();
      expect_keyword("in");
      return spawn(std::move(body), std::move(x), expr());
    }
    if (w == "self") {
      std::string x = cur_.ident();
      expect_keyword("in");
      return self(std::move(x), expr());
    }
    if (w == "rec") {
      std::string x = cur_.ident();
      cur_.expect(".");
      return rec(std::move(x), expr());
    }
    if (cur_.peek() == '!') {
      cur_.set_pos(at);
      Term target = term();
      cur_.expect("!");
      Term payload = term();
      Expr cont = cur_.accept(".") ? expr() : done();
      return send(std::move(target), std::move(payload), std::move(cont));
    }
    if (is_upper(w)) return tvar(w);
    cur_.set_pos(at);
    cur_.fail("expected an expression");
  }

  std::vector<std::string> name_set() {
    cur_.expect("{");
    std::vector<std::string> out;
    if (cur_.accept("}")) return out;
    do out.push_back(cur_.ident());
    while (cur_.accept(","));
    cur_.expect("}");
    return out;
  }

 private:
  detail::Cursor cur_;
};

Term resolve(const Term& t, const std::set<std::string>& ids) {
  Term out = t;
  if (t.kind == Term::Kind::Atom && ids.count(t.name)) out.kind = Term::Kind::Id;
  for (auto& e : out.elems) e = resolve(e, ids);
  return out;
}

Expr resolve(const Expr& e, const std::set<std::string>& ids) {
  switch (e->kind) {
    case ExprKind::Done:
    case ExprKind::Var:
      return e;
    case ExprKind::Send:
      return send(resolve(e->target, ids), resolve(e->payload, ids), resolve(e->first, ids));
    case ExprKind::Recv: {
      std::vector<std::pair<Term, Expr>> bs;
      for (const auto& [p, body] : e->branches) bs.emplace_back(resolve(p, ids), resolve(body, ids));
      return recv(std::move(bs));
    }
    case ExprKind::Spawn:
      return spawn(resolve(e->first, ids), e->name, resolve(e->second, ids));
    case ExprKind::Self:
    case ExprKind::Rec: {
      ExprNode n = *e;
      n.first = resolve(e->first, ids);
      return make(std::move(n));
    }
  }
  return e;
}

// Rejects free variables of either kind and sends to non-ids.
void check_closed(const Expr& e, std::set<std::string> vars, std::set<std::string> tvars) {
  auto check_term = [&](const Term& t) {
    std::set<std::string> used;
    collect_vars(t, used);
    for (const auto& x : used)
      if (!vars.count(x)) throw ParseError("unbound variable " + x, 0);
  };
  switch (e->kind) {
    case ExprKind::Done:
      return;
    case ExprKind::Var:
      if (!tvars.count(e->name)) throw ParseError("unbound recursion variable " + e->name, 0);
      return;
    case ExprKind::Send:
      check_term(e->target);
      check_term(e->payload);
      if (e->target.kind == Term::Kind::Atom || e->target.kind == Term::Kind::Tuple)
        throw ParseError("send target " + e->target.to_string() + " is not an actor id", 0);
      check_closed(e->first, vars, tvars);
      return;
    case ExprKind::Recv:
      for (std::size_t i = 0; i < e->branches.size(); ++i) {
        const auto& [p, body] = e->branches[i];
        std::set<std::string> inner = vars;
        collect_vars(p, inner);
        check_closed(body, inner, tvars);
      }
      return;
    case ExprKind::Spawn:
      check_closed(e->first, vars, tvars);
      vars.insert(e->name);
      check_closed(e->second, vars, tvars);
      return;
    case ExprKind::Self:
      vars.insert(e->name);
      check_closed(e->first, vars, tvars);
      return;
    case ExprKind::Rec:
      tvars.insert(e->name);
      check_closed(e->first, vars, tvars);
      return;
  }
}

}  // namespace

Expr parse_expr(std::string_view text, const std::set<std::string>& ids) {
  ActorParser p(text);
  Expr e = p.expr();
  if (!p.cursor().at_end()) p.cursor().fail("unexpected trailing input");
  e = resolve(e, ids);
  check_closed(e, {}, {});
  return e;
}

Term parse_value(std::string_view text, const std::set<std::string>& ids) {
  ActorParser p(text);
  Term t = p.term();
  if (!p.cursor().at_end()) p.cursor().fail("unexpected trailing input");
  if (!t.is_value()) throw ParseError("a value cannot contain variables", 0);
  return resolve(t, ids);
}

ActorSpec parse_actor_file(std::string_view text) {
  ActorParser p(text);
  auto& cur = p.cursor();
  std::set<std::string> knowledge, observers, names, scope;
  std::vector<std::pair<std::string, Expr>> actors;
  std::map<std::string, std::vector<Term>> mailboxes;
  std::vector<std::pair<std::string, Term>> ethers, inputs;
  std::size_t bound = 0;
  while (!cur.at_end()) {
    std::string kw = cur.ident();
    if (kw == "knowledge" || kw == "observers" || kw == "names" || kw == "scope") {
      auto& target = kw == "knowledge" ? knowledge : kw == "observers" ? observers : kw == "names" ? names : scope;
      for (auto& n : p.name_set()) target.insert(std::move(n));
    } else if (kw == "actor") {
      std::string id = cur.ident();
      cur.expect("=");
      actors.emplace_back(std::move(id), p.expr());
    } else if (kw == "mailbox") {
      std::string id = cur.ident();
      cur.expect("[");
      std::vector<Term> q;
      if (!cur.accept("]")) {
        do q.push_back(p.term());
        while (cur.accept(","));
        cur.expect("]");
      }
      mailboxes[id] = std::move(q);
    } else if (kw == "ether") {
      std::string id = cur.ident();
      cur.expect("!");
      ethers.emplace_back(std::move(id), p.term());
    } else if (kw == "input") {
      std::string id = cur.ident();
      cur.expect("?");
      inputs.emplace_back(std::move(id), p.term());
    } else if (kw == "mailbox_bound") {
      std::string n = cur.word();
      try {
        bound = std::stoul(n);
      } catch (const std::exception&) {
        cur.fail("expected a number");
      }
    } else {
      cur.fail("unknown declaration '" + kw + "'");
    }
  }

  std::set<std::string> ids = knowledge;
  for (const auto* s : {&observers, &names, &scope}) ids.insert(s->begin(), s->end());
  for (const auto& [id, e] : actors) ids.insert(id);
  for (const auto& [id, v] : ethers) ids.insert(id);
  for (const auto& [id, v] : inputs) ids.insert(id);
  for (const auto& [id, q] : mailboxes) ids.insert(id);

  ActorSystem sys = nil_system();
  bool first = true;
  auto add = [&](ActorSystem s) {
    sys = first ? s : par(sys, s);
    first = false;
  };
  std::set<std::string> seen;
  for (const auto& [id, e] : actors) {
    if (!seen.insert(id).second) throw ParseError("actor " + id + " declared twice", 0);
    Expr r = resolve(e, ids);
    check_closed(r, {}, {});
    std::vector<Term> q;
    if (auto it = mailboxes.find(id); it != mailboxes.end())
      for (const auto& v : it->second) q.push_back(resolve(v, ids));
    add(actor_system(id, r, std::move(q)));
  }
  for (const auto& [id, q] : mailboxes)
    if (!seen.count(id)) throw ParseError("mailbox for undeclared actor " + id, 0);
  for (const auto& [id, v] : ethers) {
    if (!v.is_value()) throw ParseError("a message cannot contain variables", 0);
    add(ether(id, resolve(v, ids)));
  }
  for (auto it = scope.rbegin(); it != scope.rend(); ++it) sys = scoped(*it, sys);

  ActorSpec spec;
  for (const auto& n : scope) knowledge.erase(n);
  spec.initial = make_config(knowledge, observers, sys);
  for (const auto& [id, v] : inputs) {
    if (!v.is_value()) throw ParseError("an input cannot contain variables", 0);
    if (scope.count(id)) throw ParseError("input to scoped actor " + id, 0);
    Term r = resolve(v, ids);
    for (const auto& n : names_of(r)) spec.options.reserved.insert(n);
    spec.options.inputs.emplace_back(id, std::move(r));
  }
  spec.options.mailbox_bound = bound;
  if (auto bad = well_formed(spec.initial)) throw ParseError("ill-formed system: " + *bad, 0);
  return spec;
}

}  // namespace mrv::actor
