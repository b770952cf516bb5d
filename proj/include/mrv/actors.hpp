#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrv/ilts.hpp"

namespace mrv::actor {

// Identifiers, values and patterns share one shape. A value has no Var.
struct Term {
  enum class Kind { Var, Atom, Id, Tuple };
  Kind kind = Kind::Atom;
  std::string name;
  std::vector<Term> elems;

  static Term var(std::string x) { return {Kind::Var, std::move(x), {}}; }
  static Term atom(std::string a) { return {Kind::Atom, std::move(a), {}}; }
  static Term id(std::string i) { return {Kind::Id, std::move(i), {}}; }
  static Term tuple(std::vector<Term> ts) { return {Kind::Tuple, {}, std::move(ts)}; }

  bool is_value() const;
  std::string to_string() const;
  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term& a, const Term& b) { return a.to_string() <=> b.to_string(); }
};

// Names of ids occurring in a term.
std::set<std::string> names_of(const Term& t);

using Subst = std::map<std::string, Term>;

// Binding of pattern variables, or nullopt when the value does not match.
std::optional<Subst> match(const Term& pattern, const Term& value);
// True when no message in the mailbox matches the pattern.
bool absent(const Term& pattern, const std::vector<Term>& mailbox);

enum class ExprKind { Done, Send, Recv, Spawn, Self, Rec, Var };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind = ExprKind::Done;
  std::string name;  // Spawn and Self binder, Rec and Var term variable
  Term target;       // Send
  Term payload;      // Send
  std::vector<std::pair<Term, Expr>> branches;  // Recv
  Expr first;   // Send continuation, Spawn body, Self and Rec body
  Expr second;  // Spawn continuation
};

Expr done();
Expr send(Term target, Term payload, Expr cont = done());
Expr recv(std::vector<std::pair<Term, Expr>> branches);
Expr spawn(Expr body, std::string x, Expr cont);
Expr self(std::string x, Expr cont);
Expr rec(std::string x, Expr body);
Expr tvar(std::string x);

std::string to_string(const Expr& e);
Expr substitute(const Expr& e, const Subst& s);
Expr unfold(const Expr& rec);
Expr rename(const Expr& e, const std::map<std::string, std::string>& ids);
std::set<std::string> names_of(const Expr& e);

// Tree form of a system: nil, actor, message in the ether, parallel, scope.
struct SystemNode;
using ActorSystem = std::shared_ptr<const SystemNode>;

struct SystemNode {
  enum class Kind { Nil, Actor, Ether, Par, New };
  Kind kind = Kind::Nil;
  std::string id;  // Actor owner, Ether target, New binder
  Expr expr;
  std::vector<Term> mailbox;
  Term message;
  ActorSystem left, right;  // Par; New uses left
};

ActorSystem nil_system();
ActorSystem actor_system(std::string id, Expr e, std::vector<Term> mailbox = {});
ActorSystem ether(std::string target, Term v);
ActorSystem par(ActorSystem a, ActorSystem b);
ActorSystem scoped(std::string id, ActorSystem a);
std::string to_string(const ActorSystem& a);

// Flat part of a prenex state: an actor or a message in transit.
struct Component {
  bool is_ether = false;
  std::string id;
  Expr expr;
  std::vector<Term> mailbox;
  Term message;
  std::string to_string() const;
};

// Bound names are spelt "#n". The base is the name used if it is extruded.
struct Binder {
  std::string name;
  std::string base;
};

// <K | O> nu binders.(components), kept in canonical order.
struct ActorConfig {
  std::set<std::string> knowledge;
  std::set<std::string> observers;
  std::vector<Binder> binders;
  std::vector<Component> comps;

  bool is_bound(const std::string& n) const;
  // Canonical serialisation; equal keys means structurally equivalent.
  const std::string& key() const { return key_; }
  std::string to_string() const;

  friend ActorConfig canonicalize(ActorConfig c);

 private:
  std::string key_;
};

ActorConfig canonicalize(ActorConfig c);
ActorConfig make_config(std::set<std::string> knowledge, std::set<std::string> observers, const ActorSystem& sys);
ActorSystem to_system(const ActorConfig& c);

// Drops nil, flattens parallel composition, hoists scopes and renames bound
// names canonically.
ActorSystem congruence_normalize(const ActorSystem& a);
bool structurally_equivalent(const ActorSystem& a, const ActorSystem& b);

// Checks fn(A) within K, O within K, and single receivers. Returns the
// first problem found.
std::optional<std::string> well_formed(const ActorConfig& c);

struct ActorOptions {
  // Inputs the observer may send: (actor id, value).
  std::vector<std::pair<std::string, Term>> inputs;
  // 0 means unbounded; inputs and deliveries beyond it are disabled.
  std::size_t mailbox_bound = 0;
  // Names never chosen when extruding a bound name.
  std::set<std::string> reserved;
};

std::vector<std::pair<Action, ActorConfig>> actor_step(const ActorConfig& c, const ActorOptions& opts);

class ActorIlts : public InternedIlts<ActorConfig> {
 public:
  ActorIlts(const ActorConfig& c0, ActorOptions opts);
  const ActorOptions& options() const { return opts_; }

 protected:
  std::string key(const ActorConfig& c) const override { return c.key(); }
  std::string render(const ActorConfig& c) const override { return c.to_string(); }
  std::vector<std::pair<Action, ActorConfig>> successors(const ActorConfig& c) const override {
    return actor_step(c, opts_);
  }

 private:
  ActorOptions opts_;
};

std::unique_ptr<ActorIlts> actor_ilts(const ActorConfig& c0, ActorOptions opts = {});

struct ActorSpec {
  ActorConfig initial;
  ActorOptions options;
};

// Declarations, one per statement:
//   knowledge {i, j}   observers {j}   names {c}   scope {k1, k2}
//   actor i = <expr>   mailbox i [v, ...]   ether j ! v   input i ? v
//   mailbox_bound N
// Uppercase identifiers are variables; lowercase ones are ids when declared
// as such and atoms otherwise.
ActorSpec parse_actor_file(std::string_view text);
Expr parse_expr(std::string_view text, const std::set<std::string>& ids);
Term parse_value(std::string_view text, const std::set<std::string>& ids);

}  // namespace mrv::actor
