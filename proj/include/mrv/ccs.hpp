#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrv/action.hpp"
#include "mrv/ilts.hpp"

namespace mrv {

enum class CcsKind { Nil, Prefix, Sum, Rec, Var };

// Sequential CCS term: nil | mu.P | P + Q | rec X.P | X.
// operator== is alpha-equivalence.
class CcsProcess {
 public:
  CcsProcess();  // nil

  static CcsProcess nil();
  static CcsProcess prefix(Action a, CcsProcess cont);
  static CcsProcess sum(CcsProcess l, CcsProcess r);
  static CcsProcess rec(std::string x, CcsProcess body);
  static CcsProcess var(std::string x);

  CcsKind kind() const;
  const Action& action() const;
  const std::string& name() const;
  const CcsProcess& body() const;  // Prefix, Rec
  const CcsProcess& lhs() const;   // Sum
  const CcsProcess& rhs() const;

  const std::vector<std::string>& free_vars() const;
  bool closed() const { return free_vars().empty(); }
  const std::string& canonical() const;
  std::string to_string() const;

  friend bool operator==(const CcsProcess& a, const CcsProcess& b);

  struct Node;

 private:
  explicit CcsProcess(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

CcsProcess substitute(const CcsProcess& p, const std::string& x, const CcsProcess& q);
bool is_guarded(const CcsProcess& p);

// Grammar: nil | a.P | ~i.P | tau.P | P + Q | rec X.P | X | (P).
// Prefix binds tighter than '+', rec extends as far right as possible.
CcsProcess parse_ccs(std::string_view text);

// One-step successors; rec unfolds through a silent step.
std::vector<std::pair<Action, CcsProcess>> ccs_step(const CcsProcess& p);

struct CcsOptions {
  Determinacy det;
  // 0 compares states up to alpha-equivalence; L > 0 compares them by their
  // traces of length at most L.
  std::size_t trace_equiv_bound = 0;
  std::size_t state_bound = 10000;
  bool validate = true;
};

class CcsIlts : public InternedIlts<CcsProcess> {
 public:
  CcsIlts(const CcsProcess& p0, CcsOptions opts);
  bool equiv(StateId a, StateId b) const override;
  StateId state_of(const CcsProcess& p) const { return intern(p); }

 protected:
  std::string key(const CcsProcess& p) const override { return p.canonical(); }
  std::string render(const CcsProcess& p) const override { return p.to_string(); }
  std::vector<std::pair<Action, CcsProcess>> successors(const CcsProcess& p) const override { return ccs_step(p); }

 private:
  std::size_t trace_bound_;
};

// Throws DeterminacyViolation when opts.validate is set and the declared
// determinacy does not hold on the reachable space.
std::unique_ptr<CcsIlts> ccs_ilts(const CcsProcess& p0, CcsOptions opts = {});

// System file: lines `system <name> = <term>`, `det = {a, s}` and optionally
// `equiv = trace <L>`. Terms may span lines until the next declaration.
struct CcsSystemFile {
  std::vector<std::pair<std::string, CcsProcess>> systems;
  Determinacy det;
  std::size_t trace_equiv_bound = 0;

  const CcsProcess& find(const std::string& name) const;
};
CcsSystemFile parse_ccs_file(std::string_view text);

}  // namespace mrv
