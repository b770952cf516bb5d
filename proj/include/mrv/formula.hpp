#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mrv/action.hpp"

namespace mrv {

enum class FormulaKind { Tt, Ff, Var, Box, Diamond, And, Or, Max, Min };

// Immutable recursive formula with shared subterms. operator== is
// alpha-equivalence.
class Formula {
 public:
  Formula();  // tt

  static Formula tt();
  static Formula ff();
  static Formula var(std::string name);
  static Formula box(Action a, Formula body);
  static Formula diamond(Action a, Formula body);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula max(std::string x, Formula body);
  static Formula min(std::string x, Formula body);

  FormulaKind kind() const;
  const std::string& name() const;  // Var, Max, Min
  const Action& action() const;     // Box, Diamond
  const Formula& body() const;      // Box, Diamond, Max, Min
  const Formula& lhs() const;       // And, Or
  const Formula& rhs() const;

  bool is_fixpoint() const { return kind() == FormulaKind::Max || kind() == FormulaKind::Min; }
  bool is_modal() const { return kind() == FormulaKind::Box || kind() == FormulaKind::Diamond; }
  bool is_binary() const { return kind() == FormulaKind::And || kind() == FormulaKind::Or; }

  // Sorted free variables.
  const std::vector<std::string>& free_vars() const;
  bool closed() const { return free_vars().empty(); }
  // Binder names are replaced by de Bruijn indices.
  const std::string& canonical() const;
  std::size_t hash() const;
  std::size_t size() const;
  std::size_t depth() const;

  std::string to_string() const;
  bool same_node(const Formula& o) const { return n_ == o.n_; }

  friend bool operator==(const Formula& a, const Formula& b);

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Capture-avoiding replacement of free x by psi.
Formula substitute(const Formula& phi, const std::string& x, const Formula& psi);
// max X.phi -> phi[max X.phi / X]. Throws std::invalid_argument otherwise.
Formula unfold(const Formula& fixpoint);

// Variables bound by an enclosing fixpoint that occur without a modality
// between them and their binder.
bool is_guarded(const Formula& phi);

}  // namespace mrv

template <>
struct std::hash<mrv::Formula> {
  std::size_t operator()(const mrv::Formula& f) const noexcept { return f.hash(); }
};
