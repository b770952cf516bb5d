#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "mrv/formula.hpp"
#include "mrv/ilts.hpp"
#include "mrv/monitor.hpp"

namespace mrv {

// Natural number or infinity.
class BoundValue {
 public:
  constexpr BoundValue() = default;  // 0
  constexpr explicit BoundValue(std::uint64_t n) : n_(n) {}
  static constexpr BoundValue infinity() {
    BoundValue b;
    b.n_ = kInf;
    return b;
  }

  bool infinite() const { return n_ == kInf; }
  std::uint64_t value() const { return n_; }
  std::string to_string() const { return infinite() ? "inf" : std::to_string(n_); }

  friend BoundValue operator+(BoundValue a, BoundValue b) {
    if (a.infinite() || b.infinite()) return infinity();
    return BoundValue(a.n_ + b.n_);
  }
  friend bool operator==(BoundValue, BoundValue) = default;
  friend auto operator<=>(BoundValue a, BoundValue b) { return a.n_ <=> b.n_; }

 private:
  static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t n_ = 0;
};

struct Membership {
  bool member = false;
  std::string reason;  // empty when member
  explicit operator bool() const { return member; }
};

// tt | ff | [a]phi | phi & phi | max X.phi | X
bool is_shml(const Formula& phi);

// Disjunctions are allowed only where every modality on the path from the
// root (through unfoldings) is deterministic. Decided coinductively.
Membership in_shml_det(const Formula& phi, const Determinacy& det);

// Every disjunction flattens to disjuncts that are boxes or conjunctions of
// boxes, with no action guarding two different disjuncts.
bool in_shml_nf(const Formula& phi);

// Throws std::invalid_argument on min or diamond.
BoundValue lb(const Formula& phi);

// Parallel disjunctions only below deterministic prefixes.
Membership in_mon_det(const Monitor& m, const Determinacy& det);

}  // namespace mrv
