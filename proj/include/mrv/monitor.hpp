#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mrv/action.hpp"

namespace mrv {

// ParOr is the parallel disjunction (+), ParAnd the parallel conjunction (*).
enum class MonitorKind { No, End, Var, Act, Rec, ParOr, ParAnd };

class Monitor {
 public:
  Monitor();  // end

  static Monitor no();
  static Monitor end();
  static Monitor var(std::string name);
  static Monitor act(Action a, Monitor cont);
  static Monitor rec(std::string x, Monitor body);
  static Monitor par_or(Monitor l, Monitor r);
  static Monitor par_and(Monitor l, Monitor r);

  MonitorKind kind() const;
  const std::string& name() const;  // Var, Rec
  const Action& action() const;     // Act
  const Monitor& body() const;      // Act, Rec
  const Monitor& lhs() const;       // ParOr, ParAnd
  const Monitor& rhs() const;

  bool is_par() const { return kind() == MonitorKind::ParOr || kind() == MonitorKind::ParAnd; }
  bool is_no() const { return kind() == MonitorKind::No; }
  bool is_end() const { return kind() == MonitorKind::End; }

  const std::vector<std::string>& free_vars() const;
  bool closed() const { return free_vars().empty(); }
  const std::string& canonical() const;
  std::size_t hash() const;
  std::size_t size() const;
  std::size_t depth() const;

  std::string to_string() const;
  bool same_node(const Monitor& o) const { return n_ == o.n_; }

  friend bool operator==(const Monitor& a, const Monitor& b);

  struct Node;

 private:
  explicit Monitor(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

Monitor substitute(const Monitor& m, const std::string& x, const Monitor& n);
// rec X.m -> m[rec X.m / X]. Throws std::invalid_argument otherwise.
Monitor unfold(const Monitor& rec);
bool is_guarded(const Monitor& m);

}  // namespace mrv

template <>
struct std::hash<mrv::Monitor> {
  std::size_t operator()(const mrv::Monitor& m) const noexcept { return m.hash(); }
};
