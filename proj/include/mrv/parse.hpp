#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mrv/formula.hpp"
#include "mrv/monitor.hpp"

namespace mrv {

// Declared actions. An empty alphabet accepts every label.
struct Alphabet {
  std::set<Action> actions;

  bool allows(const Action& a) const { return actions.empty() || actions.count(a) > 0; }
  static Alphabet of(std::initializer_list<const char*> labels);
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error("column " + std::to_string(pos + 1) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Grammar: tt | ff | X | [a]f | <a>f | f & f | f | f | max X.f | min X.f | (f).
// '&' binds tighter than '|', both left associative; a fixpoint body extends
// as far right as possible. Result is closed and guarded.
Formula parse_formula(std::string_view text, const Alphabet& alphabet = {});

// Grammar: no | end | X | a.m | m (*) m | m (+) m | rec X.m | (m).
// Labels with characters outside [A-Za-z0-9_'?!{},] are written in double
// quotes, e.g. "(j)i!j".no
Monitor parse_monitor(std::string_view text, const Alphabet& alphabet = {});

}  // namespace mrv
