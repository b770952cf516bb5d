#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "mrv/formula.hpp"
#include "mrv/ilts.hpp"
#include "mrv/monitor.hpp"

namespace mrv {

class FragmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Structural translation ff->no, tt->end, [a]->prefix, &->(*), |->(+),
// max->rec. Throws FragmentError on min or diamond.
Monitor translate(const Formula& phi);
// translate() after checking fragment membership under det.
Monitor synth(const Formula& phi, const Determinacy& det);
// Inverse translation, total on monitors.
Formula rev_synth(const Monitor& m);

// Variable -> (rec monitor it was bound to, flag at the binding point).
using NormEnv = std::map<std::string, std::pair<Monitor, bool>>;

// Rewrites m so that parallel disjunctions reachable only after a
// non-deterministic action become end.
Monitor normalize(const Monitor& m, const Determinacy& det);
Monitor normalize(const Monitor& m, const Determinacy& det, bool flag, const NormEnv& env);

}  // namespace mrv
