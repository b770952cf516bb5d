#pragma once

#include <map>
#include <set>
#include <string>

#include "mrv/formula.hpp"
#include "mrv/history.hpp"
#include "mrv/ilts.hpp"

namespace mrv {

using StateSet = std::set<StateId>;
using Env = std::map<std::string, StateSet>;

// States reachable through silent and internal steps (p => q).
StateSet weak_closure(const Ilts& ilts, StateId p);
// States reachable through silent steps only.
StateSet silent_closure(const Ilts& ilts, StateId p);

// p => -a-> => q, closing over silent and internal steps.
StateSet weak_step(const Ilts& ilts, StateId p, const Action& a);
// p ==eta==> q, closing over silent steps only.
StateSet weak_traceable_step(const Ilts& ilts, StateId p, const Action& eta);

// All traces of length at most max_len produced by p, including eps.
History traces(const Ilts& ilts, StateId p, std::size_t max_len);
// Whether p produces t.
bool produces(const Ilts& ilts, StateId p, const Trace& t);

// Denotation of phi over the states reachable from root. Fixpoints are
// computed by plain iteration: max from the full set downwards, min from the
// empty set upwards.
StateSet eval(const Ilts& ilts, StateId root, const Formula& phi, const Env& env = {});
bool satisfies(const Ilts& ilts, StateId p, const Formula& phi);

}  // namespace mrv
