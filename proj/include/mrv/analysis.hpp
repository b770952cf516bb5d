#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mrv/formula.hpp"
#include "mrv/history.hpp"
#include "mrv/ilts.hpp"
#include "mrv/monitor.hpp"

namespace mrv {

// { t | eta t in H }
History sub(const History& h, const Action& eta);
// Traces of the form (internal actions) a t'.
History start(const History& h, const Action& a);
// Distinct first actions of the traces in h, in text order.
std::vector<Action> heads(const History& h);

enum class Judgement { Reject, Violate, SepViolate };

struct Derivation {
  Judgement judgement = Judgement::Reject;
  std::string rule;
  History history;
  bool flag = true;
  std::variant<Monitor, Formula> term;
  std::vector<std::shared_ptr<const Derivation>> premises;

  // "rej({r s a}, true, a.no)", "viol(...)" or "sviol(...)"
  std::string conclusion() const;
  std::size_t node_count() const;
};

// One node per line, two spaces of indentation per depth: "RULE conclusion".
std::string format_derivation(const Derivation& d);
// Rule names in pre-order.
std::vector<std::string> rule_sequence(const Derivation& d);

// Checks that every node instantiates its rule with the side conditions met.
bool validate_derivation(const Derivation& d, const Determinacy& det, std::string* why = nullptr);

struct SearchEvent {
  std::size_t depth;
  std::string rule;        // rule tried, or "none" when nothing applies
  std::string conclusion;  // obligation it was tried on
  bool success;
};

struct SearchStats {
  std::size_t obligations = 0;
  std::size_t memo_hits = 0;
  std::size_t cycles = 0;
};

struct SearchOptions {
  bool log = false;  // record every attempted obligation
};

struct Verdict {
  bool rejected = false;
  std::shared_ptr<const Derivation> derivation;
  SearchStats stats;
  std::vector<SearchEvent> log;

  explicit operator bool() const { return rejected; }
};

std::string format_search_log(const std::vector<SearchEvent>& log);

// rej(H, flag, m)
Verdict reject(const History& h, const Monitor& m, const Determinacy& det, SearchOptions opts = {});
Verdict reject(const History& h, bool flag, const Monitor& m, const Determinacy& det, SearchOptions opts = {});

// (H, true) violates phi. Throws std::invalid_argument on min or diamond.
Verdict violation(const History& h, const Formula& phi, const Determinacy& det, SearchOptions opts = {});
bool violates(const History& h, const Formula& phi, const Determinacy& det);

// Disjunctions split the history into two disjoint parts. Throws
// std::invalid_argument when phi is not in normal form.
Verdict separation_violation(const History& h, const Formula& phi, const Determinacy& det, SearchOptions opts = {});
bool sep_violates(const History& h, const Formula& phi, const Determinacy& det);

}  // namespace mrv
