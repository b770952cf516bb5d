#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mrv/analysis.hpp"
#include "mrv/history.hpp"
#include "mrv/ilts.hpp"
#include "mrv/monitor.hpp"

namespace mrv {

struct ExecutingMonitor {
  Trace accrued;
  Monitor mon;
  friend bool operator==(const ExecutingMonitor&, const ExecutingMonitor&) = default;
};

// Whether the monitor has any silent step. This does not depend on the
// history: a verdict inside a parallel composition always has one.
bool can_silent_step(const Monitor& m);
// Silent successors; in_history tells whether the accrued trace is in H.
std::vector<Monitor> silent_successors(const Monitor& m, bool in_history);
// Successors on external action a.
std::vector<Monitor> action_successors(const Monitor& m, const Action& a);

// input == nullopt asks for silent steps.
std::vector<ExecutingMonitor> monitor_step(const ExecutingMonitor& em, const History& h,
                                           const std::optional<Action>& input);

struct MonitoredSystem {
  StateId sus;
  ExecutingMonitor exec;
  History history;
};

enum class InstrRule { No, Ter, AsS, AsI, AsM, Mon };
const char* rule_name(InstrRule r);

struct InstrStep {
  InstrRule rule;
  Action label;  // silent for every rule except Ter and Mon
  MonitoredSystem next;
  bool aggregates = false;  // iNo added a new trace
};

std::vector<InstrStep> instr_steps(const Ilts& ilts, const MonitoredSystem& ms);

enum class Bias { Uniform, Explore };

// Seeded choice among enabled steps. Range reduction is done here rather
// than with a standard distribution so seeded runs agree across toolchains.
class Scheduler {
 public:
  explicit Scheduler(std::uint64_t seed, Bias bias = Bias::Uniform) : rng_(seed), bias_(bias) {}
  std::size_t choose(const std::vector<InstrStep>& steps, const MonitoredSystem& from);
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

 private:
  std::mt19937_64 rng_;
  Bias bias_;
};

// Throws std::logic_error when nothing is enabled.
MonitoredSystem instr_step(const Ilts& ilts, const MonitoredSystem& ms, Scheduler& scheduler);

struct RunOptions {
  std::uint64_t seed = 1;
  std::size_t max_runs = 10;
  std::size_t max_steps = 1000;
  Bias bias = Bias::Uniform;
  // Keep running after a trace is aggregated instead of stopping there.
  bool continue_after_aggregate = false;
  // Record a line per instrumentation step:
  // "<rule> <label> | <accrued> | <monitor before> -> <monitor after>".
  bool transcript = false;
};

struct RunRecord {
  std::size_t index = 0;  // 1-based
  Trace trace;
  bool aggregated = false;
  bool truncated = false;  // hit max_steps
  std::size_t steps = 0;
  std::vector<std::string> transcript;
};

struct RunReport {
  std::uint64_t seed = 0;
  std::vector<RunRecord> runs;
  std::vector<History> chain;  // history before the first run, then after each run
  History final_history;
  std::optional<Verdict> verdict;  // set when the history was rejected

  std::size_t productive_runs() const;
  // "run <i> trace <actions> aggregated <yes|no>" lines then "history { ... }".
  std::string to_text() const;
};

// One monitored execution from <p0, (eps, m), H>.
RunRecord run_once(const Ilts& ilts, StateId p0, const Monitor& m, History& h, Scheduler& scheduler,
                   const RunOptions& opts, std::size_t index = 1);

// Alternates runs and analysis until rejection or max_runs.
RunReport run_multi(const Ilts& ilts, StateId p0, const Monitor& m, const Determinacy& det, const RunOptions& opts,
                    const History& initial = {});

// Every new trace some scheduling can aggregate in a single run from h,
// exploring runs whose accrued trace stays within max_len.
std::set<Trace> aggregatable(const Ilts& ilts, StateId p0, const Monitor& m, const History& h, std::size_t max_len);

struct RunSearchResult {
  std::optional<std::size_t> runs;  // fewest aggregating runs leading to rejection
  std::vector<History> chain;       // witness history chain
  std::size_t histories_explored = 0;
};

// Breadth-first search over all schedulings of up to max_runs runs.
RunSearchResult min_runs_to_reject(const Ilts& ilts, StateId p0, const Monitor& m, const Determinacy& det,
                                   std::size_t max_runs, std::size_t max_len);

}  // namespace mrv
