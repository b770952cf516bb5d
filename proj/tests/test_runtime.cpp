#include <doctest.h>

#include <algorithm>

#include "mrv/ccs.hpp"
#include "mrv/parse.hpp"
#include "mrv/runtime.hpp"
#include "mrv/semantics.hpp"
#include "mrv/synthesis.hpp"
#include "support.hpp"

using namespace mrv;

namespace {
const char* kP2 = "rec X.(r.s.X + (~ut.a.X + ~uf.c.nil))";
const char* kM1 = "rec X.(r.s.X (*) (a.no (+) c.no))";
const char* kM2 = "rec X.(r.s.X (*) a.X (*) (a.no (+) c.no))";
const Determinacy kRS = Determinacy::parse("r,s");
Action ext(const char* l) { return Action::external(l); }
bool has(const std::vector<Monitor>& ms, const Monitor& m) { return std::find(ms.begin(), ms.end(), m) != ms.end(); }
}  // namespace

TEST_CASE("verdicts inside conjunctions are discarded once recorded") {
  Monitor m2 = parse_monitor(kM2);
  Monitor both = Monitor::par_and(m2, Monitor::no());
  CHECK(has(silent_successors(both, true), m2));
  CHECK_FALSE(has(silent_successors(both, false), m2));
  CHECK(has(silent_successors(both, false), Monitor::no()));
  CHECK(can_silent_step(both));
}

TEST_CASE("unrecorded rejection inside a disjunction wins") {
  Monitor m = Monitor::par_or(Monitor::no(), parse_monitor("a.end"));
  CHECK(has(silent_successors(m, false), Monitor::no()));
}

TEST_CASE("end absorbs every action") {
  ExecutingMonitor em{parse_trace("r"), Monitor::end()};
  auto next = monitor_step(em, History{}, ext("a"));
  REQUIRE(next.size() == 1);
  CHECK(next[0].accrued == parse_trace("r a"));
  CHECK(next[0].mon.is_end());
  CHECK(action_successors(parse_monitor("a.no"), ext("b")).empty());
  CHECK(action_successors(parse_monitor("a.no"), ext("a")) == std::vector<Monitor>{Monitor::no()});
}

TEST_CASE("a rejecting monitor aggregates the empty trace at once") {
  auto p = ccs_ilts(parse_ccs("a.nil"));
  MonitoredSystem ms{p->initial(), {{}, Monitor::no()}, {}};
  auto steps = instr_steps(*p, ms);
  auto it = std::find_if(steps.begin(), steps.end(), [](const InstrStep& s) { return s.rule == InstrRule::No; });
  REQUIRE(it != steps.end());
  CHECK(it->aggregates);
  CHECK(it->next.exec.mon.is_end());
  CHECK(it->next.history == History{Trace{}});
}

TEST_CASE("end keeps tracing the system") {
  auto p = ccs_ilts(parse_ccs("a.nil"));
  MonitoredSystem ms{p->initial(), {{}, Monitor::end()}, {}};
  auto steps = instr_steps(*p, ms);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].rule == InstrRule::Mon);
  CHECK(steps[0].next.exec.accrued == parse_trace("a"));
}

TEST_CASE("a monitor that cannot follow an action terminates") {
  auto p = ccs_ilts(parse_ccs("a.nil"));
  MonitoredSystem ms{p->initial(), {{}, parse_monitor("b.no")}, {}};
  auto steps = instr_steps(*p, ms);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].rule == InstrRule::Ter);
  CHECK(steps[0].label == ext("a"));
  CHECK(steps[0].next.exec.mon.is_end());
}

TEST_CASE("a deadlocked system aggregates nothing") {
  auto nil = ccs_ilts(parse_ccs("nil"));
  History h;
  Scheduler s(1);
  RunRecord r = run_once(*nil, nil->initial(), parse_monitor(kM1), h, s, RunOptions{});
  CHECK_FALSE(r.aggregated);
  CHECK(r.trace.empty());
  CHECK(h.empty());
}

TEST_CASE("two seeded runs of the query server reach a verdict") {
  auto p2 = ccs_ilts(parse_ccs(kP2));
  RunOptions opts;
  opts.seed = 369;
  RunReport rep = run_multi(*p2, p2->initial(), parse_monitor(kM1), kRS, opts);
  REQUIRE(rep.verdict.has_value());
  CHECK(rep.productive_runs() == 2);
  CHECK(rep.runs.size() == 2);
  CHECK(trace_to_string(rep.runs[0].trace) == "r s ~ut a");
  CHECK(trace_to_string(rep.runs[1].trace) == "r s ~uf c");
  CHECK(rep.final_history == History{parse_trace("r s ~ut a"), parse_trace("r s ~uf c")});
  CHECK(rep.chain.size() == 3);
  CHECK(rep.to_text().find("run 2 trace r s ~uf c aggregated yes") != std::string::npos);
}

TEST_CASE("the same seed gives the same report") {
  auto p2 = ccs_ilts(parse_ccs(kP2));
  RunOptions opts;
  opts.seed = 42;
  opts.max_runs = 6;
  auto a = run_multi(*p2, p2->initial(), parse_monitor(kM1), kRS, opts);
  auto b = run_multi(*p2, p2->initial(), parse_monitor(kM1), kRS, opts);
  CHECK(a.to_text() == b.to_text());
}

TEST_CASE("the inconclusive monitor never aggregates") {
  auto p2 = ccs_ilts(parse_ccs(kP2));
  RunReport rep = run_multi(*p2, p2->initial(), Monitor::end(), kRS, RunOptions{});
  CHECK_FALSE(rep.verdict.has_value());
  CHECK(rep.final_history.empty());
}

TEST_CASE("a satisfying system is never rejected") {
  auto good = ccs_ilts(parse_ccs("rec X.(r.s.X + a.X)"));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RunOptions opts;
    opts.seed = seed;
    opts.max_runs = 5;
    opts.max_steps = 60;
    auto rep = run_multi(*good, good->initial(), parse_monitor(kM1), kRS, opts);
    CHECK_FALSE(rep.verdict.has_value());
  }
}

TEST_CASE("overlapping traces are aggregated past a recorded verdict") {
  auto p2 = ccs_ilts(parse_ccs(kP2));
  History h1{parse_trace("r s ~ut a")};
  auto reach = aggregatable(*p2, p2->initial(), parse_monitor(kM2), h1, 8);
  CHECK(reach.count(parse_trace("r s ~ut a r s ~ut a")));
  CHECK_FALSE(reach.count(parse_trace("r s ~ut a")));

  History h = h1;
  Scheduler s(259);
  RunOptions opts;
  opts.transcript = true;
  RunRecord r = run_once(*p2, p2->initial(), parse_monitor(kM2), h, s, opts);
  CHECK(r.aggregated);
  CHECK(trace_to_string(r.trace) == "r s ~ut a r s ~ut a");
  std::string discard = "iAsM tau | r s ~ut a | (" + parse_monitor(kM2).to_string() + ") (*) no -> " +
                        parse_monitor(kM2).to_string();
  CHECK(std::find(r.transcript.begin(), r.transcript.end(), discard) != r.transcript.end());
}

TEST_CASE("the looping allocation server needs three runs") {
  CcsOptions copts;
  copts.validate = false;
  copts.det = Determinacy::parse("r,s,a");
  auto p13 = ccs_ilts(parse_ccs("rec X.(r.s.X + a.X + a.c.nil)"), copts);
  Monitor m = synth(parse_formula("max X.([r][s]X & [a]X & ([a]ff | [c]ff))"), copts.det);
  auto res = min_runs_to_reject(*p13, p13->initial(), m, copts.det, 4, 6);
  REQUIRE(res.runs.has_value());
  CHECK(*res.runs == 3);
  REQUIRE(res.chain.size() == 4);
  CHECK(res.chain.back().size() == 3);
}

TEST_CASE("aggregated traces are produced by the system") {
  testing::Rng rng(5);
  testing::CcsGen g;
  g.actions = {ext("a"), ext("b"), Action::internal("i")};
  for (int i = 0; i < 100; ++i) {
    CcsOptions copts;
    copts.validate = false;
    auto p = ccs_ilts(testing::random_ccs(rng, g), copts);
    RunOptions opts;
    opts.seed = rng.below(1000);
    opts.max_runs = 4;
    opts.max_steps = 40;
    auto rep = run_multi(*p, p->initial(), parse_monitor("rec X.(a.X (+) b.no)"), Determinacy::all(), opts);
    for (const Trace& t : rep.final_history) CHECK(produces(*p, p->initial(), t));
  }
}
