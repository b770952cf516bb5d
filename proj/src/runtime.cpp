#include "mrv/runtime.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace mrv {

namespace {

Monitor rebuild(const Monitor& par, Monitor l, Monitor r) {
  return par.kind() == MonitorKind::ParOr ? Monitor::par_or(std::move(l), std::move(r))
                                          : Monitor::par_and(std::move(l), std::move(r));
}

}  // namespace

bool can_silent_step(const Monitor& m) {
  switch (m.kind()) {
    case MonitorKind::Rec:
      return true;
    case MonitorKind::ParOr:
    case MonitorKind::ParAnd:
      return m.lhs().is_no() || m.rhs().is_no() || can_silent_step(m.lhs()) || can_silent_step(m.rhs());
    default:
      return false;
  }
}

std::vector<Monitor> silent_successors(const Monitor& m, bool in_history) {
  std::vector<Monitor> out;
  switch (m.kind()) {
    case MonitorKind::Rec:
      out.push_back(unfold(m));
      break;
    case MonitorKind::ParOr:
    case MonitorKind::ParAnd: {
      const Monitor& l = m.lhs();
      const Monitor& r = m.rhs();
      if (l.is_no()) out.push_back(in_history ? r : Monitor::no());
      if (r.is_no()) out.push_back(in_history ? l : Monitor::no());
      for (auto& l2 : silent_successors(l, in_history)) out.push_back(rebuild(m, l2, r));
      for (auto& r2 : silent_successors(r, in_history)) out.push_back(rebuild(m, l, r2));
      break;
    }
    default:
      break;
  }
  return out;
}

std::vector<Monitor> action_successors(const Monitor& m, const Action& a) {
  std::vector<Monitor> out;
  switch (m.kind()) {
    case MonitorKind::End:
      out.push_back(m);
      break;
    case MonitorKind::Act:
      if (m.action() == a) out.push_back(m.body());
      break;
    case MonitorKind::ParOr:
    case MonitorKind::ParAnd: {
      const Monitor& l = m.lhs();
      const Monitor& r = m.rhs();
      auto ls = action_successors(l, a);
      auto rs = action_successors(r, a);
      for (auto& l2 : ls)
        for (auto& r2 : rs) out.push_back(rebuild(m, l2, r2));
      // Discard a component that can neither follow a nor move silently.
      if (rs.empty() && !r.is_no() && !can_silent_step(r)) out.insert(out.end(), ls.begin(), ls.end());
      if (ls.empty() && !l.is_no() && !can_silent_step(l)) out.insert(out.end(), rs.begin(), rs.end());
      break;
    }
    default:
      break;
  }
  return out;
}

std::vector<ExecutingMonitor> monitor_step(const ExecutingMonitor& em, const History& h,
                                           const std::optional<Action>& input) {
  std::vector<ExecutingMonitor> out;
  if (!input) {
    for (auto& m : silent_successors(em.mon, h.contains(em.accrued))) out.push_back({em.accrued, m});
    return out;
  }
  Trace t = em.accrued;
  t.push_back(*input);
  for (auto& m : action_successors(em.mon, *input)) out.push_back({t, m});
  return out;
}

const char* rule_name(InstrRule r) {
  switch (r) {
    case InstrRule::No: return "iNo";
    case InstrRule::Ter: return "iTer";
    case InstrRule::AsS: return "iAsS";
    case InstrRule::AsI: return "iAsI";
    case InstrRule::AsM: return "iAsM";
    case InstrRule::Mon: return "iMon";
  }
  return "?";
}

std::vector<InstrStep> instr_steps(const Ilts& ilts, const MonitoredSystem& ms) {
  std::vector<InstrStep> out;
  const Monitor& m = ms.exec.mon;
  const Trace& t = ms.exec.accrued;
  if (m.is_no()) {
    MonitoredSystem next{ms.sus, {t, Monitor::end()}, ms.history};
    bool fresh = next.history.insert(t);
    out.push_back({InstrRule::No, Action::silent(), std::move(next), fresh});
    return out;
  }
  bool mon_silent = can_silent_step(m);
  for (const auto& tr : ilts.step(ms.sus)) {
    const Action& a = tr.action;
    if (a.is_silent()) {
      out.push_back({InstrRule::AsS, a, {tr.target, ms.exec, ms.history}});
    } else if (a.is_internal()) {
      Trace t2 = t;
      t2.push_back(a);
      out.push_back({InstrRule::AsI, Action::silent(), {tr.target, {std::move(t2), m}, ms.history}});
    } else {
      auto succ = action_successors(m, a);
      Trace t2 = t;
      t2.push_back(a);
      for (auto& m2 : succ) out.push_back({InstrRule::Mon, a, {tr.target, {t2, m2}, ms.history}});
      if (succ.empty() && !mon_silent)
        out.push_back({InstrRule::Ter, a, {tr.target, {t2, Monitor::end()}, ms.history}});
    }
  }
  for (auto& m2 : silent_successors(m, ms.history.contains(t)))
    out.push_back({InstrRule::AsM, Action::silent(), {ms.sus, {t, m2}, ms.history}});
  return out;
}

std::size_t Scheduler::choose(const std::vector<InstrStep>& steps, const MonitoredSystem& from) {
  if (steps.empty()) throw std::logic_error("no enabled instrumentation step");
  std::vector<std::size_t> pool;
  if (bias_ == Bias::Explore) {
    // Skip steps that only retrace a prefix of an aggregated trace.
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const Trace& t2 = steps[i].next.exec.accrued;
      bool retraces = false;
      if (t2.size() > from.exec.accrued.size())
        for (const auto& old : from.history)
          if (is_prefix(t2, old)) {
            retraces = true;
            break;
          }
      if (!retraces) pool.push_back(i);
    }
  }
  if (pool.empty())
    for (std::size_t i = 0; i < steps.size(); ++i) pool.push_back(i);
  return pool[below(pool.size())];
}

MonitoredSystem instr_step(const Ilts& ilts, const MonitoredSystem& ms, Scheduler& scheduler) {
  auto steps = instr_steps(ilts, ms);
  return steps[scheduler.choose(steps, ms)].next;
}

RunRecord run_once(const Ilts& ilts, StateId p0, const Monitor& m, History& h, Scheduler& scheduler,
                   const RunOptions& opts, std::size_t index) {
  RunRecord rec;
  rec.index = index;
  MonitoredSystem ms{p0, {{}, m}, h};
  while (true) {
    if (rec.steps >= opts.max_steps) {
      rec.truncated = true;
      break;
    }
    auto steps = instr_steps(ilts, ms);
    if (steps.empty()) break;
    auto& chosen = steps[scheduler.choose(steps, ms)];
    ++rec.steps;
    if (opts.transcript)
      rec.transcript.push_back(std::string(rule_name(chosen.rule)) + " " + chosen.label.to_string() + " | " +
                               trace_to_string(chosen.next.exec.accrued) + " | " + ms.exec.mon.to_string() +
                               " -> " + chosen.next.exec.mon.to_string());
    rec.aggregated = rec.aggregated || chosen.aggregates;
    ms = std::move(chosen.next);
    // Once the monitor is end nothing more can be aggregated.
    if (ms.exec.mon.is_end() && !opts.continue_after_aggregate) break;
    if (chosen.aggregates && !opts.continue_after_aggregate) break;
  }
  rec.trace = ms.exec.accrued;
  h = ms.history;
  return rec;
}

std::size_t RunReport::productive_runs() const {
  std::size_t n = 0;
  for (const auto& r : runs) n += r.aggregated;
  return n;
}

std::string RunReport::to_text() const {
  std::ostringstream os;
  for (const auto& r : runs)
    os << "run " << r.index << " trace " << trace_to_string(r.trace) << " aggregated " << (r.aggregated ? "yes" : "no")
       << (r.truncated ? " truncated" : "") << "\n";
  os << "history " << final_history.to_string() << "\n";
  return os.str();
}

RunReport run_multi(const Ilts& ilts, StateId p0, const Monitor& m, const Determinacy& det, const RunOptions& opts,
                    const History& initial) {
  RunReport rep;
  rep.seed = opts.seed;
  Scheduler sched(opts.seed, opts.bias);
  History h = initial;
  rep.chain.push_back(h);
  if (auto v = reject(h, m, det); v.rejected) {
    rep.final_history = h;
    rep.verdict = std::move(v);
    return rep;
  }
  for (std::size_t i = 1; i <= opts.max_runs; ++i) {
    rep.runs.push_back(run_once(ilts, p0, m, h, sched, opts, i));
    rep.chain.push_back(h);
    if (!rep.runs.back().aggregated) continue;
    if (auto v = reject(h, m, det); v.rejected) {
      rep.verdict = std::move(v);
      break;
    }
  }
  rep.final_history = h;
  return rep;
}

namespace {

struct Config {
  StateId sus;
  Trace accrued;
  Monitor mon;
  bool operator==(const Config& o) const { return sus == o.sus && accrued == o.accrued && mon == o.mon; }
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const {
    return c.sus * 0x9e3779b97f4a7c15ULL ^ hash_trace(c.accrued) * 31 ^ c.mon.hash();
  }
};

}  // namespace

std::set<Trace> aggregatable(const Ilts& ilts, StateId p0, const Monitor& m, const History& h, std::size_t max_len) {
  std::set<Trace> found;
  std::unordered_set<Config, ConfigHash> seen;
  std::vector<MonitoredSystem> stack{{p0, {{}, m}, h}};
  seen.insert({p0, {}, m});
  while (!stack.empty()) {
    MonitoredSystem ms = std::move(stack.back());
    stack.pop_back();
    for (auto& st : instr_steps(ilts, ms)) {
      if (st.aggregates) {
        found.insert(ms.exec.accrued);
        continue;
      }
      if (st.next.exec.mon.is_end() || st.next.exec.accrued.size() > max_len) continue;
      Config key{st.next.sus, st.next.exec.accrued, st.next.exec.mon};
      if (seen.insert(key).second) stack.push_back(std::move(st.next));
    }
  }
  return found;
}

RunSearchResult min_runs_to_reject(const Ilts& ilts, StateId p0, const Monitor& m, const Determinacy& det,
                                   std::size_t max_runs, std::size_t max_len) {
  RunSearchResult res;
  std::map<History, History> parent;  // child -> parent
  std::vector<History> level{History{}};
  parent.emplace(History{}, History{});
  for (std::size_t k = 0;; ++k) {
    for (const auto& h : level) {
      ++res.histories_explored;
      if (reject(h, m, det).rejected) {
        res.runs = k;
        History cur = h;
        res.chain.push_back(cur);
        while (!cur.empty()) {
          cur = parent.at(cur);
          res.chain.insert(res.chain.begin(), cur);
        }
        return res;
      }
    }
    if (k == max_runs) return res;
    std::vector<History> next;
    for (const auto& h : level)
      for (const auto& t : aggregatable(ilts, p0, m, h, max_len)) {
        History h2 = h;
        h2.insert(t);
        if (parent.emplace(h2, h).second) next.push_back(std::move(h2));
      }
    if (next.empty()) return res;
    level = std::move(next);
  }
}

}  // namespace mrv
