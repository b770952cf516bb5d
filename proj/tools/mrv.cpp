// Command-line front end: check, synth, normalize, lb, monitor, analyze,
// oracle and simulate.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "mrv/actors.hpp"
#include "mrv/analysis.hpp"
#include "mrv/ccs.hpp"
#include "mrv/formula.hpp"
#include "mrv/fragments.hpp"
#include "mrv/parse.hpp"
#include "mrv/runtime.hpp"
#include "mrv/search.hpp"
#include "mrv/semantics.hpp"
#include "mrv/synthesis.hpp"

namespace {

using json = nlohmann::json;
using namespace mrv;

enum Exit { kOk = 0, kInput = 2, kBound = 3, kValidation = 4 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A path to an existing file yields its contents, anything else is literal.
std::string load_text(const std::string& arg) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(arg, ec)) return arg;
  std::ifstream in(arg);
  if (!in) throw InputError("cannot read " + arg);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Common {
  std::string det;
  std::uint64_t seed = 1;
  std::size_t max_runs = 10;
  std::size_t max_steps = 1000;
  std::size_t trace_bound = 6;
  std::size_t state_bound = 10000;
  std::string format = "text";
  std::string bias = "uniform";
  bool no_validate = false;
};

struct LoadedSystem {
  std::unique_ptr<Ilts> ilts;
  Determinacy det;
  bool actor = false;
};

Determinacy det_from(const Common& c, const Determinacy& fallback) {
  if (c.det == "actor") return Determinacy::actor_calculus();
  return c.det.empty() ? fallback : Determinacy::parse(c.det);
}

LoadedSystem load_system(const std::string& arg, const std::string& name, const Common& c) {
  LoadedSystem out;
  std::error_code ec;
  bool file = std::filesystem::is_regular_file(arg, ec);
  if (file && std::filesystem::path(arg).extension() == ".actors") {
    auto spec = actor::parse_actor_file(read_file(arg));
    auto ilts = actor::actor_ilts(spec.initial, spec.options);
    ilts->set_state_bound(c.state_bound);
    out.det = ilts->det();
    out.ilts = std::move(ilts);
    out.actor = true;
    return out;
  }
  CcsOptions opts;
  opts.state_bound = c.state_bound;
  opts.validate = !c.no_validate;
  CcsProcess p0;
  if (file) {
    auto sys = parse_ccs_file(read_file(arg));
    p0 = name.empty() ? sys.systems.front().second : sys.find(name);
    opts.det = det_from(c, sys.det);
    opts.trace_equiv_bound = sys.trace_equiv_bound;
  } else {
    p0 = parse_ccs(arg);
    opts.det = det_from(c, Determinacy{});
  }
  out.det = opts.det;
  out.ilts = ccs_ilts(p0, opts);
  return out;
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

void emit_derivation(const Derivation& d, std::size_t depth = 0) {
  emit({{"type", "derivation-node"}, {"depth", depth}, {"rule", d.rule}, {"conclusion", d.conclusion()}});
  for (const auto& p : d.premises) emit_derivation(*p, depth + 1);
}

bool records(const Common& c) {
  if (c.format != "text" && c.format != "records") throw InputError("--format must be text or records");
  return c.format == "records";
}

int cmd_check(const std::string& formula, const Common& c) {
  Formula phi = parse_formula(load_text(formula));
  Determinacy det = det_from(c, Determinacy{});
  bool shml = is_shml(phi);
  auto in_det = in_shml_det(phi, det);
  bool nf = in_shml_nf(phi);
  std::optional<BoundValue> b;
  try {
    b = lb(phi);
  } catch (const std::invalid_argument&) {
  }
  if (records(c)) {
    emit({{"type", "check"},
          {"formula", phi.to_string()},
          {"det", det.to_string()},
          {"shml", shml},
          {"shml_det", in_det.member},
          {"reason", in_det.reason},
          {"shml_nf", nf},
          {"lb", b ? json(b->to_string()) : json(nullptr)}});
    return kOk;
  }
  std::cout << "formula    " << phi.to_string() << "\n";
  std::cout << "det        " << det.to_string() << "\n";
  std::cout << "shml       " << (shml ? "yes" : "no") << "\n";
  std::cout << "shml_det   " << (in_det ? "yes" : "no") << (in_det ? "" : " (" + in_det.reason + ")") << "\n";
  std::cout << "shml_nf    " << (nf ? "yes" : "no") << "\n";
  std::cout << "lb         " << (b ? b->to_string() : "undefined") << "\n";
  std::cout << "monitorable " << (in_det ? "yes" : "no") << "\n";
  if (b && b->infinite()) std::cout << "warning: lb is inf, the formula is satisfied by every system\n";
  return kOk;
}

int cmd_synth(const std::string& formula, const Common& c) {
  Formula phi = parse_formula(load_text(formula));
  Monitor m = synth(phi, det_from(c, Determinacy{}));
  if (records(c)) emit({{"type", "monitor"}, {"monitor", m.to_string()}});
  else std::cout << m.to_string() << "\n";
  return kOk;
}

int cmd_normalize(const std::string& monitor, const Common& c) {
  Monitor m = parse_monitor(load_text(monitor));
  Monitor n = normalize(m, det_from(c, Determinacy{}));
  if (records(c)) emit({{"type", "monitor"}, {"monitor", n.to_string()}});
  else std::cout << n.to_string() << "\n";
  return kOk;
}

int cmd_lb(const std::string& formula, const Common& c) {
  Formula phi = parse_formula(load_text(formula));
  BoundValue b = lb(phi);
  if (records(c)) emit({{"type", "lb"}, {"lb", b.to_string()}});
  else std::cout << b.to_string() << "\n";
  if (!records(c) && b.infinite()) std::cout << "warning: lb is inf, the formula is satisfied by every system\n";
  return kOk;
}

Monitor monitor_for(const std::string& formula, const std::string& monitor, const Determinacy& det) {
  if (!monitor.empty()) return parse_monitor(load_text(monitor));
  if (formula.empty()) throw InputError("give --formula or --monitor");
  return synth(parse_formula(load_text(formula)), det);
}

int cmd_monitor(const std::string& formula, const std::string& monitor, const std::string& system,
                const std::string& name, const std::string& init, const Common& c) {
  auto sys = load_system(system, name, c);
  Monitor m = monitor_for(formula, monitor, sys.det);
  RunOptions opts;
  opts.seed = c.seed;
  opts.max_runs = c.max_runs;
  opts.max_steps = c.max_steps;
  if (c.bias != "uniform" && c.bias != "explore") throw InputError("--bias must be uniform or explore");
  opts.bias = c.bias == "explore" ? Bias::Explore : Bias::Uniform;
  History h0 = init.empty() ? History{} : parse_history_file(read_file(init));
  bool rec = records(c);
  RunReport rep = run_multi(*sys.ilts, sys.ilts->initial(), m, sys.det, opts, h0);
  if (rec) {
    emit({{"type", "config"}, {"seed", rep.seed}, {"monitor", m.to_string()}, {"det", sys.det.to_string()}});
    for (const auto& r : rep.runs)
      emit({{"type", "run"},
            {"seed", rep.seed},
            {"index", r.index},
            {"trace", trace_to_string(r.trace)},
            {"aggregated", r.aggregated},
            {"truncated", r.truncated}});
    emit({{"type", "history"}, {"seed", rep.seed}, {"history", rep.final_history.to_string()}});
    emit({{"type", "verdict"},
          {"seed", rep.seed},
          {"rejected", rep.verdict.has_value()},
          {"runs", rep.runs.size()},
          {"aggregating_runs", rep.productive_runs()}});
    if (rep.verdict) emit_derivation(*rep.verdict->derivation);
    return kOk;
  }
  std::cout << "seed " << rep.seed << "\n";
  std::cout << "monitor " << m.to_string() << "\n";
  std::cout << rep.to_text();
  if (rep.verdict) {
    std::cout << "verdict rejected after " << rep.runs.size() << " runs (" << rep.productive_runs()
              << " aggregating)\n";
    std::cout << format_derivation(*rep.verdict->derivation);
  } else {
    std::cout << "verdict none after " << rep.runs.size() << " runs\n";
  }
  return kOk;
}

int cmd_analyze(const std::string& history, const std::string& formula, const std::string& monitor, bool log,
                const Common& c) {
  History h = parse_history_file(read_file(history));
  Determinacy det = det_from(c, Determinacy{});
  SearchOptions so;
  so.log = log;
  Verdict v;
  if (!monitor.empty()) v = reject(h, parse_monitor(load_text(monitor)), det, so);
  else if (!formula.empty()) v = violation(h, parse_formula(load_text(formula)), det, so);
  else throw InputError("give --formula or --monitor");
  if (records(c)) {
    emit({{"type", "history"}, {"history", h.to_string()}});
    if (log)
      for (const auto& e : v.log)
        emit({{"type", "search"}, {"depth", e.depth}, {"rule", e.rule}, {"conclusion", e.conclusion},
              {"success", e.success}});
    emit({{"type", "verdict"}, {"rejected", v.rejected}});
    if (v.rejected) emit_derivation(*v.derivation);
    return kOk;
  }
  std::cout << "history " << h.to_string() << "\n";
  if (log) std::cout << format_search_log(v.log);
  std::cout << "verdict " << (v.rejected ? "rejected" : "not rejected") << "\n";
  if (v.rejected) std::cout << format_derivation(*v.derivation);
  return kOk;
}

int cmd_oracle(const std::string& formula, const std::string& system, const std::string& name, bool search,
               std::size_t max_size, const Common& c) {
  auto sys = load_system(system, name, c);
  Formula phi = parse_formula(load_text(formula));
  StateId p0 = sys.ilts->initial();
  bool sat = satisfies(*sys.ilts, p0, phi);
  bool rec = records(c);
  if (rec) emit({{"type", "oracle"}, {"formula", phi.to_string()}, {"satisfies", sat}});
  else std::cout << "satisfies " << (sat ? "yes" : "no") << "\n";
  if (!search || sat) return kOk;
  auto pool = traces(*sys.ilts, p0, c.trace_bound).traces();
  auto found = smallest_history(pool, max_size, [&](const History& h) { return violates(h, phi, sys.det); });
  std::optional<bool> rejected;
  if (found.history && in_shml_det(phi, sys.det))
    rejected = reject(*found.history, synth(phi, sys.det), sys.det).rejected;
  if (rec) {
    emit({{"type", "violating-history"},
          {"history", found.history ? json(found.history->to_string()) : json(nullptr)},
          {"size", found.history ? json(found.history->size()) : json(nullptr)},
          {"candidates", found.candidates},
          {"monitor_rejects", rejected ? json(*rejected) : json(nullptr)}});
    return kOk;
  }
  if (!found.history) {
    std::cout << "no violating history of size <= " << max_size << " over traces of length <= " << c.trace_bound
              << "\n";
    return kOk;
  }
  std::cout << "minimal violating history " << found.history->to_string() << " size " << found.history->size()
            << "\n";
  if (rejected) std::cout << "synthesised monitor rejects it " << (*rejected ? "yes" : "no") << "\n";
  return kOk;
}

int cmd_simulate(const std::string& system, const std::string& name, const Common& c) {
  auto sys = load_system(system, name, c);
  std::mt19937_64 rng(c.seed);
  StateId s = sys.ilts->initial();
  bool rec = records(c);
  if (rec) emit({{"type", "config"}, {"seed", c.seed}});
  else std::cout << "seed " << c.seed << "\nstate " << sys.ilts->describe(s) << "\n";
  for (std::size_t i = 0; i < c.max_steps; ++i) {
    const auto& succ = sys.ilts->step(s);
    if (succ.empty()) break;
    const auto& tr = succ[rng() % succ.size()];
    s = tr.target;
    if (rec) emit({{"type", "step"}, {"action", tr.action.to_string()}, {"state", sys.ilts->describe(s)}});
    else std::cout << tr.action.to_string() << "\n  " << sys.ilts->describe(s) << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-run runtime verification of branching-time properties"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--det", c.det, "Deterministic actions, e.g. r,s (internal ones as ~i), or actor");
    sub->add_option("--format", c.format, "text or records")->capture_default_str();
  };
  auto running = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
    sub->add_option("--max-runs", c.max_runs)->capture_default_str();
    sub->add_option("--max-steps", c.max_steps)->capture_default_str();
    sub->add_option("--trace-bound", c.trace_bound, "Trace length bound L")->capture_default_str();
    sub->add_option("--state-bound", c.state_bound)->capture_default_str();
    sub->add_option("--bias", c.bias, "uniform or explore")->capture_default_str();
    sub->add_flag("--no-validate", c.no_validate, "Do not check the determinacy declaration");
  };

  std::string formula, monitor, system, name, history, init;
  bool log = false, search = false;
  std::size_t max_size = 4;

  auto* check = app.add_subcommand("check", "Fragment membership and lower bound");
  check->add_option("formula", formula, "Formula text or file")->required();
  common(check);
  auto* syn = app.add_subcommand("synth", "Synthesise a monitor");
  syn->add_option("formula", formula, "Formula text or file")->required();
  common(syn);
  auto* norm = app.add_subcommand("normalize", "Normalise a monitor");
  norm->add_option("monitor", monitor, "Monitor text or file")->required();
  common(norm);
  auto* lbc = app.add_subcommand("lb", "Lower bound on history size");
  lbc->add_option("formula", formula, "Formula text or file")->required();
  common(lbc);
  auto* mon = app.add_subcommand("monitor", "Run and analyse until a verdict");
  mon->add_option("--formula", formula);
  mon->add_option("--monitor", monitor);
  mon->add_option("--system", system, "CCS file, actor file (.actors) or CCS term")->required();
  mon->add_option("--name", name, "System name inside a CCS file");
  mon->add_option("--history", init, "Initial history file");
  common(mon);
  running(mon);
  auto* ana = app.add_subcommand("analyze", "Analyse a history file");
  ana->add_option("--history", history)->required();
  ana->add_option("--formula", formula);
  ana->add_option("--monitor", monitor);
  ana->add_flag("--log", log, "Print every obligation tried");
  common(ana);
  auto* ora = app.add_subcommand("oracle", "Ground truth by the denotational semantics");
  ora->add_option("--formula", formula)->required();
  ora->add_option("--system", system)->required();
  ora->add_option("--name", name);
  ora->add_flag("--search", search, "Also search for a smallest violating history");
  ora->add_option("--max-history", max_size)->capture_default_str();
  common(ora);
  running(ora);
  auto* sim = app.add_subcommand("simulate", "Random walk through a system");
  sim->add_option("--system", system)->required();
  sim->add_option("--name", name);
  common(sim);
  running(sim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*check) return cmd_check(formula, c);
    if (*syn) return cmd_synth(formula, c);
    if (*norm) return cmd_normalize(monitor, c);
    if (*lbc) return cmd_lb(formula, c);
    if (*mon) return cmd_monitor(formula, monitor, system, name, init, c);
    if (*ana) return cmd_analyze(history, formula, monitor, log, c);
    if (*ora) return cmd_oracle(formula, system, name, search, max_size, c);
    if (*sim) return cmd_simulate(system, name, c);
  } catch (const BoundExceeded& e) {
    std::cerr << "bound exceeded: " << e.what() << "\n";
    return kBound;
  } catch (const DeterminacyViolation& e) {
    std::cerr << "determinacy violation: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
