#include "mrv/analysis.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "fresh.hpp"
#include "mrv/fragments.hpp"

namespace mrv {

History sub(const History& h, const Action& eta) {
  std::vector<Trace> out;
  for (const auto& t : h)
    if (!t.empty() && t.front() == eta) out.emplace_back(t.begin() + 1, t.end());
  return History(std::move(out));
}

History start(const History& h, const Action& a) {
  std::vector<Trace> out;
  for (const auto& t : h) {
    auto it = std::find_if(t.begin(), t.end(), [](const Action& x) { return !x.is_internal(); });
    if (it != t.end() && *it == a) out.push_back(t);
  }
  return History(std::move(out));
}

std::vector<Action> heads(const History& h) {
  std::vector<Action> out;
  for (const auto& t : h)
    if (!t.empty() && std::find(out.begin(), out.end(), t.front()) == out.end()) out.push_back(t.front());
  std::sort(out.begin(), out.end(), Action::text_less);
  return out;
}

namespace {

std::string term_text(const std::variant<Monitor, Formula>& term) {
  return std::visit([](const auto& t) { return t.to_string(); }, term);
}

std::string conclusion_text(Judgement j, const History& h, bool flag, const std::string& term) {
  const char* name = j == Judgement::Reject ? "rej" : j == Judgement::Violate ? "viol" : "sviol";
  return std::string(name) + "(" + h.to_string() + ", " + (flag ? "true" : "false") + ", " + term + ")";
}

}  // namespace

std::string Derivation::conclusion() const { return conclusion_text(judgement, history, flag, term_text(term)); }

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p->node_count();
  return n;
}

namespace {

void format_into(const Derivation& d, std::size_t depth, std::string& out) {
  out.append(2 * depth, ' ');
  out += d.rule + ' ' + d.conclusion() + '\n';
  for (const auto& p : d.premises) format_into(*p, depth + 1, out);
}

void rules_into(const Derivation& d, std::vector<std::string>& out) {
  out.push_back(d.rule);
  for (const auto& p : d.premises) rules_into(*p, out);
}

}  // namespace

std::string format_derivation(const Derivation& d) {
  std::string out;
  format_into(d, 0, out);
  return out;
}

std::vector<std::string> rule_sequence(const Derivation& d) {
  std::vector<std::string> out;
  rules_into(d, out);
  return out;
}

std::string format_search_log(const std::vector<SearchEvent>& log) {
  std::string out;
  for (const auto& e : log) {
    out.append(2 * e.depth, ' ');
    out += (e.success ? "ok   " : "FAIL ") + e.rule + ' ' + e.conclusion + '\n';
  }
  return out;
}

namespace {

struct MemoKey {
  History h;
  bool flag;
  std::string term;
  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    std::size_t h = k.h.hash();
    detail::mix_hash(h, std::hash<std::string>{}(k.term));
    detail::mix_hash(h, k.flag);
    return h;
  }
};

using Node = std::shared_ptr<const Derivation>;

// Depth-first search over rule instances, memoised on the full judgement.
// Every action rule strictly shortens the longest trace in the history and
// terms are guarded, so the in-progress marker is only a safety net.
template <class Term>
class Prover {
 public:
  Prover(Judgement j, const Determinacy& det, const SearchOptions& opts) : j_(j), det_(det), opts_(opts) {}

  Node prove(const History& h, bool flag, const Term& term, std::size_t depth) {
    ++stats_.obligations;
    MemoKey key{h, flag, term.canonical()};
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (it->second.in_progress) {
        ++stats_.cycles;
        return nullptr;
      }
      ++stats_.memo_hits;
      if (opts_.log) log_.push_back({depth, "memo", conclusion_text(j_, h, flag, term.to_string()), it->second.result != nullptr});
      return it->second.result;
    }
    memo_[key].in_progress = true;
    Node result = h.empty() ? fail_empty(h, flag, term, depth) : expand(h, flag, term, depth);
    auto& entry = memo_[key];
    entry.in_progress = false;
    entry.result = result;
    return result;
  }

  std::vector<SearchEvent> take_log() { return std::move(log_); }
  const SearchStats& stats() const { return stats_; }

 private:
  struct Entry {
    bool in_progress = false;
    Node result;
  };

  // Attempt bookkeeping for the search log.
  std::size_t begin(const char* rule, const History& h, bool flag, const Term& term, std::size_t depth) {
    if (!opts_.log) return 0;
    log_.push_back({depth, rule, conclusion_text(j_, h, flag, term.to_string()), false});
    return log_.size() - 1;
  }
  void finish(std::size_t idx, bool ok) {
    if (opts_.log) log_[idx].success = ok;
  }

  Node node(const char* rule, const History& h, bool flag, const Term& term, std::vector<Node> premises) {
    auto d = std::make_shared<Derivation>();
    d->judgement = j_;
    d->rule = rule;
    d->history = h;
    d->flag = flag;
    d->term = term;
    d->premises = std::move(premises);
    return d;
  }

  // No rule concludes anything about the empty history.
  Node fail_empty(const History& h, bool flag, const Term& term, std::size_t depth) {
    if (opts_.log) {
      const char* rule = leaf_rule(term);
      log_.push_back({depth, rule ? rule : "none", conclusion_text(j_, h, flag, term.to_string()), false});
    }
    return nullptr;
  }

  const char* leaf_rule(const Monitor& m) const { return m.is_no() ? "no" : nullptr; }
  const char* leaf_rule(const Formula& f) const {
    if (f.kind() != FormulaKind::Ff) return nullptr;
    return j_ == Judgement::SepViolate ? "svF" : "vF";
  }

  const char* name(const char* plain, const char* sep) const { return j_ == Judgement::SepViolate ? sep : plain; }

  Node unary(const char* rule, const History& h, bool flag, const Term& term, std::size_t depth,
             const History& h2, bool flag2, const Term& term2) {
    auto idx = begin(rule, h, flag, term, depth);
    Node p = prove(h2, flag2, term2, depth + 1);
    finish(idx, p != nullptr);
    return p ? node(rule, h, flag, term, {p}) : nullptr;
  }

  Node none(const History& h, bool flag, const Term& term, std::size_t depth) {
    if (opts_.log) log_.push_back({depth, "none", conclusion_text(j_, h, flag, term.to_string()), false});
    return nullptr;
  }

  // Prefix rules shared by monitors (act, actI) and boxes (vUm, vUmPre).
  Node prefix(const char* direct, const char* internal, const History& h, bool flag, const Term& term,
              const Action& a, const Term& cont, std::size_t depth) {
    if (Node p = unary(direct, h, flag, term, depth, sub(h, a), flag && det_(a), cont)) return p;
    for (const auto& iota : heads(h)) {
      if (!iota.is_internal()) continue;
      if (Node p = unary(internal, h, flag, term, depth, sub(h, iota), flag && det_(iota), term)) return p;
    }
    return nullptr;
  }

  Node both(const char* rule, const History& h, const Term& term, const Term& l, const Term& r, std::size_t depth) {
    auto idx = begin(rule, h, true, term, depth);
    Node pl = prove(h, true, l, depth + 1);
    Node pr = pl ? prove(h, true, r, depth + 1) : nullptr;
    finish(idx, pr != nullptr);
    return pr ? node(rule, h, true, term, {pl, pr}) : nullptr;
  }

  Node flag_blocked(const char* rule, const History& h, const Term& term, std::size_t depth) {
    if (opts_.log) log_.push_back({depth, rule, conclusion_text(j_, h, false, term.to_string()), false});
    return nullptr;
  }

  Node expand(const History& h, bool flag, const Monitor& m, std::size_t depth) {
    switch (m.kind()) {
      case MonitorKind::No: {
        auto idx = begin("no", h, flag, m, depth);
        finish(idx, true);
        return node("no", h, flag, m, {});
      }
      case MonitorKind::Act:
        return prefix("act", "actI", h, flag, m, m.action(), m.body(), depth);
      case MonitorKind::ParAnd:
        if (Node p = unary("parAL", h, flag, m, depth, h, flag, m.lhs())) return p;
        return unary("parAR", h, flag, m, depth, h, flag, m.rhs());
      case MonitorKind::ParOr:
        if (!flag) return flag_blocked("parO", h, m, depth);
        return both("parO", h, m, m.lhs(), m.rhs(), depth);
      case MonitorKind::Rec:
        return unary("rec", h, flag, m, depth, h, flag, unfold(m));
      case MonitorKind::End:
      case MonitorKind::Var:
        break;
    }
    return none(h, flag, m, depth);
  }

  Node expand(const History& h, bool flag, const Formula& f, std::size_t depth) {
    switch (f.kind()) {
      case FormulaKind::Ff: {
        const char* rule = name("vF", "svF");
        auto idx = begin(rule, h, flag, f, depth);
        finish(idx, true);
        return node(rule, h, flag, f, {});
      }
      case FormulaKind::Box:
        return prefix(name("vUm", "svUm"), name("vUmPre", "svUmPre"), h, flag, f, f.action(), f.body(), depth);
      case FormulaKind::And:
        if (Node p = unary(name("vAndL", "svAndL"), h, flag, f, depth, h, flag, f.lhs())) return p;
        return unary(name("vAndR", "svAndR"), h, flag, f, depth, h, flag, f.rhs());
      case FormulaKind::Or:
        if (!flag) return flag_blocked(name("vOr", "svOr"), h, f, depth);
        if (j_ == Judgement::SepViolate) return split(h, f, depth);
        return both("vOr", h, f, f.lhs(), f.rhs(), depth);
      case FormulaKind::Max:
        return unary(name("vMax", "svMax"), h, flag, f, depth, h, flag, unfold(f));
      default:
        break;
    }
    return none(h, flag, f, depth);
  }

  Node split(const History& h, const Formula& f, std::size_t depth) {
    const auto& ts = h.traces();
    if (ts.size() > 20) throw std::invalid_argument("separation search: history too large to split");
    auto idx = begin("svOr", h, true, f, depth);
    std::size_t full = (std::size_t{1} << ts.size()) - 1;
    for (std::size_t mask = 1; mask < full; ++mask) {
      std::vector<Trace> left, right;
      for (std::size_t i = 0; i < ts.size(); ++i) (mask >> i & 1 ? left : right).push_back(ts[i]);
      History hl(std::move(left)), hr(std::move(right));
      Node pl = prove(hl, true, f.lhs(), depth + 1);
      if (!pl) continue;
      Node pr = prove(hr, true, f.rhs(), depth + 1);
      if (!pr) continue;
      finish(idx, true);
      return node("svOr", h, true, f, {pl, pr});
    }
    return nullptr;
  }

  Judgement j_;
  const Determinacy& det_;
  const SearchOptions& opts_;
  std::unordered_map<MemoKey, Entry, MemoKeyHash> memo_;
  std::vector<SearchEvent> log_;
  SearchStats stats_;
};

template <class Term>
Verdict run(Judgement j, const History& h, bool flag, const Term& term, const Determinacy& det, const SearchOptions& opts) {
  Prover<Term> prover(j, det, opts);
  Verdict v;
  v.derivation = prover.prove(h, flag, term, 0);
  v.rejected = v.derivation != nullptr;
  v.stats = prover.stats();
  v.log = prover.take_log();
  return v;
}

void require_disjunctive_safety(const Formula& phi) {
  switch (phi.kind()) {
    case FormulaKind::Min:
    case FormulaKind::Diamond:
      throw std::invalid_argument("violation analysis: " + phi.to_string() + " uses min or diamond");
    case FormulaKind::Box:
    case FormulaKind::Max:
      require_disjunctive_safety(phi.body());
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      require_disjunctive_safety(phi.lhs());
      require_disjunctive_safety(phi.rhs());
      return;
    default:
      return;
  }
}

}  // namespace

Verdict reject(const History& h, const Monitor& m, const Determinacy& det, SearchOptions opts) {
  return reject(h, true, m, det, opts);
}

Verdict reject(const History& h, bool flag, const Monitor& m, const Determinacy& det, SearchOptions opts) {
  return run(Judgement::Reject, h, flag, m, det, opts);
}

Verdict violation(const History& h, const Formula& phi, const Determinacy& det, SearchOptions opts) {
  require_disjunctive_safety(phi);
  return run(Judgement::Violate, h, true, phi, det, opts);
}

bool violates(const History& h, const Formula& phi, const Determinacy& det) {
  return violation(h, phi, det).rejected;
}

Verdict separation_violation(const History& h, const Formula& phi, const Determinacy& det, SearchOptions opts) {
  if (!in_shml_nf(phi)) throw std::invalid_argument("separation analysis needs a normal-form formula: " + phi.to_string());
  return run(Judgement::SepViolate, h, true, phi, det, opts);
}

bool sep_violates(const History& h, const Formula& phi, const Determinacy& det) {
  return separation_violation(h, phi, det).rejected;
}

namespace {

bool check(bool cond, const Derivation& d, const std::string& what, std::string* why) {
  if (!cond && why && why->empty()) *why = d.rule + " at " + d.conclusion() + ": " + what;
  return cond;
}

bool same_term(const std::variant<Monitor, Formula>& a, const Monitor& b) {
  return std::holds_alternative<Monitor>(a) && std::get<Monitor>(a) == b;
}
bool same_term(const std::variant<Monitor, Formula>& a, const Formula& b) {
  return std::holds_alternative<Formula>(a) && std::get<Formula>(a) == b;
}

template <class Term>
bool valid_node(const Derivation& d, const Term& t, const Determinacy& det, std::string* why);

bool valid_premise_shape(const Derivation& d, std::size_t n, std::string* why) {
  return check(d.premises.size() == n, d, "expected " + std::to_string(n) + " premises", why);
}

template <class Term>
bool valid_same(const Derivation& d, const Derivation& p, const Term& t, std::string* why) {
  return check(p.history == d.history && p.flag == d.flag && same_term(p.term, t), d, "premise does not match", why);
}

template <class Term>
bool valid_prefix(const Derivation& d, const Term& whole, const Action& a, const Term& cont, bool internal_rule,
                  const Determinacy& det, std::string* why) {
  if (!valid_premise_shape(d, 1, why)) return false;
  const Derivation& p = *d.premises[0];
  if (!internal_rule)
    return check(p.history == sub(d.history, a) && p.flag == (d.flag && det(a)) && same_term(p.term, cont), d,
                 "premise is not the continuation", why);
  for (const auto& iota : heads(d.history)) {
    if (iota.is_internal() && p.history == sub(d.history, iota) && p.flag == (d.flag && det(iota)) &&
        same_term(p.term, whole))
      return true;
  }
  return check(false, d, "no internal action explains the premise", why);
}

bool valid_node_monitor(const Derivation& d, const Monitor& m, const Determinacy& det, std::string* why) {
  const std::string& r = d.rule;
  if (r == "no") return check(m.is_no() && !d.history.empty() && d.premises.empty(), d, "bad axiom", why);
  if (r == "act" || r == "actI")
    return check(m.kind() == MonitorKind::Act, d, "not a prefix", why) &&
           valid_prefix(d, m, m.action(), m.body(), r == "actI", det, why);
  if (r == "parAL" || r == "parAR")
    return check(m.kind() == MonitorKind::ParAnd, d, "not a conjunction", why) && valid_premise_shape(d, 1, why) &&
           valid_same(d, *d.premises[0], r == "parAL" ? m.lhs() : m.rhs(), why);
  if (r == "parO")
    return check(m.kind() == MonitorKind::ParOr && d.flag, d, "needs a disjunction and a true flag", why) &&
           valid_premise_shape(d, 2, why) && valid_same(d, *d.premises[0], m.lhs(), why) &&
           valid_same(d, *d.premises[1], m.rhs(), why);
  if (r == "rec")
    return check(m.kind() == MonitorKind::Rec, d, "not a rec", why) && valid_premise_shape(d, 1, why) &&
           valid_same(d, *d.premises[0], unfold(m), why);
  return check(false, d, "unknown rule", why);
}

bool valid_node_formula(const Derivation& d, const Formula& f, const Determinacy& det, std::string* why) {
  std::string r = d.rule;
  bool sep = d.judgement == Judgement::SepViolate;
  if (sep) {
    if (r.rfind("sv", 0) != 0) return check(false, d, "expected a separation rule", why);
    r = "v" + r.substr(2);
  }
  if (r == "vF") return check(f.kind() == FormulaKind::Ff && !d.history.empty() && d.premises.empty(), d, "bad axiom", why);
  if (r == "vUm" || r == "vUmPre")
    return check(f.kind() == FormulaKind::Box, d, "not a box", why) &&
           valid_prefix(d, f, f.action(), f.body(), r == "vUmPre", det, why);
  if (r == "vAndL" || r == "vAndR")
    return check(f.kind() == FormulaKind::And, d, "not a conjunction", why) && valid_premise_shape(d, 1, why) &&
           valid_same(d, *d.premises[0], r == "vAndL" ? f.lhs() : f.rhs(), why);
  if (r == "vMax")
    return check(f.kind() == FormulaKind::Max, d, "not a max", why) && valid_premise_shape(d, 1, why) &&
           valid_same(d, *d.premises[0], unfold(f), why);
  if (r == "vOr") {
    if (!check(f.kind() == FormulaKind::Or && d.flag, d, "needs a disjunction and a true flag", why)) return false;
    if (!valid_premise_shape(d, 2, why)) return false;
    const Derivation& l = *d.premises[0];
    const Derivation& rr = *d.premises[1];
    if (!check(l.flag && rr.flag && same_term(l.term, f.lhs()) && same_term(rr.term, f.rhs()), d, "bad premises", why))
      return false;
    if (!sep) return check(l.history == d.history && rr.history == d.history, d, "histories differ", why);
    bool disjoint = l.history.united(rr.history).size() == l.history.size() + rr.history.size();
    return check(disjoint && l.history.united(rr.history) == d.history, d, "not a disjoint split", why);
  }
  return check(false, d, "unknown rule", why);
}

}  // namespace

bool validate_derivation(const Derivation& d, const Determinacy& det, std::string* why) {
  bool ok = std::visit(
      [&](const auto& t) {
        if constexpr (std::is_same_v<std::decay_t<decltype(t)>, Monitor>) {
          return check(d.judgement == Judgement::Reject, d, "monitor in a violation judgement", why) &&
                 valid_node_monitor(d, t, det, why);
        } else {
          return check(d.judgement != Judgement::Reject, d, "formula in a rejection judgement", why) &&
                 valid_node_formula(d, t, det, why);
        }
      },
      d.term);
  if (!ok) return false;
  for (const auto& p : d.premises) {
    if (!check(p->judgement == d.judgement, d, "mixed judgements", why)) return false;
    if (!validate_derivation(*p, det, why)) return false;
  }
  return true;
}

}  // namespace mrv
