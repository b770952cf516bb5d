#include "mrv/ccs.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "fresh.hpp"
#include "lexer.hpp"
#include "mrv/semantics.hpp"

namespace mrv {

struct CcsProcess::Node {
  CcsKind kind;
  std::string name;
  Action action;
  CcsProcess a{nullptr};
  CcsProcess b{nullptr};
  std::vector<std::string> fv;
  mutable std::once_flag once;
  mutable std::string canon;
};

namespace {

using Node = CcsProcess::Node;

std::shared_ptr<Node> make(CcsKind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

void canon_into(const CcsProcess& p, std::vector<std::string>& bound, std::string& out) {
  switch (p.kind()) {
    case CcsKind::Nil: out += '0'; return;
    case CcsKind::Var:
      for (std::size_t i = bound.size(); i-- > 0;) {
        if (bound[i] == p.name()) {
          out += '#' + std::to_string(bound.size() - 1 - i) + ';';
          return;
        }
      }
      out += '$' + std::to_string(p.name().size()) + ':' + p.name();
      return;
    case CcsKind::Prefix: {
      auto label = p.action().to_string();
      out += '.' + std::to_string(label.size()) + ':' + label;
      canon_into(p.body(), bound, out);
      return;
    }
    case CcsKind::Sum:
      out += "(+";
      canon_into(p.lhs(), bound, out);
      out += ',';
      canon_into(p.rhs(), bound, out);
      out += ')';
      return;
    case CcsKind::Rec:
      out += "R.";
      bound.push_back(p.name());
      canon_into(p.body(), bound, out);
      bound.pop_back();
      return;
  }
}

const CcsProcess& nil_value() {
  static const CcsProcess v = [] { return CcsProcess::nil(); }();
  return v;
}

}  // namespace

CcsProcess::CcsProcess() : CcsProcess(nil_value()) {}

CcsProcess CcsProcess::nil() {
  static const std::shared_ptr<const Node> n = make(CcsKind::Nil);
  return CcsProcess(n);
}

CcsProcess CcsProcess::prefix(Action a, CcsProcess cont) {
  auto n = make(CcsKind::Prefix);
  n->fv = cont.free_vars();
  n->action = a;
  n->a = std::move(cont);
  return CcsProcess(std::move(n));
}

CcsProcess CcsProcess::sum(CcsProcess l, CcsProcess r) {
  auto n = make(CcsKind::Sum);
  n->fv = detail::merge_names(l.free_vars(), r.free_vars());
  n->a = std::move(l);
  n->b = std::move(r);
  return CcsProcess(std::move(n));
}

CcsProcess CcsProcess::rec(std::string x, CcsProcess body) {
  auto n = make(CcsKind::Rec);
  n->fv = body.free_vars();
  std::erase(n->fv, x);
  n->name = std::move(x);
  n->a = std::move(body);
  return CcsProcess(std::move(n));
}

CcsProcess CcsProcess::var(std::string x) {
  auto n = make(CcsKind::Var);
  n->fv = {x};
  n->name = std::move(x);
  return CcsProcess(std::move(n));
}

CcsKind CcsProcess::kind() const { return n_->kind; }
const Action& CcsProcess::action() const { return n_->action; }
const std::string& CcsProcess::name() const { return n_->name; }
const CcsProcess& CcsProcess::body() const { return n_->a; }
const CcsProcess& CcsProcess::lhs() const { return n_->a; }
const CcsProcess& CcsProcess::rhs() const { return n_->b; }
const std::vector<std::string>& CcsProcess::free_vars() const { return n_->fv; }

const std::string& CcsProcess::canonical() const {
  std::call_once(n_->once, [this] {
    std::vector<std::string> bound;
    canon_into(*this, bound, n_->canon);
  });
  return n_->canon;
}

bool operator==(const CcsProcess& a, const CcsProcess& b) {
  return a.n_ == b.n_ || a.canonical() == b.canonical();
}

namespace {

void print_into(const CcsProcess& p, bool tail, std::string& out) {
  switch (p.kind()) {
    case CcsKind::Nil: out += "nil"; return;
    case CcsKind::Var: out += p.name(); return;
    case CcsKind::Prefix:
      out += p.action().to_string() + '.';
      if (p.body().kind() == CcsKind::Sum) {
        out += '(';
        print_into(p.body(), true, out);
        out += ')';
      } else {
        print_into(p.body(), tail, out);
      }
      return;
    case CcsKind::Sum:
      print_into(p.lhs(), false, out);
      out += " + ";
      if (p.rhs().kind() == CcsKind::Sum) {
        out += '(';
        print_into(p.rhs(), true, out);
        out += ')';
      } else {
        print_into(p.rhs(), tail, out);
      }
      return;
    case CcsKind::Rec:
      if (!tail) out += '(';
      out += "rec " + p.name() + '.';
      if (p.body().kind() == CcsKind::Sum) {
        out += '(';
        print_into(p.body(), true, out);
        out += ')';
      } else {
        print_into(p.body(), true, out);
      }
      if (!tail) out += ')';
      return;
  }
}

}  // namespace

std::string CcsProcess::to_string() const {
  std::string out;
  print_into(*this, true, out);
  return out;
}

CcsProcess substitute(const CcsProcess& p, const std::string& x, const CcsProcess& q) {
  if (!detail::has_name(p.free_vars(), x)) return p;
  switch (p.kind()) {
    case CcsKind::Var: return q;
    case CcsKind::Prefix: return CcsProcess::prefix(p.action(), substitute(p.body(), x, q));
    case CcsKind::Sum: return CcsProcess::sum(substitute(p.lhs(), x, q), substitute(p.rhs(), x, q));
    case CcsKind::Rec: {
      std::string y = p.name();
      CcsProcess body = p.body();
      if (detail::has_name(q.free_vars(), y)) {
        auto taken = detail::merge_names(detail::merge_names(q.free_vars(), body.free_vars()), {x});
        std::string fresh = detail::fresh_name(y, taken);
        body = substitute(body, y, CcsProcess::var(fresh));
        y = fresh;
      }
      return CcsProcess::rec(y, substitute(body, x, q));
    }
    case CcsKind::Nil: break;
  }
  return p;
}

namespace {

bool guarded_in(const CcsProcess& p, std::vector<std::string>& unguarded) {
  switch (p.kind()) {
    case CcsKind::Var:
      return std::find(unguarded.begin(), unguarded.end(), p.name()) == unguarded.end();
    case CcsKind::Prefix: {
      std::vector<std::string> none;
      return guarded_in(p.body(), none);
    }
    case CcsKind::Sum:
      return guarded_in(p.lhs(), unguarded) && guarded_in(p.rhs(), unguarded);
    case CcsKind::Rec: {
      unguarded.push_back(p.name());
      bool ok = guarded_in(p.body(), unguarded);
      unguarded.pop_back();
      return ok;
    }
    case CcsKind::Nil: break;
  }
  return true;
}

class CcsParser {
 public:
  explicit CcsParser(std::string_view text) : c_(text) {}

  CcsProcess parse() {
    CcsProcess p = parse_sum();
    if (!c_.at_end()) c_.fail("unexpected input");
    return p;
  }

 private:
  CcsProcess parse_sum() {
    CcsProcess p = parse_unary();
    while (c_.accept("+")) p = CcsProcess::sum(p, parse_unary());
    return p;
  }

  CcsProcess parse_unary() {
    char ch = c_.peek();
    if (ch == '(') {
      c_.expect("(");
      CcsProcess p = parse_sum();
      c_.expect(")");
      return p;
    }
    if (!detail::word_char(ch)) c_.fail(ch ? std::string("unexpected '") + ch + "'" : "unexpected end of input");
    std::string word = c_.word();
    if (word == "nil") return CcsProcess::nil();
    if (word == "rec") {
      std::string x = c_.ident();
      c_.expect(".");
      return CcsProcess::rec(x, parse_sum());
    }
    if (c_.accept(".")) return CcsProcess::prefix(Action::parse(word), parse_unary());
    if (!detail::ident_start(word.front()) || word == "tau") c_.fail("expected '.' after " + word);
    return CcsProcess::var(word);
  }

  detail::Cursor c_;
};

}  // namespace

bool is_guarded(const CcsProcess& p) {
  std::vector<std::string> unguarded;
  return guarded_in(p, unguarded);
}

CcsProcess parse_ccs(std::string_view text) {
  CcsProcess p = CcsParser(text).parse();
  if (!p.closed()) throw ParseError("unbound variable " + p.free_vars().front(), 0);
  if (!is_guarded(p)) throw ParseError("unguarded recursion", 0);
  return p;
}

std::vector<std::pair<Action, CcsProcess>> ccs_step(const CcsProcess& p) {
  std::vector<std::pair<Action, CcsProcess>> out;
  switch (p.kind()) {
    case CcsKind::Prefix:
      out.emplace_back(p.action(), p.body());
      break;
    case CcsKind::Sum: {
      out = ccs_step(p.lhs());
      auto r = ccs_step(p.rhs());
      out.insert(out.end(), r.begin(), r.end());
      break;
    }
    case CcsKind::Rec:
      out.emplace_back(Action::silent(), substitute(p.body(), p.name(), p));
      break;
    case CcsKind::Nil:
    case CcsKind::Var:
      break;
  }
  return out;
}

CcsIlts::CcsIlts(const CcsProcess& p0, CcsOptions opts) : trace_bound_(opts.trace_equiv_bound) {
  det_ = std::move(opts.det);
  state_bound_ = opts.state_bound;
  intern(p0);
}

bool CcsIlts::equiv(StateId a, StateId b) const {
  if (a == b) return true;
  if (trace_bound_ == 0) return false;
  return traces(*this, a, trace_bound_) == traces(*this, b, trace_bound_);
}

std::unique_ptr<CcsIlts> ccs_ilts(const CcsProcess& p0, CcsOptions opts) {
  bool validate = opts.validate;
  auto ilts = std::make_unique<CcsIlts>(p0, std::move(opts));
  if (validate) validate_determinacy(*ilts, ilts->initial());
  return ilts;
}

const CcsProcess& CcsSystemFile::find(const std::string& name) const {
  for (const auto& [n, p] : systems)
    if (n == name) return p;
  throw std::invalid_argument("no system named " + name);
}

CcsSystemFile parse_ccs_file(std::string_view text) {
  // Group lines into declarations.
  std::vector<std::pair<std::size_t, std::string>> decls;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    bool starts = t.rfind("system", 0) == 0 || t.rfind("det", 0) == 0 || t.rfind("equiv", 0) == 0;
    if (starts || decls.empty()) decls.emplace_back(lineno, t);
    else decls.back().second += ' ' + t;
  }
  CcsSystemFile file;
  for (const auto& [at, d] : decls) {
    auto eq = d.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(at) + ": expected '='", 0);
    std::istringstream head(d.substr(0, eq));
    std::string keyword, name, extra;
    head >> keyword >> name >> extra;
    std::string rhs = detail::trim(d.substr(eq + 1));
    try {
      if (keyword == "system" && !name.empty() && extra.empty()) {
        file.systems.emplace_back(name, parse_ccs(rhs));
      } else if (keyword == "det" && name.empty()) {
        if (rhs.size() < 2 || rhs.front() != '{' || rhs.back() != '}') throw ParseError("expected {labels}", 0);
        file.det = Determinacy::parse(rhs.substr(1, rhs.size() - 2));
      } else if (keyword == "equiv" && name.empty()) {
        std::istringstream r(rhs);
        std::string mode;
        std::size_t bound = 0;
        r >> mode >> bound;
        if (mode == "alpha") file.trace_equiv_bound = 0;
        else if (mode == "trace" && bound > 0) file.trace_equiv_bound = bound;
        else throw ParseError("expected 'alpha' or 'trace <L>'", 0);
      } else {
        throw ParseError("unknown declaration", 0);
      }
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(at) + ": " + e.what(), 0);
    }
  }
  if (file.systems.empty()) throw ParseError("no system declared", 0);
  return file;
}

}  // namespace mrv
