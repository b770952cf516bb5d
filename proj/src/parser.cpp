#include <stdexcept>

#include "lexer.hpp"
#include "mrv/parse.hpp"

namespace mrv {

Alphabet Alphabet::of(std::initializer_list<const char*> labels) {
  Alphabet a;
  for (const char* l : labels) a.actions.insert(Action::parse(l));
  return a;
}

namespace {

using detail::Cursor;

Action modal_action(Cursor& c, const std::string& raw, const Alphabet& alphabet) {
  std::string text = detail::trim(raw);
  if (text.empty()) c.fail("empty modality");
  Action a = Action::parse(text);
  if (a.is_silent()) c.fail("modality on the silent action");
  if (a.is_internal()) c.fail("modality on internal action " + text);
  if (!alphabet.allows(a)) c.fail("undeclared action " + text);
  return a;
}

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Alphabet& alphabet) : c_(text), alphabet_(alphabet) {}

  Formula parse() {
    Formula f = parse_or();
    if (!c_.at_end()) c_.fail("unexpected input");
    return f;
  }

 private:
  Formula parse_or() {
    Formula f = parse_and();
    while (c_.accept("|")) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (c_.accept("&")) f = Formula::conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    char ch = c_.peek();
    if (ch == '(') {
      c_.expect("(");
      Formula f = parse_or();
      c_.expect(")");
      return f;
    }
    if (ch == '[' || ch == '<') {
      c_.accept(std::string(1, ch));
      Action a = modal_action(c_, c_.until(ch == '[' ? ']' : '>'), alphabet_);
      Formula body = parse_unary();
      return ch == '[' ? Formula::box(a, body) : Formula::diamond(a, body);
    }
    if (!detail::ident_start(ch)) c_.fail(ch ? std::string("unexpected '") + ch + "'" : "unexpected end of input");
    std::string word = c_.ident();
    if (word == "tt") return Formula::tt();
    if (word == "ff") return Formula::ff();
    if (word == "max" || word == "min") {
      std::string x = c_.ident();
      c_.expect(".");
      Formula body = parse_or();
      return word == "max" ? Formula::max(x, body) : Formula::min(x, body);
    }
    return Formula::var(word);
  }

  Cursor c_;
  const Alphabet& alphabet_;
};

class MonitorParser {
 public:
  MonitorParser(std::string_view text, const Alphabet& alphabet) : c_(text), alphabet_(alphabet) {}

  Monitor parse() {
    Monitor m = parse_or();
    if (!c_.at_end()) c_.fail("unexpected input");
    return m;
  }

 private:
  Monitor parse_or() {
    Monitor m = parse_and();
    while (c_.accept("(+)")) m = Monitor::par_or(m, parse_and());
    return m;
  }

  Monitor parse_and() {
    Monitor m = parse_unary();
    while (c_.accept("(*)")) m = Monitor::par_and(m, parse_unary());
    return m;
  }

  Monitor prefix(const std::string& label) {
    Action a = Action::parse(label);
    if (a.is_silent()) c_.fail("prefix on the silent action");
    if (a.is_internal()) c_.fail("prefix on internal action " + label);
    if (!alphabet_.allows(a)) c_.fail("undeclared action " + label);
    c_.expect(".");
    return Monitor::act(a, parse_unary());
  }

  Monitor parse_unary() {
    char ch = c_.peek();
    if (ch == '(' && !c_.looking_at("(*)") && !c_.looking_at("(+)")) {
      c_.expect("(");
      Monitor m = parse_or();
      c_.expect(")");
      return m;
    }
    if (ch == '"') return prefix(c_.quoted());
    if (!detail::word_char(ch)) c_.fail(ch ? std::string("unexpected '") + ch + "'" : "unexpected end of input");
    std::size_t start = c_.pos();
    std::string word = c_.word();
    if (word == "no") return Monitor::no();
    if (word == "end") return Monitor::end();
    if (word == "rec") {
      std::string x = c_.ident();
      c_.expect(".");
      return Monitor::rec(x, parse_or());
    }
    if (c_.peek() == '.') return prefix(word);
    for (char w : word) {
      if (!detail::ident_char(w)) {
        c_.set_pos(start);
        c_.fail("expected '.' after action " + word);
      }
    }
    return Monitor::var(word);
  }

  Cursor c_;
  const Alphabet& alphabet_;
};

}  // namespace

Formula parse_formula(std::string_view text, const Alphabet& alphabet) {
  Formula f = FormulaParser(text, alphabet).parse();
  if (!f.closed()) throw ParseError("unbound variable " + f.free_vars().front(), 0);
  if (!is_guarded(f)) throw ParseError("unguarded recursion", 0);
  return f;
}

Monitor parse_monitor(std::string_view text, const Alphabet& alphabet) {
  Monitor m = MonitorParser(text, alphabet).parse();
  if (!m.closed()) throw ParseError("unbound variable " + m.free_vars().front(), 0);
  if (!is_guarded(m)) throw ParseError("unguarded recursion", 0);
  return m;
}

}  // namespace mrv
