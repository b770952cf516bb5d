#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "mrv/parse.hpp"

namespace mrv::detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
// Characters allowed in an unquoted action label.
inline bool word_char(char c) {
  return ident_char(c) || c == '?' || c == '!' || c == '{' || c == '}' || c == ',' || c == '~';
}

inline bool is_monitor_keyword(std::string_view w) { return w == "no" || w == "end" || w == "rec"; }

inline std::string quote_action(const std::string& label) {
  bool bare = !label.empty() && !is_monitor_keyword(label);
  for (char c : label) bare = bare && word_char(c);
  return bare ? label : '"' + label + '"';
}

// Character cursor shared by the formula, monitor and system parsers.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool looking_at(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }
  bool accept(std::string_view s) {
    if (!looking_at(s)) return false;
    pos_ += s.size();
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }
  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  // Identifier-like run that may also contain value punctuation.
  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && word_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::string until(char close) {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != close) ++pos_;
    if (pos_ >= text_.size()) fail(std::string("missing '") + close + "'");
    std::string out(text_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }
  std::string quoted() {
    expect("\"");
    return until('"');
  }
  std::size_t pos() const { return pos_; }
  void set_pos(std::size_t p) { pos_ = p; }
  std::string_view rest() const { return text_.substr(pos_); }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace mrv::detail
