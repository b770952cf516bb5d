#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace mrv {

// Interned label. Ordering is by intern id, which depends on the order labels
// were first seen; printers sort by text when output must be stable.
class Symbol {
 public:
  Symbol() = default;
  static Symbol intern(std::string_view text);
  std::string_view str() const;
  std::uint32_t id() const { return id_; }
  bool empty() const { return id_ == 0; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

 private:
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;  // 0 is the empty label
};

enum class ActionKind : std::uint8_t { External, Internal, Silent };

struct Action {
  ActionKind kind = ActionKind::Silent;
  Symbol label;

  static Action external(std::string_view l) { return {ActionKind::External, Symbol::intern(l)}; }
  static Action internal(std::string_view l) { return {ActionKind::Internal, Symbol::intern(l)}; }
  static Action silent() { return {}; }

  bool is_external() const { return kind == ActionKind::External; }
  bool is_internal() const { return kind == ActionKind::Internal; }
  bool is_silent() const { return kind == ActionKind::Silent; }
  bool traceable() const { return kind != ActionKind::Silent; }

  // "a", "~i" or "tau".
  std::string to_string() const;
  // Inverse of to_string. Throws std::invalid_argument on an empty label.
  static Action parse(std::string_view text);

  friend bool operator==(const Action&, const Action&) = default;
  // Text order: kind, then label text.
  static bool text_less(const Action& a, const Action& b);
  friend std::strong_ordering operator<=>(const Action& a, const Action& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    return a.label <=> b.label;
  }
};

}  // namespace mrv

template <>
struct std::hash<mrv::Symbol> {
  std::size_t operator()(mrv::Symbol s) const noexcept { return s.id(); }
};
template <>
struct std::hash<mrv::Action> {
  std::size_t operator()(const mrv::Action& a) const noexcept {
    return (static_cast<std::size_t>(a.label.id()) << 2) ^ static_cast<std::size_t>(a.kind);
  }
};
