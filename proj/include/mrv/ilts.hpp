#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mrv/action.hpp"

namespace mrv {

using StateId = std::uint32_t;

struct Transition {
  Action action;
  StateId target;
};

class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DeterminacyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Which traceable actions are declared deterministic.
class Determinacy {
 public:
  Determinacy() = default;  // nothing deterministic

  static Determinacy of(std::set<Action> actions);
  // Comma or whitespace separated labels; '~' marks internal ones.
  static Determinacy parse(std::string_view list);
  static Determinacy all();
  // Actor labels: inputs, plain outputs and free-name communication are
  // deterministic; scope-extruding outputs and scoped communication are not.
  static Determinacy actor_calculus();

  Determinacy with(const Action& a) const;
  Determinacy with_all_internal() const;

  bool operator()(const Action& a) const;
  const std::set<Action>& declared() const { return set_; }
  std::string to_string() const;

 private:
  enum class Mode { Set, All, Actor };
  Mode mode_ = Mode::Set;
  std::set<Action> set_;
  bool all_internal_ = false;
};

// Instrumentable LTS. States are dense ids handed out by the backend; two ids
// are the same state iff they are equal, and equiv() may be coarser.
class Ilts {
 public:
  virtual ~Ilts() = default;

  virtual StateId initial() const = 0;
  virtual const std::vector<Transition>& step(StateId s) const = 0;
  virtual bool equiv(StateId a, StateId b) const { return a == b; }
  virtual std::string describe(StateId s) const = 0;

  const Determinacy& det() const { return det_; }
  void set_det(Determinacy d) { det_ = std::move(d); }
  std::size_t state_bound() const { return state_bound_; }
  void set_state_bound(std::size_t b) { state_bound_ = b; }

 protected:
  Determinacy det_;
  std::size_t state_bound_ = 10000;
};

// Backend helper: interns states by a canonical key and caches successors.
// Safe to share across threads.
template <class S>
class InternedIlts : public Ilts {
 public:
  StateId initial() const override { return 0; }

  const std::vector<Transition>& step(StateId id) const override {
    std::lock_guard lock(mu_);
    auto& slot = succ_[id];
    if (!slot) {
      std::vector<Transition> out;
      for (auto& [a, s] : successors(states_[id])) out.push_back({a, intern_locked(std::move(s))});
      slot = std::move(out);
    }
    return *slot;
  }

  std::string describe(StateId id) const override {
    std::lock_guard lock(mu_);
    return render(states_[id]);
  }

  const S& state(StateId id) const {
    std::lock_guard lock(mu_);
    return states_[id];
  }

  std::size_t interned() const {
    std::lock_guard lock(mu_);
    return states_.size();
  }

  StateId intern(S s) const {
    std::lock_guard lock(mu_);
    return intern_locked(std::move(s));
  }

 protected:
  virtual std::string key(const S& s) const = 0;
  virtual std::string render(const S& s) const = 0;
  virtual std::vector<std::pair<Action, S>> successors(const S& s) const = 0;

 private:
  StateId intern_locked(S s) const {
    std::string k = key(s);
    if (auto it = index_.find(k); it != index_.end()) return it->second;
    if (states_.size() >= state_bound_)
      throw BoundExceeded("state bound of " + std::to_string(state_bound_) + " exceeded");
    auto id = static_cast<StateId>(states_.size());
    states_.push_back(std::move(s));
    succ_.emplace_back();
    index_.emplace(std::move(k), id);
    return id;
  }

  mutable std::recursive_mutex mu_;
  mutable std::deque<S> states_;
  mutable std::deque<std::optional<std::vector<Transition>>> succ_;
  mutable std::unordered_map<std::string, StateId> index_;
};

// All states reachable from `from`, in breadth-first order.
std::vector<StateId> reachable(const Ilts& ilts, StateId from);

// Checks the determinacy axiom over the reachable space; throws
// DeterminacyViolation naming the state and action.
void validate_determinacy(const Ilts& ilts, StateId from);

// Checks that silent steps commute with every other step. Returns a
// description of the first failure.
std::optional<std::string> check_silent_confluence(const Ilts& ilts, StateId from);

}  // namespace mrv
