#pragma once

// Finite deterministic PA for a deterministic SA with exponential clocks.
//
// A symbolic state (q, X) stands for location q with the clocks in X still
// running (each exponentially distributed by memorylessness) and every other
// clock expired. Clocks that can no longer trigger an edge before being reset
// are dropped from X, so equal futures share one symbolic state.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dbisim/ct_models.hpp"
#include "dbisim/expolynomial.hpp"
#include "dbisim/pa.hpp"

namespace dbisim {

struct SymState {
  std::size_t location = 0;
  ClockSet active;

  friend bool operator==(const SymState& a, const SymState& b) {
    return a.location == b.location && a.active == b.active;
  }
  friend bool operator<(const SymState& a, const SymState& b) {
    return a.location != b.location ? a.location < b.location : a.active < b.active;
  }
};

/// "q@{x,y}"
std::string symstate_name(const SA& sa, const SymState& s);

/// For every location, the clocks that may still trigger an edge before they
/// are next reset.
std::vector<ClockSet> live_clocks(const SA& sa);

struct ActionTiming {
  Rational mass;
  Rational atom;         // weight of firing at time 0
  Expolynomial density;  // sub-density of the first firing time on (0, inf)
};

struct TimingProfile {
  std::map<std::size_t, ActionTiming> actions;  // keyed by action index
  Rational halt;
};

struct SymStep {
  Rational probability;
  std::map<SymState, Rational> targets;  // normalised to sum to one
};

using SuccessorMap = std::map<std::size_t, SymStep>;  // keyed by action index

SymState initial_symstate(const SA& sa, std::size_t location);

SuccessorMap successor(const SA& sa, const SymState& s);
TimingProfile timing_profile(const SA& sa, const SymState& s);

struct DeterminismReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Explores every symbolic state reachable from any location.
DeterminismReport validate_deterministic(const SA& sa);

struct AbstractStep {
  Rational probability;
  std::vector<std::pair<std::size_t, Rational>> targets;  // by state index, ascending
};

struct AbstractState {
  SymState sym;
  std::string name;
  std::map<std::size_t, AbstractStep> steps;  // keyed by action index
  TimingProfile timing;
};

struct FinitePA {
  std::vector<std::string> actions;
  std::vector<AbstractState> states;
  std::vector<std::size_t> initials;  // one per requested location, same order
  std::size_t locations = 0;
  std::size_t clocks = 0;

  std::size_t size() const { return states.size(); }
  std::size_t index_of(const SymState& s) const;
  Dist dirac(std::size_t state) const;
  /// |Q| * 2^|C|, saturating.
  std::size_t state_bound() const;
};

/// Breadth-first closure from the initial symbolic states of `initials`.
/// Throws DeterminismViolation or ZenoLoop.
FinitePA abstract(const SA& sa, const std::vector<std::size_t>& initials);

/// The abstraction as a plain PA: one transition per (state, action).
PA to_pa(const FinitePA& fpa);

}  // namespace dbisim
