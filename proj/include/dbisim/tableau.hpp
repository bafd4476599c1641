#pragma once

// Tableau decision procedure for bisimilarity of distributions over a
// finite abstraction. A node mu ~ nu is read as the vector mu - nu; nodes in
// the span of the retained ones close without expansion.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dbisim/abstraction.hpp"
#include "dbisim/linalg.hpp"

namespace dbisim {

enum class Rule {
  Step,     // retained and expanded
  Lin,      // difference in the span of retained nodes
  Repeat,   // zero difference or identical to an ancestor
  Failure,  // timing mismatch
  Open,     // never processed because the search stopped at a failure
};

std::string to_string(Rule r);

struct TableauNode {
  RatVector left;
  RatVector right;
  std::optional<std::size_t> parent;
  std::string action;  // label of the edge from the parent; empty at the root
  std::size_t depth = 1;
  Rule rule = Rule::Step;
  std::vector<std::size_t> basis;  // Lin: retained node ids the coefficients refer to
  std::vector<Rational> coefficients;
  std::optional<std::size_t> repeat_of;
  std::string failed_action;  // Failure: first mismatching action by name

  RatVector difference() const { return left - right; }
};

struct Verdict {
  bool bisimilar = true;
  std::vector<TableauNode> nodes;  // creation order; nodes[0] is the root
  std::optional<std::size_t> failure;

  /// Root-to-failure node ids.
  std::vector<std::size_t> failure_path() const;
  /// "BISIMILAR" or "NOT-BISIMILAR: <action> timing mismatch at depth k".
  std::string summary() const;
};

struct ActionMismatch {
  std::string action;
  bool mass = false;    // total mass differs
  bool timing = false;  // mixed (atom, density) differs
};

struct TimingReport {
  bool compatible = true;
  std::vector<ActionMismatch> mismatches;  // ordered by action name
};

TimingReport compatible_timing(const FinitePA& fpa, const Dist& mu, const Dist& nu);
TimingReport compatible_timing(const FinitePA& fpa, const RatVector& mu, const RatVector& nu);

struct StepChild {
  std::string action;
  RatVector left;
  RatVector right;
};

/// One child per action of positive mass, ordered by action name.
std::vector<StepChild> step_children(const FinitePA& fpa, const RatVector& mu, const RatVector& nu);

/// Coefficients of the node's difference over `retained`, if dependent.
std::optional<RatVector> lin_closes(const RatVector& difference, const std::vector<RatVector>& retained);

Verdict decide(const FinitePA& fpa, const Dist& mu, const Dist& nu);

Verdict check_locations(const SA& sa, std::size_t q1, std::size_t q2);

struct CommuteResult {
  SA composed;  // SA(c1) || SA(c2)
  SA embedded;  // SA(c1 || c2)
  FinitePA abstraction;
  Verdict verdict;
};

CommuteResult check_commute(const CTMC& c1, const CTMC& c2);

/// Replays every node: Step children re-derived, Lin coefficients re-verified,
/// failure re-detected. Empty string when consistent.
std::string audit_tableau(const FinitePA& fpa, const Verdict& v);

}  // namespace dbisim
