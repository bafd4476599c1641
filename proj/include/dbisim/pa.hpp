#pragma once

// Finite probabilistic automata, distributions over their states and the
// (parametric) transition matrices used by the bisimulation algorithms.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dbisim/rational.hpp"

namespace dbisim {

/// A probability distribution over states 0..n-1: nonnegative entries that sum
/// to exactly one.
class Dist {
 public:
  Dist() = default;
  explicit Dist(RatVector p);

  static Dist dirac(Index size, Index state);

  Index size() const { return p_.size(); }
  const RatVector& vector() const { return p_; }
  const Rational& operator[](Index i) const { return p_(i); }

  friend bool operator==(const Dist& a, const Dist& b) { return a.p_ == b.p_; }

 private:
  RatVector p_;
};

bool is_distribution(const RatVector& p);

/// Sorted, duplicate-free label indices.
using LabelSet = std::vector<std::size_t>;

struct Transition {
  std::size_t source = 0;
  std::size_t label = 0;
  Dist dist;
};

class PA {
 public:
  PA() = default;
  /// Validates references and distribution sizes; drops duplicate
  /// (source, label, dist) triples.
  PA(std::vector<std::string> states, std::vector<std::string> labels,
     std::vector<Transition> transitions);

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  Index num_states() const { return static_cast<Index>(states_.size()); }
  std::size_t num_labels() const { return labels_.size(); }

  std::size_t state_index(std::string_view name) const;
  std::size_t label_index(std::string_view name) const;
  LabelSet label_set(std::span<const std::string> names) const;
  std::vector<std::string> label_names(const LabelSet& labels) const;

  /// Labels with at least one transition out of `state`, sorted.
  const LabelSet& enabled_labels(std::size_t state) const { return enabled_[state]; }

 private:
  std::vector<std::string> states_;
  std::vector<std::string> labels_;
  std::vector<Transition> transitions_;
  std::unordered_map<std::string, std::size_t> state_ids_;
  std::unordered_map<std::string, std::size_t> label_ids_;
  std::vector<LabelSet> enabled_;
};

RatVector ones(Index n);

/// S_A: states with some outgoing transition labelled in `labels`.
std::vector<std::size_t> enabled_states(const PA& pa, const LabelSet& labels);

/// Pure successor distributions per state for a label set; states outside
/// S_A have an empty list. Identical distributions reached under different
/// labels of the set count once.
struct ParamTransMatrix {
  LabelSet labels;
  std::vector<std::vector<RatVector>> choices;

  Index num_states() const { return static_cast<Index>(choices.size()); }
  bool enabled(std::size_t state) const { return !choices[state].empty(); }
};

ParamTransMatrix param_trans_matrix(const PA& pa, const LabelSet& labels);

/// Scheduler weights over the choices of every enabled state. States outside
/// S_A carry an empty weight vector.
struct ChoiceAssignment {
  std::vector<RatVector> weights;
};

/// Dirac weights on `picks[i]` for each enabled state (entries for disabled
/// states are ignored).
ChoiceAssignment pure_choice(const ParamTransMatrix& ptm, std::span<const std::size_t> picks);

/// Uniform weights over all choices of each enabled state.
ChoiceAssignment uniform_choice(const ParamTransMatrix& ptm);

/// The concrete |S|x|S| matrix whose ith row is the weighted mix of state i's
/// choices; rows of disabled states are zero.
RatMatrix instantiate(const ParamTransMatrix& ptm, const ChoiceAssignment& choice);

/// mu -A-> nu: restrict mu to S_A, push every state through its chosen
/// successor mix and renormalise by mu(S_A).
Dist lift_step(const PA& pa, const Dist& mu, const LabelSet& labels, const ChoiceAssignment& choice);

/// At most one transition per (state, label).
bool is_action_deterministic(const PA& pa);

/// At most one outgoing transition per state, over all labels.
bool has_single_transition_per_state(const PA& pa);

/// Row i is the unique a-successor of state i, or zero.
RatMatrix trans_matrix_det(const PA& pa, std::size_t label);

}  // namespace dbisim
