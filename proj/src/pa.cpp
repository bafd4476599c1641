#include "dbisim/pa.hpp"

#include <algorithm>

namespace dbisim {

bool is_distribution(const RatVector& p) {
  Rational total = 0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) < 0) return false;
    total += p(i);
  }
  return total == 1;
}

Dist::Dist(RatVector p) : p_(std::move(p)) {
  if (!is_distribution(p_)) throw ModelError("not a probability distribution (entries must be >= 0 and sum to 1)");
}

Dist Dist::dirac(Index size, Index state) {
  if (state < 0 || state >= size) throw ModelError("dirac: state index out of range");
  RatVector p = RatVector::Zero(size);
  p(state) = 1;
  return Dist(std::move(p));
}

PA::PA(std::vector<std::string> states, std::vector<std::string> labels,
       std::vector<Transition> transitions)
    : states_(std::move(states)), labels_(std::move(labels)) {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!state_ids_.emplace(states_[i], i).second) throw ModelError("duplicate state '" + states_[i] + "'");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!label_ids_.emplace(labels_[i], i).second) throw ModelError("duplicate label '" + labels_[i] + "'");
  }
  enabled_.resize(states_.size());
  for (auto& t : transitions) {
    if (t.source >= states_.size()) throw ModelError("transition source out of range");
    if (t.label >= labels_.size()) throw ModelError("transition label out of range");
    if (t.dist.size() != num_states()) {
      throw ModelError("transition distribution from '" + states_[t.source] + "' has wrong dimension");
    }
    const bool dup = std::any_of(transitions_.begin(), transitions_.end(), [&](const Transition& u) {
      return u.source == t.source && u.label == t.label && u.dist == t.dist;
    });
    if (dup) continue;
    auto& en = enabled_[t.source];
    if (std::find(en.begin(), en.end(), t.label) == en.end()) {
      en.insert(std::lower_bound(en.begin(), en.end(), t.label), t.label);
    }
    transitions_.push_back(std::move(t));
  }
}

std::size_t PA::state_index(std::string_view name) const {
  const auto it = state_ids_.find(std::string(name));
  if (it == state_ids_.end()) throw ModelError("unknown state '" + std::string(name) + "'");
  return it->second;
}

std::size_t PA::label_index(std::string_view name) const {
  const auto it = label_ids_.find(std::string(name));
  if (it == label_ids_.end()) throw ModelError("unknown label '" + std::string(name) + "'");
  return it->second;
}

LabelSet PA::label_set(std::span<const std::string> names) const {
  LabelSet out;
  for (const auto& n : names) out.push_back(label_index(n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> PA::label_names(const LabelSet& labels) const {
  std::vector<std::string> out;
  for (auto l : labels) out.push_back(labels_.at(l));
  return out;
}

RatVector ones(Index n) { return RatVector::Constant(n, Rational(1)); }

namespace {

bool contains(const LabelSet& labels, std::size_t l) {
  return std::binary_search(labels.begin(), labels.end(), l);
}

void check_labels(const PA& pa, const LabelSet& labels) {
  for (auto l : labels) {
    if (l >= pa.num_labels()) throw ModelError("unknown label index");
  }
}

}  // namespace

std::vector<std::size_t> enabled_states(const PA& pa, const LabelSet& labels) {
  check_labels(pa, labels);
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < pa.states().size(); ++s) {
    const auto& en = pa.enabled_labels(s);
    if (std::any_of(en.begin(), en.end(), [&](std::size_t l) { return contains(labels, l); })) out.push_back(s);
  }
  return out;
}

ParamTransMatrix param_trans_matrix(const PA& pa, const LabelSet& labels) {
  check_labels(pa, labels);
  ParamTransMatrix ptm;
  ptm.labels = labels;
  ptm.choices.resize(pa.states().size());
  for (const auto& t : pa.transitions()) {
    if (!contains(labels, t.label)) continue;
    auto& list = ptm.choices[t.source];
    if (std::find(list.begin(), list.end(), t.dist.vector()) == list.end()) list.push_back(t.dist.vector());
  }
  return ptm;
}

ChoiceAssignment pure_choice(const ParamTransMatrix& ptm, std::span<const std::size_t> picks) {
  if (picks.size() != ptm.choices.size()) throw ModelError("pure_choice: one pick per state expected");
  ChoiceAssignment w;
  w.weights.resize(ptm.choices.size());
  for (std::size_t i = 0; i < ptm.choices.size(); ++i) {
    const auto n = ptm.choices[i].size();
    if (n == 0) continue;
    if (picks[i] >= n) throw ModelError("pure_choice: pick out of range");
    w.weights[i] = RatVector::Zero(static_cast<Index>(n));
    w.weights[i](static_cast<Index>(picks[i])) = 1;
  }
  return w;
}

ChoiceAssignment uniform_choice(const ParamTransMatrix& ptm) {
  ChoiceAssignment w;
  w.weights.resize(ptm.choices.size());
  for (std::size_t i = 0; i < ptm.choices.size(); ++i) {
    const auto n = static_cast<Index>(ptm.choices[i].size());
    if (n > 0) w.weights[i] = RatVector::Constant(n, Rational(1, n));
  }
  return w;
}

namespace {

void check_assignment(const ParamTransMatrix& ptm, const ChoiceAssignment& choice) {
  if (choice.weights.size() != ptm.choices.size()) throw ModelError("choice assignment: wrong number of states");
  for (std::size_t i = 0; i < ptm.choices.size(); ++i) {
    const auto& w = choice.weights[i];
    if (ptm.choices[i].empty()) continue;
    if (w.size() != static_cast<Index>(ptm.choices[i].size()) || !is_distribution(w)) {
      throw ModelError("choice assignment: malformed weight vector for state " + std::to_string(i));
    }
  }
}

}  // namespace

RatMatrix instantiate(const ParamTransMatrix& ptm, const ChoiceAssignment& choice) {
  check_assignment(ptm, choice);
  const Index n = ptm.num_states();
  RatMatrix p = RatMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& list = ptm.choices[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < list.size(); ++j) {
      const Rational& w = choice.weights[static_cast<std::size_t>(i)](static_cast<Index>(j));
      if (w != 0) p.row(i) += w * list[j].transpose();
    }
  }
  return p;
}

Dist lift_step(const PA& pa, const Dist& mu, const LabelSet& labels, const ChoiceAssignment& choice) {
  if (mu.size() != pa.num_states()) throw DimensionError("lift_step: distribution dimension mismatch");
  const ParamTransMatrix ptm = param_trans_matrix(pa, labels);
  // Only states in supp(mu) need weights; fill the rest so the assignment
  // check can run on the whole matrix.
  ChoiceAssignment full = choice;
  full.weights.resize(ptm.choices.size());
  Rational mass = 0;
  for (std::size_t i = 0; i < ptm.choices.size(); ++i) {
    if (!ptm.enabled(i)) continue;
    const Rational& m = mu[static_cast<Index>(i)];
    mass += m;
    if (m == 0 && full.weights[i].size() == 0) {
      full.weights[i] = RatVector::Zero(static_cast<Index>(ptm.choices[i].size()));
      full.weights[i](0) = 1;
    }
  }
  if (mass == 0) throw Error("no A-transition from the given distribution");
  const RatMatrix p = instantiate(ptm, full);
  RatVector next = p.transpose() * mu.vector();
  next /= mass;
  return Dist(std::move(next));
}

bool is_action_deterministic(const PA& pa) {
  std::vector<std::vector<int>> count(pa.states().size(), std::vector<int>(pa.num_labels(), 0));
  for (const auto& t : pa.transitions()) {
    if (++count[t.source][t.label] > 1) return false;
  }
  return true;
}

bool has_single_transition_per_state(const PA& pa) {
  std::vector<int> count(pa.states().size(), 0);
  for (const auto& t : pa.transitions()) {
    if (++count[t.source] > 1) return false;
  }
  return true;
}

RatMatrix trans_matrix_det(const PA& pa, std::size_t label) {
  if (label >= pa.num_labels()) throw ModelError("unknown label index");
  const Index n = pa.num_states();
  RatMatrix p = RatMatrix::Zero(n, n);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const auto& t : pa.transitions()) {
    if (t.label != label) continue;
    if (seen[t.source]) {
      throw ModelError("state '" + pa.states()[t.source] + "' has several '" + pa.labels()[label] +
                       "' transitions");
    }
    seen[t.source] = true;
    p.row(static_cast<Index>(t.source)) = t.dist.vector().transpose();
  }
  return p;
}

}  // namespace dbisim
