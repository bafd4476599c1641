#include "dbisim/pomdp.hpp"

#include <set>

namespace dbisim {

POMDP::POMDP(std::vector<std::string> states, std::vector<std::string> actions,
             std::vector<std::vector<std::size_t>> observations, std::vector<POMDPTransition> delta,
             std::vector<std::string> observation_names)
    : states_(std::move(states)),
      actions_(std::move(actions)),
      observations_(std::move(observations)),
      observation_names_(std::move(observation_names)),
      delta_(std::move(delta)) {
  constexpr auto unassigned = static_cast<std::size_t>(-1);
  block_.assign(states_.size(), unassigned);
  for (std::size_t o = 0; o < observations_.size(); ++o) {
    if (observations_[o].empty()) throw ModelError("observation " + std::to_string(o) + " is empty");
    for (auto s : observations_[o]) {
      if (s >= states_.size()) throw ModelError("observation refers to an unknown state");
      if (block_[s] != unassigned) throw ModelError("state '" + states_[s] + "' lies in two observations");
      block_[s] = o;
    }
  }
  for (std::size_t s = 0; s < states_.size(); ++s) {
    if (block_[s] == unassigned) throw ModelError("state '" + states_[s] + "' is in no observation");
  }
  if (observation_names_.empty()) {
    for (std::size_t o = 0; o < observations_.size(); ++o) observation_names_.push_back("o" + std::to_string(o));
  }
  if (observation_names_.size() != observations_.size()) throw ModelError("observation name count mismatch");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& t : delta_) {
    if (t.state >= states_.size() || t.action >= actions_.size()) throw ModelError("delta refers to an unknown state or action");
    if (t.dist.size() != static_cast<Index>(states_.size())) throw ModelError("delta distribution has the wrong size");
    if (!seen.emplace(t.state, t.action).second) {
      throw ModelError("delta defined twice for ('" + states_[t.state] + "', '" + actions_[t.action] + "')");
    }
  }
}

std::size_t POMDP::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] == name) return i;
  }
  throw ModelError("unknown state '" + std::string(name) + "'");
}

PA pomdp_to_pa(const POMDP& m) {
  std::vector<Transition> transitions;
  for (const auto& t : m.delta()) transitions.push_back({t.state, m.observation_of(t.state), t.dist});
  return PA(m.states(), m.observation_names(), std::move(transitions));
}

bool belief_equiv(const POMDP& m, const Dist& b1, const Dist& b2, const EngineOptions& options) {
  const BisimMatrix e = minimal_bisim_matrix(pomdp_to_pa(m), Variant::Full, options);
  return equivalent(e, b1, b2).equivalent;
}

}  // namespace dbisim
