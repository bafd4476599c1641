#pragma once

// POMDPs as observation-labelled probabilistic automata: a state in block o
// gets label o, with one transition per distinct action successor.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dbisim/bisim.hpp"
#include "dbisim/pa.hpp"

namespace dbisim {

struct POMDPTransition {
  std::size_t state = 0;
  std::size_t action = 0;
  Dist dist;
};

class POMDP {
 public:
  POMDP() = default;
  /// Observation blocks must partition the states. Unnamed observations are
  /// called o0, o1, ... in declaration order.
  POMDP(std::vector<std::string> states, std::vector<std::string> actions,
        std::vector<std::vector<std::size_t>> observations, std::vector<POMDPTransition> delta,
        std::vector<std::string> observation_names = {});

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<std::vector<std::size_t>>& observations() const { return observations_; }
  const std::vector<std::string>& observation_names() const { return observation_names_; }
  const std::vector<POMDPTransition>& delta() const { return delta_; }
  std::size_t observation_of(std::size_t state) const { return block_[state]; }
  std::size_t state_index(std::string_view name) const;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> actions_;
  std::vector<std::vector<std::size_t>> observations_;
  std::vector<std::string> observation_names_;
  std::vector<POMDPTransition> delta_;
  std::vector<std::size_t> block_;
};

PA pomdp_to_pa(const POMDP& m);

bool belief_equiv(const POMDP& m, const Dist& b1, const Dist& b2, const EngineOptions& options = {});

}  // namespace dbisim
