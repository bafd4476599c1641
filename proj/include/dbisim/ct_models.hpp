#pragma once

// Continuous-time Markov chains, stochastic automata over exponential clocks,
// their interleaving compositions and the CTMC -> SA embedding.

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dbisim/rational.hpp"

namespace dbisim {

using ClockSet = boost::dynamic_bitset<>;

class CTMC {
 public:
  CTMC() = default;
  /// `rates` is square, nonnegative, with a zero diagonal.
  CTMC(std::vector<std::string> states, RatMatrix rates, std::size_t initial);

  const std::vector<std::string>& states() const { return states_; }
  const RatMatrix& rates() const { return rates_; }
  std::size_t initial() const { return initial_; }
  std::size_t size() const { return states_.size(); }
  std::size_t state_index(std::string_view name) const;

  Rational exit_rate(std::size_t s) const;

 private:
  std::vector<std::string> states_;
  RatMatrix rates_;
  std::size_t initial_ = 0;
};

/// Clock distributions are exponential; the rate is all that is stored.
struct Clock {
  std::string name;
  Rational rate;
};

struct Edge {
  std::size_t from = 0;
  std::size_t action = 0;
  ClockSet trigger;
  std::size_t to = 0;
};

class SA {
 public:
  SA() = default;
  SA(std::vector<std::string> locations, std::vector<Clock> clocks, std::vector<std::string> actions,
     std::vector<Edge> edges, std::vector<ClockSet> kappa, std::size_t initial);

  const std::vector<std::string>& locations() const { return locations_; }
  const std::vector<Clock>& clocks() const { return clocks_; }
  const std::vector<std::string>& actions() const { return actions_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<ClockSet>& kappa() const { return kappa_; }
  const ClockSet& kappa(std::size_t location) const { return kappa_[location]; }
  std::size_t initial() const { return initial_; }

  std::size_t num_locations() const { return locations_.size(); }
  std::size_t num_clocks() const { return clocks_.size(); }

  /// Indices into edges(), in declaration order.
  const std::vector<std::size_t>& edges_from(std::size_t location) const { return out_[location]; }

  std::size_t location_index(std::string_view name) const;
  std::size_t clock_index(std::string_view name) const;
  std::size_t action_index(std::string_view name) const;

  ClockSet empty_clocks() const { return ClockSet(clocks_.size()); }
  ClockSet clock_set(const std::vector<std::string>& names) const;
  std::vector<std::string> clock_names(const ClockSet& set) const;

 private:
  std::vector<std::string> locations_;
  std::vector<Clock> clocks_;
  std::vector<std::string> actions_;
  std::vector<Edge> edges_;
  std::vector<ClockSet> kappa_;
  std::size_t initial_ = 0;
  std::vector<std::vector<std::size_t>> out_;
  std::unordered_map<std::string, std::size_t> location_ids_;
  std::unordered_map<std::string, std::size_t> clock_ids_;
  std::unordered_map<std::string, std::size_t> action_ids_;
};

/// Full interleaving: the rate matrix is the Kronecker sum of the two.
CTMC ctmc_parallel(const CTMC& c1, const CTMC& c2);

/// One clock per positive rate, named "s->t", with edge (s, L, {s->t}, t);
/// kappa(s) holds every clock leaving s.
SA ctmc_to_sa(const CTMC& c);

/// Interleaving composition over locations (q1, q2, b). The tag b says which
/// side moved last; only that side's clocks are resampled on entry, both at b = 0.
SA sa_parallel(const SA& s1, const SA& s2);

struct SAUnion {
  SA sa;
  std::vector<std::size_t> left;   // location map of the first operand
  std::vector<std::size_t> right;  // location map of the second operand
};

/// Both automata side by side: locations and clocks prefixed "l." / "r.",
/// actions shared by name.
SAUnion disjoint_union(const SA& a, const SA& b);

}  // namespace dbisim
