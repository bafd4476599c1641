#pragma once

// Helpers shared by the unit and acceptance tests: rational literals and
// seeded random model generators.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "dbisim/ct_models.hpp"
#include "dbisim/io.hpp"
#include "dbisim/pa.hpp"

namespace dbisim::test {

inline Rational q(const char* text) { return parse_rational(text); }

inline RatVector vec(std::initializer_list<const char*> entries) {
  RatVector v(static_cast<Index>(entries.size()));
  Index i = 0;
  for (const char* e : entries) v(i++) = parse_rational(e);
  return v;
}

inline RatMatrix columns(std::initializer_list<RatVector> cols) {
  RatMatrix m(cols.begin()->size(), static_cast<Index>(cols.size()));
  Index k = 0;
  for (const auto& c : cols) m.col(k++) = c;
  return m;
}

inline std::string model_path(const std::string& name) { return std::string(DBISIM_MODELS_DIR) + "/" + name; }

inline PA load_pa(const std::string& name) { return read_pa(load_json(model_path(name))); }
inline SA load_sa(const std::string& name) { return read_sa(load_json(model_path(name))); }
inline CTMC load_ctmc(const std::string& name) { return read_ctmc(load_json(model_path(name))); }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  /// Small signed rational with denominator up to `den`.
  Rational rational(int span = 3, int den = 4) {
    const auto n = static_cast<long>(uniform(0, static_cast<std::size_t>(2 * span * den))) - span * den;
    return Rational(n) / Rational(static_cast<long>(uniform(1, static_cast<std::size_t>(den))));
  }

  RatVector rational_vector(Index n, int span = 3, int den = 4) {
    RatVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = rational(span, den);
    return v;
  }

  /// Random distribution over `n` states with support of at most `support`.
  RatVector distribution(Index n, std::size_t support = 3) {
    const std::size_t k = uniform(1, std::min<std::size_t>(support, static_cast<std::size_t>(n)));
    std::vector<std::size_t> states(static_cast<std::size_t>(n));
    std::iota(states.begin(), states.end(), std::size_t{0});
    std::shuffle(states.begin(), states.end(), rng_);
    std::vector<long> weights(k);
    for (auto& w : weights) w = static_cast<long>(uniform(1, 4));
    const long total = std::accumulate(weights.begin(), weights.end(), 0L);
    RatVector p = RatVector::Zero(n);
    for (std::size_t i = 0; i < k; ++i) p(static_cast<Index>(states[i])) = Rational(weights[i]) / Rational(total);
    return p;
  }

  struct PAShape {
    std::size_t min_states = 2;
    std::size_t max_states = 5;
    std::size_t labels = 2;
    std::size_t max_per_label = 2;  // transitions per (state, label)
    bool single_per_state = false;  // at most one transition per state overall
  };

  PA pa(const PAShape& shape) {
    const std::size_t n = uniform(shape.min_states, shape.max_states);
    std::vector<std::string> states, labels;
    for (std::size_t i = 0; i < n; ++i) states.push_back("s" + std::to_string(i));
    for (std::size_t l = 0; l < shape.labels; ++l) labels.push_back(std::string(1, static_cast<char>('a' + l)));
    std::vector<Transition> ts;
    for (std::size_t s = 0; s < n; ++s) {
      if (shape.single_per_state) {
        if (coin(0.8)) ts.push_back({s, uniform(0, shape.labels - 1), Dist(distribution(static_cast<Index>(n)))});
        continue;
      }
      for (std::size_t l = 0; l < shape.labels; ++l) {
        const std::size_t k = uniform(0, shape.max_per_label);
        for (std::size_t c = 0; c < k; ++c) ts.push_back({s, l, Dist(distribution(static_cast<Index>(n)))});
      }
    }
    return PA(std::move(states), std::move(labels), std::move(ts));
  }

  /// Chain with <= max_states states and integer rates in {1..max_rate}.
  CTMC ctmc(std::size_t max_states = 3, long max_rate = 4) {
    const std::size_t n = uniform(1, max_states);
    std::vector<std::string> states;
    for (std::size_t i = 0; i < n; ++i) states.push_back(std::to_string(i));
    RatMatrix r = RatMatrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && coin(0.6)) r(static_cast<Index>(i), static_cast<Index>(j)) = static_cast<long>(uniform(1, static_cast<std::size_t>(max_rate)));
      }
    }
    return CTMC(std::move(states), std::move(r), 0);
  }

  /// Random exponential SA; may be nondeterministic or Zeno, callers filter.
  SA sa(std::size_t max_locations = 3, std::size_t max_clocks = 3, std::size_t actions = 2) {
    const std::size_t nq = uniform(1, max_locations);
    const std::size_t nc = uniform(1, max_clocks);
    std::vector<std::string> locs, acts;
    for (std::size_t i = 0; i < nq; ++i) locs.push_back("q" + std::to_string(i));
    for (std::size_t a = 0; a < actions; ++a) acts.push_back(std::string(1, static_cast<char>('a' + a)));
    std::vector<Clock> clocks;
    static const char* rates[] = {"1/2", "1", "2", "3"};
    for (std::size_t c = 0; c < nc; ++c) clocks.push_back({"c" + std::to_string(c), parse_rational(rates[uniform(0, 3)])});
    std::vector<ClockSet> kappa(nq, ClockSet(nc));
    std::vector<Edge> edges;
    for (std::size_t q = 0; q < nq; ++q) {
      for (std::size_t c = 0; c < nc; ++c) {
        if (coin(0.6)) kappa[q].set(c);
      }
      const std::size_t k = uniform(0, 2);
      for (std::size_t e = 0; e < k; ++e) {
        ClockSet trig(nc);
        trig.set(uniform(0, nc - 1));
        if (coin(0.3)) trig.set(uniform(0, nc - 1));
        edges.push_back({q, uniform(0, actions - 1), std::move(trig), uniform(0, nq - 1)});
      }
    }
    return SA(std::move(locs), std::move(clocks), std::move(acts), std::move(edges), std::move(kappa), 0);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace dbisim::test
