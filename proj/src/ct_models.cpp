#include "dbisim/ct_models.hpp"

#include <algorithm>
#include <set>

namespace dbisim {

namespace {

template <typename Map>
std::size_t lookup(const Map& ids, std::string_view name, const char* what) {
  const auto it = ids.find(std::string(name));
  if (it == ids.end()) throw ModelError(std::string("unknown ") + what + " '" + std::string(name) + "'");
  return it->second;
}

template <typename Map>
void index_names(Map& ids, const std::vector<std::string>& names, const char* what) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!ids.emplace(names[i], i).second) throw ModelError(std::string("duplicate ") + what + " '" + names[i] + "'");
  }
}

}  // namespace

CTMC::CTMC(std::vector<std::string> states, RatMatrix rates, std::size_t initial)
    : states_(std::move(states)), rates_(std::move(rates)), initial_(initial) {
  const auto n = static_cast<Index>(states_.size());
  if (rates_.rows() != n || rates_.cols() != n) throw ModelError("CTMC rate matrix must be square over the states");
  if (initial_ >= states_.size()) throw ModelError("CTMC initial state out of range");
  for (Index i = 0; i < n; ++i) {
    if (rates_(i, i) != 0) throw ModelError("CTMC rate matrix must have a zero diagonal");
    for (Index j = 0; j < n; ++j) {
      if (rates_(i, j) < 0) throw ModelError("CTMC rates must be nonnegative");
    }
  }
  std::set<std::string> seen(states_.begin(), states_.end());
  if (seen.size() != states_.size()) throw ModelError("duplicate CTMC state");
}

std::size_t CTMC::state_index(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] == name) return i;
  }
  throw ModelError("unknown state '" + std::string(name) + "'");
}

Rational CTMC::exit_rate(std::size_t s) const { return rates_.row(static_cast<Index>(s)).sum(); }

SA::SA(std::vector<std::string> locations, std::vector<Clock> clocks, std::vector<std::string> actions,
       std::vector<Edge> edges, std::vector<ClockSet> kappa, std::size_t initial)
    : locations_(std::move(locations)),
      clocks_(std::move(clocks)),
      actions_(std::move(actions)),
      kappa_(std::move(kappa)),
      initial_(initial) {
  index_names(location_ids_, locations_, "location");
  index_names(action_ids_, actions_, "action");
  for (std::size_t c = 0; c < clocks_.size(); ++c) {
    if (!clock_ids_.emplace(clocks_[c].name, c).second) throw ModelError("duplicate clock '" + clocks_[c].name + "'");
    if (clocks_[c].rate <= 0) throw ModelError("clock '" + clocks_[c].name + "' needs a positive rate");
  }
  if (!locations_.empty() && initial_ >= locations_.size()) throw ModelError("initial location out of range");
  if (kappa_.size() != locations_.size()) throw ModelError("clock setting must cover every location");
  for (const auto& k : kappa_) {
    if (k.size() != clocks_.size()) throw ModelError("clock set has the wrong width");
  }
  out_.resize(locations_.size());
  for (auto& e : edges) {
    if (e.from >= locations_.size() || e.to >= locations_.size()) throw ModelError("edge location out of range");
    if (e.action >= actions_.size()) throw ModelError("edge action out of range");
    if (e.trigger.size() != clocks_.size()) throw ModelError("edge trigger has the wrong width");
    const bool dup = std::any_of(edges_.begin(), edges_.end(), [&](const Edge& f) {
      return f.from == e.from && f.action == e.action && f.trigger == e.trigger && f.to == e.to;
    });
    if (dup) continue;
    out_[e.from].push_back(edges_.size());
    edges_.push_back(std::move(e));
  }
}

std::size_t SA::location_index(std::string_view name) const { return lookup(location_ids_, name, "location"); }
std::size_t SA::clock_index(std::string_view name) const { return lookup(clock_ids_, name, "clock"); }
std::size_t SA::action_index(std::string_view name) const { return lookup(action_ids_, name, "action"); }

ClockSet SA::clock_set(const std::vector<std::string>& names) const {
  ClockSet set = empty_clocks();
  for (const auto& n : names) set.set(clock_index(n));
  return set;
}

std::vector<std::string> SA::clock_names(const ClockSet& set) const {
  std::vector<std::string> out;
  for (auto c = set.find_first(); c != ClockSet::npos; c = set.find_next(c)) out.push_back(clocks_[c].name);
  return out;
}

CTMC ctmc_parallel(const CTMC& c1, const CTMC& c2) {
  const auto n1 = static_cast<Index>(c1.size());
  const auto n2 = static_cast<Index>(c2.size());
  std::vector<std::string> names;
  for (Index i = 0; i < n1; ++i) {
    for (Index j = 0; j < n2; ++j) {
      names.push_back("(" + c1.states()[static_cast<std::size_t>(i)] + "," + c2.states()[static_cast<std::size_t>(j)] + ")");
    }
  }
  RatMatrix q = RatMatrix::Zero(n1 * n2, n1 * n2);
  auto id = [n2](Index i, Index j) { return i * n2 + j; };
  for (Index i = 0; i < n1; ++i) {
    for (Index j = 0; j < n2; ++j) {
      for (Index k = 0; k < n1; ++k) {
        if (k != i) q(id(i, j), id(k, j)) = c1.rates()(i, k);
      }
      for (Index k = 0; k < n2; ++k) {
        if (k != j) q(id(i, j), id(i, k)) = c2.rates()(j, k);
      }
    }
  }
  const auto init = static_cast<std::size_t>(id(static_cast<Index>(c1.initial()), static_cast<Index>(c2.initial())));
  return CTMC(std::move(names), std::move(q), init);
}

SA ctmc_to_sa(const CTMC& c) {
  const std::size_t n = c.size();
  std::vector<Clock> clocks;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      const Rational& r = c.rates()(static_cast<Index>(s), static_cast<Index>(t));
      if (r > 0) {
        clocks.push_back({c.states()[s] + "->" + c.states()[t], r});
        pairs.emplace_back(s, t);
      }
    }
  }
  std::vector<ClockSet> kappa(n, ClockSet(clocks.size()));
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [s, t] = pairs[k];
    kappa[s].set(k);
    ClockSet trig(clocks.size());
    trig.set(k);
    edges.push_back({s, 0, std::move(trig), t});
  }
  return SA(c.states(), std::move(clocks), {"L"}, std::move(edges), std::move(kappa), c.initial());
}

namespace {

bool clock_names_collide(const SA& a, const SA& b) {
  for (const auto& c : a.clocks()) {
    for (const auto& d : b.clocks()) {
      if (c.name == d.name) return true;
    }
  }
  return false;
}

std::vector<std::string> merged_actions(const SA& a, const SA& b, std::vector<std::size_t>& map_a,
                                        std::vector<std::size_t>& map_b) {
  std::vector<std::string> actions = a.actions();
  map_a.resize(a.actions().size());
  for (std::size_t i = 0; i < map_a.size(); ++i) map_a[i] = i;
  for (const auto& name : b.actions()) {
    auto it = std::find(actions.begin(), actions.end(), name);
    if (it == actions.end()) {
      map_b.push_back(actions.size());
      actions.push_back(name);
    } else {
      map_b.push_back(static_cast<std::size_t>(it - actions.begin()));
    }
  }
  return actions;
}

// Embeds a clock set of an operand into the combined clock index space.
ClockSet shifted(const ClockSet& set, std::size_t offset, std::size_t width) {
  ClockSet out(width);
  for (auto c = set.find_first(); c != ClockSet::npos; c = set.find_next(c)) out.set(c + offset);
  return out;
}

std::vector<Clock> combined_clocks(const SA& a, const SA& b, const std::string& pa, const std::string& pb) {
  std::vector<Clock> clocks;
  for (const auto& c : a.clocks()) clocks.push_back({pa + c.name, c.rate});
  for (const auto& c : b.clocks()) clocks.push_back({pb + c.name, c.rate});
  return clocks;
}

}  // namespace

SA sa_parallel(const SA& s1, const SA& s2) {
  const bool rename = clock_names_collide(s1, s2);
  std::vector<Clock> clocks = combined_clocks(s1, s2, rename ? "1." : "", rename ? "2." : "");
  const std::size_t width = clocks.size();
  const std::size_t off2 = s1.num_clocks();

  std::vector<std::size_t> act1, act2;
  std::vector<std::string> actions = merged_actions(s1, s2, act1, act2);

  const std::size_t n1 = s1.num_locations();
  const std::size_t n2 = s2.num_locations();
  auto id = [n2](std::size_t q1, std::size_t q2, std::size_t b) { return (q1 * n2 + q2) * 3 + b; };

  std::vector<std::string> names(n1 * n2 * 3);
  std::vector<ClockSet> kappa(n1 * n2 * 3, ClockSet(width));
  for (std::size_t q1 = 0; q1 < n1; ++q1) {
    for (std::size_t q2 = 0; q2 < n2; ++q2) {
      const ClockSet k1 = shifted(s1.kappa(q1), 0, width);
      const ClockSet k2 = shifted(s2.kappa(q2), off2, width);
      for (std::size_t b = 0; b < 3; ++b) {
        names[id(q1, q2, b)] = "(" + s1.locations()[q1] + "," + s2.locations()[q2] + "," + std::to_string(b) + ")";
        kappa[id(q1, q2, b)] = b == 0 ? (k1 | k2) : (b == 1 ? k1 : k2);
      }
    }
  }

  std::vector<Edge> edges;
  for (std::size_t q1 = 0; q1 < n1; ++q1) {
    for (std::size_t q2 = 0; q2 < n2; ++q2) {
      for (std::size_t b = 0; b < 3; ++b) {
        for (auto e : s1.edges_from(q1)) {
          const Edge& ed = s1.edges()[e];
          edges.push_back({id(q1, q2, b), act1[ed.action], shifted(ed.trigger, 0, width), id(ed.to, q2, 1)});
        }
        for (auto e : s2.edges_from(q2)) {
          const Edge& ed = s2.edges()[e];
          edges.push_back({id(q1, q2, b), act2[ed.action], shifted(ed.trigger, off2, width), id(q1, ed.to, 2)});
        }
      }
    }
  }
  return SA(std::move(names), std::move(clocks), std::move(actions), std::move(edges), std::move(kappa),
            id(s1.initial(), s2.initial(), 0));
}

SAUnion disjoint_union(const SA& a, const SA& b) {
  std::vector<Clock> clocks = combined_clocks(a, b, "l.", "r.");
  const std::size_t width = clocks.size();
  const std::size_t off = a.num_clocks();
  std::vector<std::size_t> act_a, act_b;
  std::vector<std::string> actions = merged_actions(a, b, act_a, act_b);

  SAUnion out;
  std::vector<std::string> names;
  std::vector<ClockSet> kappa;
  for (std::size_t q = 0; q < a.num_locations(); ++q) {
    out.left.push_back(names.size());
    names.push_back("l." + a.locations()[q]);
    kappa.push_back(shifted(a.kappa(q), 0, width));
  }
  for (std::size_t q = 0; q < b.num_locations(); ++q) {
    out.right.push_back(names.size());
    names.push_back("r." + b.locations()[q]);
    kappa.push_back(shifted(b.kappa(q), off, width));
  }
  std::vector<Edge> edges;
  for (const auto& e : a.edges()) {
    edges.push_back({out.left[e.from], act_a[e.action], shifted(e.trigger, 0, width), out.left[e.to]});
  }
  for (const auto& e : b.edges()) {
    edges.push_back({out.right[e.from], act_b[e.action], shifted(e.trigger, off, width), out.right[e.to]});
  }
  const std::size_t init = a.num_locations() > 0 ? out.left[a.initial()] : 0;
  out.sa = SA(std::move(names), std::move(clocks), std::move(actions), std::move(edges), std::move(kappa), init);
  return out;
}

}  // namespace dbisim
