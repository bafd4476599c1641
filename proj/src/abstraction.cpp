#include "dbisim/abstraction.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace dbisim {

std::string symstate_name(const SA& sa, const SymState& s) {
  std::string name = sa.locations()[s.location] + "@{";
  bool first = true;
  for (const auto& c : sa.clock_names(s.active)) {
    if (!first) name += ",";
    name += c;
    first = false;
  }
  return name + "}";
}

std::vector<ClockSet> live_clocks(const SA& sa) {
  std::vector<ClockSet> live(sa.num_locations(), sa.empty_clocks());
  for (const auto& e : sa.edges()) live[e.from] |= e.trigger;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : sa.edges()) {
      const ClockSet carried = live[e.from] | (live[e.to] - sa.kappa(e.to));
      if (carried != live[e.from]) {
        live[e.from] = carried;
        changed = true;
      }
    }
  }
  return live;
}

namespace {

struct Branch {
  Rational mass;
  Rational atom;
  Expolynomial density;
  std::map<SymState, Rational> targets;  // unnormalised
};

struct Outcome {
  std::map<std::size_t, Branch> actions;
  Rational halt;
};

// Exponential race out of one location. Time is measured from the moment the
// current set of running clocks was entered.
class Race {
 public:
  Race(const SA& sa, const std::vector<ClockSet>& live, const SymState& s) : sa_(sa), live_(live), s_(s) {}

  Outcome run() {
    Outcome out;
    if (const Edge* e = enabled(s_.active)) {
      Branch& b = out.actions[e->action];
      b.mass = 1;
      b.atom = 1;
      b.targets[enter(*e, s_.active)] = 1;
      return out;
    }
    if (s_.active.none()) {
      out.halt = 1;
      return out;
    }
    return stage(s_.active);
  }

 private:
  const Edge* enabled(const ClockSet& running) const {
    const Edge* found = nullptr;
    for (auto idx : sa_.edges_from(s_.location)) {
      const Edge& e = sa_.edges()[idx];
      if (e.trigger.intersects(running)) continue;
      if (found != nullptr) {
        throw DeterminismViolation("determinism violation in " + symstate_name(sa_, s_) + ": edges '" +
                                   sa_.actions()[found->action] + "' and '" + sa_.actions()[e.action] +
                                   "' enabled together");
      }
      found = &e;
    }
    return found;
  }

  SymState enter(const Edge& e, const ClockSet& running) const {
    return {e.to, (running | sa_.kappa(e.to)) & live_[e.to]};
  }

  const Outcome& stage(const ClockSet& running) {
    if (auto it = memo_.find(running); it != memo_.end()) return it->second;
    Rational total = 0;
    for (auto c = running.find_first(); c != ClockSet::npos; c = running.find_next(c)) total += sa_.clocks()[c].rate;
    const Expolynomial wait = Expolynomial::exponential(total);

    Outcome out;
    for (auto c = running.find_first(); c != ClockSet::npos; c = running.find_next(c)) {
      const Rational w = sa_.clocks()[c].rate / total;
      ClockSet rest = running;
      rest.reset(c);
      if (const Edge* e = enabled(rest)) {
        Branch& b = out.actions[e->action];
        b.mass += w;
        b.density += w * wait;
        b.targets[enter(*e, rest)] += w;
      } else if (rest.none()) {
        out.halt += w;
      } else {
        const Outcome& sub = stage(rest);
        for (const auto& [action, sb] : sub.actions) {
          Branch& b = out.actions[action];
          b.mass += w * sb.mass;
          b.density += w * convolve(sb.density, wait);
          for (const auto& [t, p] : sb.targets) b.targets[t] += w * p;
        }
        out.halt += w * sub.halt;
      }
    }
    return memo_.emplace(running, std::move(out)).first->second;
  }

  const SA& sa_;
  const std::vector<ClockSet>& live_;
  SymState s_;
  std::map<ClockSet, Outcome> memo_;
};

Outcome race(const SA& sa, const std::vector<ClockSet>& live, const SymState& s) {
  if (s.location >= sa.num_locations()) throw ModelError("symbolic state location out of range");
  return Race(sa, live, s).run();
}

SuccessorMap to_successors(const Outcome& out) {
  SuccessorMap succ;
  for (const auto& [action, b] : out.actions) {
    SymStep& step = succ[action];
    step.probability = b.mass;
    for (const auto& [t, p] : b.targets) step.targets[t] = p / b.mass;
  }
  return succ;
}

TimingProfile to_profile(const Outcome& out) {
  TimingProfile prof;
  prof.halt = out.halt;
  for (const auto& [action, b] : out.actions) prof.actions[action] = {b.mass, b.atom, b.density};
  return prof;
}

void check_conservation(const std::string& name, const TimingProfile& prof) {
  Rational total = prof.halt;
  for (const auto& [action, t] : prof.actions) {
    if (t.atom + t.density.integral() != t.mass) throw Error("timing profile of " + name + " does not integrate to its mass");
    total += t.mass;
  }
  if (total != 1) throw Error("probability leak in " + name);
}

// Immediate states fire at time 0 with certainty; a cycle through them never lets time pass.
void reject_zeno(const FinitePA& fpa) {
  const std::size_t n = fpa.size();
  auto immediate = [&](std::size_t i) {
    for (const auto& [a, t] : fpa.states[i].timing.actions) {
      if (t.atom == 1) return true;
    }
    return false;
  };
  std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != 0 || !immediate(root)) continue;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> stack;
    auto push = [&](std::size_t v) {
      color[v] = 1;
      std::vector<std::size_t> next;
      for (const auto& [a, step] : fpa.states[v].steps) {
        for (const auto& [t, p] : step.targets) {
          if (immediate(t)) next.push_back(t);
        }
      }
      stack.emplace_back(v, std::move(next));
    };
    push(root);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next.empty()) {
        color[v] = 2;
        stack.pop_back();
        continue;
      }
      const std::size_t w = next.back();
      next.pop_back();
      if (color[w] == 1) throw ZenoLoop("zero-delay cycle through " + fpa.states[w].name);
      if (color[w] == 0) push(w);
    }
  }
}

}  // namespace

SymState initial_symstate(const SA& sa, std::size_t location) {
  if (location >= sa.num_locations()) throw ModelError("unknown location index " + std::to_string(location));
  return {location, sa.kappa(location) & live_clocks(sa)[location]};
}

SuccessorMap successor(const SA& sa, const SymState& s) { return to_successors(race(sa, live_clocks(sa), s)); }

TimingProfile timing_profile(const SA& sa, const SymState& s) { return to_profile(race(sa, live_clocks(sa), s)); }

DeterminismReport validate_deterministic(const SA& sa) {
  DeterminismReport report;
  std::vector<std::size_t> all(sa.num_locations());
  for (std::size_t q = 0; q < all.size(); ++q) all[q] = q;
  const auto live = live_clocks(sa);
  std::map<SymState, bool> seen;
  std::deque<SymState> queue;
  for (auto q : all) {
    SymState s{q, sa.kappa(q) & live[q]};
    if (seen.emplace(s, true).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    const SymState s = queue.front();
    queue.pop_front();
    try {
      for (const auto& [a, step] : to_successors(race(sa, live, s))) {
        for (const auto& [t, p] : step.targets) {
          if (seen.emplace(t, true).second) queue.push_back(t);
        }
      }
    } catch (const DeterminismViolation& e) {
      report.ok = false;
      report.violations.emplace_back(e.what());
    }
  }
  if (report.ok) {
    try {
      abstract(sa, all);
    } catch (const ZenoLoop& e) {
      report.ok = false;
      report.violations.emplace_back(e.what());
    }
  }
  return report;
}

std::size_t FinitePA::index_of(const SymState& s) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].sym == s) return i;
  }
  throw Error("symbolic state not in the abstraction");
}

Dist FinitePA::dirac(std::size_t state) const {
  return Dist::dirac(static_cast<Index>(size()), static_cast<Index>(state));
}

std::size_t FinitePA::state_bound() const {
  constexpr auto max = std::numeric_limits<std::size_t>::max();
  if (clocks >= 63) return max;
  const std::size_t pow = std::size_t{1} << clocks;
  if (locations != 0 && pow > max / locations) return max;
  return locations * pow;
}

FinitePA abstract(const SA& sa, const std::vector<std::size_t>& initials) {
  FinitePA fpa;
  fpa.actions = sa.actions();
  fpa.locations = sa.num_locations();
  fpa.clocks = sa.num_clocks();
  const auto live = live_clocks(sa);

  std::map<SymState, std::size_t> ids;
  auto intern = [&](const SymState& s) {
    auto [it, fresh] = ids.emplace(s, fpa.states.size());
    if (fresh) fpa.states.push_back({s, symstate_name(sa, s), {}, {}});
    return it->second;
  };
  for (auto q : initials) {
    if (q >= sa.num_locations()) throw ModelError("unknown location index " + std::to_string(q));
    fpa.initials.push_back(intern({q, sa.kappa(q) & live[q]}));
  }
  for (std::size_t i = 0; i < fpa.states.size(); ++i) {
    const Outcome out = race(sa, live, fpa.states[i].sym);
    std::map<std::size_t, AbstractStep> steps;
    for (const auto& [action, step] : to_successors(out)) {
      AbstractStep& st = steps[action];
      st.probability = step.probability;
      for (const auto& [t, p] : step.targets) st.targets.emplace_back(intern(t), p);
      std::sort(st.targets.begin(), st.targets.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    fpa.states[i].steps = std::move(steps);
    fpa.states[i].timing = to_profile(out);
    check_conservation(fpa.states[i].name, fpa.states[i].timing);
  }
  if (fpa.size() > fpa.state_bound()) throw Error("abstraction exceeds |Q| * 2^|C| states");
  reject_zeno(fpa);
  return fpa;
}

PA to_pa(const FinitePA& fpa) {
  std::vector<std::string> names;
  for (const auto& s : fpa.states) names.push_back(s.name);
  const auto n = static_cast<Index>(fpa.size());
  std::vector<Transition> transitions;
  for (std::size_t i = 0; i < fpa.size(); ++i) {
    for (const auto& [action, step] : fpa.states[i].steps) {
      RatVector p = RatVector::Zero(n);
      for (const auto& [t, w] : step.targets) p(static_cast<Index>(t)) = w;
      transitions.push_back({i, action, Dist(std::move(p))});
    }
  }
  return PA(std::move(names), fpa.actions, std::move(transitions));
}

}  // namespace dbisim
