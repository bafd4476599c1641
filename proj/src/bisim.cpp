#include "dbisim/bisim.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "dbisim/polytope.hpp"

namespace dbisim {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::Singleton: return "singleton";
    case Variant::ExactLabel: return "exact-label";
  }
  return "?";
}

Variant parse_variant(std::string_view text) {
  if (text == "full") return Variant::Full;
  if (text == "singleton") return Variant::Singleton;
  if (text == "exact-label") return Variant::ExactLabel;
  throw ModelError("unknown variant '" + std::string(text) + "' (expected full, singleton or exact-label)");
}

namespace {

constexpr std::size_t kMaxLabelsForFull = 20;

// Nonempty subsets of {0..n-1}, by size, then lexicographically.
std::vector<LabelSet> subsets_by_size(std::size_t n) {
  std::vector<LabelSet> out;
  for (std::size_t k = 1; k <= n; ++k) {
    LabelSet cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    for (;;) {
      out.push_back(cur);
      std::size_t i = k;
      while (i > 0 && cur[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++cur[i - 1];
      for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
  }
  return out;
}

bool size_then_lex(const LabelSet& a, const LabelSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct Candidate {
  std::size_t choice = 0;
  RatVector point;
};

struct Tuple {
  std::vector<std::size_t> picks;  // per group
  RatVector sum;
};

// Tuples (one candidate per group) whose sums are vertices of the cloud of
// all tuple sums. A vertex of a Minkowski sum splits uniquely into vertices
// of the summands, so the sum is built one group at a time and cut back to
// its hull vertices after every step.
std::vector<Tuple> vertex_tuples(const std::vector<std::vector<Candidate>>& groups, Index dim) {
  std::vector<Tuple> acc{Tuple{{}, RatVector::Zero(dim)}};
  for (const auto& g : groups) {
    std::vector<Tuple> next;
    for (const auto& t : acc) {
      for (const auto& c : g) {
        Tuple u{t.picks, RatVector(t.sum + c.point)};
        u.picks.push_back(c.choice);
        next.push_back(std::move(u));
      }
    }
    if (g.size() == 1) {
      acc = std::move(next);  // a translate has the same vertices
      continue;
    }
    std::vector<RatVector> sums;
    for (const auto& t : next) sums.push_back(t.sum);
    acc.clear();
    for (std::size_t idx : hull_vertex_indices<Rational>(sums)) acc.push_back(std::move(next[idx]));
  }
  return acc;
}

void check_product(const ParamTransMatrix& ptm, std::size_t cap, const std::vector<std::size_t>& states) {
  long double product = 1;
  for (auto i : states) product *= static_cast<long double>(ptm.choices[i].size());
  if (product > static_cast<long double>(cap)) {
    throw ChoiceExplosion("choice explosion: " + std::to_string(static_cast<double>(product)) +
                          " pure choice tuples exceed the cap of " + std::to_string(cap));
  }
}

RatMatrix product_with(const ParamTransMatrix& ptm, const std::vector<std::size_t>& picks, const RatMatrix& e) {
  return instantiate(ptm, pure_choice(ptm, picks)) * e;
}

}  // namespace

std::vector<ParamTransMatrix> apply_variant(const PA& pa, Variant variant) {
  std::vector<LabelSet> sets;
  switch (variant) {
    case Variant::Full:
      if (pa.num_labels() > kMaxLabelsForFull) {
        throw ModelError("full variant enumerates all label subsets; at most " +
                         std::to_string(kMaxLabelsForFull) + " labels supported");
      }
      sets = subsets_by_size(pa.num_labels());
      break;
    case Variant::Singleton:
      for (std::size_t l = 0; l < pa.num_labels(); ++l) sets.push_back({l});
      break;
    case Variant::ExactLabel:
      for (std::size_t s = 0; s < pa.states().size(); ++s) {
        const auto& en = pa.enabled_labels(s);
        if (!en.empty() && std::find(sets.begin(), sets.end(), en) == sets.end()) sets.push_back(en);
      }
      std::sort(sets.begin(), sets.end(), size_then_lex);
      break;
  }

  std::vector<ParamTransMatrix> schedule;
  for (const auto& a : sets) {
    ParamTransMatrix ptm = param_trans_matrix(pa, a);
    if (variant == Variant::ExactLabel) {
      for (std::size_t s = 0; s < ptm.choices.size(); ++s) {
        if (pa.enabled_labels(s) != a) ptm.choices[s].clear();
      }
    }
    const bool any = std::any_of(ptm.choices.begin(), ptm.choices.end(),
                                 [](const auto& c) { return !c.empty(); });
    if (any) schedule.push_back(std::move(ptm));
  }
  return schedule;
}

std::vector<ExtremalChoice> extremal_choices(const ParamTransMatrix& ptm, const RatMatrix& e,
                                             std::size_t max_choices) {
  if (e.cols() == 0) throw Error("extremal_choices: empty bisimulation matrix");
  if (e.rows() != ptm.num_states()) throw DimensionError("extremal_choices: matrix rows differ from state count");
  std::vector<std::size_t> states;
  for (std::size_t i = 0; i < ptm.choices.size(); ++i) {
    if (ptm.enabled(i)) states.push_back(i);
  }
  if (states.empty()) return {};
  check_product(ptm, max_choices, states);

  std::vector<std::vector<Candidate>> groups;
  for (auto i : states) {
    std::vector<Candidate> g;
    for (std::size_t j = 0; j < ptm.choices[i].size(); ++j) {
      g.push_back({j, RatVector(e.transpose() * ptm.choices[i][j])});
    }
    groups.push_back(std::move(g));
  }

  std::vector<ExtremalChoice> out;
  for (auto& t : vertex_tuples(groups, e.cols())) {
    ExtremalChoice c;
    c.labels = ptm.labels;
    c.picks.assign(ptm.choices.size(), 0);
    c.rows.assign(ptm.choices.size(), RatVector());
    for (std::size_t k = 0; k < states.size(); ++k) {
      c.picks[states[k]] = t.picks[k];
      c.rows[states[k]] = groups[k][t.picks[k]].point;
    }
    c.sum = std::move(t.sum);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<RatVector> stability_defects(const RatBasis& e, const RatMatrix& p) {
  if (p.rows() != e.rows() || p.cols() != e.rows()) throw DimensionError("is_stable: dimension mismatch");
  const RatMatrix pe = p * e.matrix();
  std::vector<RatVector> out;
  for (Index k = 0; k < pe.cols(); ++k) {
    RatVector col = pe.col(k);
    if (!e.contains(col)) out.push_back(std::move(col));
  }
  return out;
}

bool is_stable(const RatBasis& e, const RatMatrix& p) { return stability_defects(e, p).empty(); }

BisimMatrix minimal_bisim_matrix(const PA& pa, Variant variant, const EngineOptions& options) {
  return minimal_bisim_matrix(pa, apply_variant(pa, variant), variant, options);
}

BisimMatrix minimal_bisim_matrix(const PA& pa, const std::vector<ParamTransMatrix>& schedule,
                                 Variant variant, const EngineOptions& options) {
  const Index n = pa.num_states();
  BisimMatrix out;
  out.variant = variant;
  out.basis = RatBasis(n);
  if (n == 0) return out;
  out.basis.insert(ones(n));
  out.provenance.push_back({{}, {}, 0, ones(n)});

  struct Produced {
    ExtremalChoice choice;
    RatMatrix columns;
  };

  for (std::size_t sweep = 1;; ++sweep) {
    const RatMatrix e = out.basis.matrix();
    std::vector<std::vector<Produced>> produced(schedule.size());
    std::vector<std::exception_ptr> failures(schedule.size());

    auto work = [&](std::size_t k) {
      try {
        for (auto& c : extremal_choices(schedule[k], e, options.max_choices)) {
          RatMatrix cols = product_with(schedule[k], c.picks, e);
          produced[k].push_back({std::move(c), std::move(cols)});
        }
      } catch (...) {
        failures[k] = std::current_exception();
      }
    };

    const unsigned jobs = std::max(1u, options.jobs);
    if (jobs == 1 || schedule.size() < 2) {
      for (std::size_t k = 0; k < schedule.size(); ++k) work(k);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < std::min<std::size_t>(jobs, schedule.size()); ++t) {
        pool.emplace_back([&] {
          for (std::size_t k; (k = next.fetch_add(1)) < schedule.size();) work(k);
        });
      }
    }
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }

    // Extension is serial and in schedule order, so the result and its
    // provenance do not depend on the number of jobs.
    bool changed = false;
    for (auto& batch : produced) {
      for (auto& p : batch) {
        for (Index col = 0; col < p.columns.cols(); ++col) {
          RatVector v = p.columns.col(col);
          if (out.basis.insert(v)) {
            out.provenance.push_back({p.choice.labels, p.choice.picks, sweep, std::move(v)});
            changed = true;
          }
        }
      }
    }
    out.rank_history.push_back(out.basis.rank());
    // A full-rank E cannot grow.
    if (!changed || out.basis.rank() == n) break;
  }
  return out;
}

BisimMatrix deterministic_bisim_matrix(const PA& pa) {
  const Index n = pa.num_states();
  std::vector<RatMatrix> mats;
  for (std::size_t a = 0; a < pa.num_labels(); ++a) mats.push_back(trans_matrix_det(pa, a));

  BisimMatrix out;
  out.basis = RatBasis(n);
  if (n == 0) return out;
  out.basis.insert(ones(n));
  out.provenance.push_back({{}, {}, 0, ones(n)});

  std::vector<RatVector> frontier{ones(n)};
  for (std::size_t sweep = 1; !frontier.empty(); ++sweep) {
    std::vector<RatVector> next;
    for (const auto& v : frontier) {
      for (std::size_t a = 0; a < mats.size(); ++a) {
        RatVector w = mats[a] * v;
        if (out.basis.insert(w)) {
          out.provenance.push_back({{a}, {}, sweep, w});
          next.push_back(std::move(w));
        }
      }
    }
    out.rank_history.push_back(out.basis.rank());
    frontier = std::move(next);
  }
  return out;
}

Equivalence equivalent(const BisimMatrix& e, const Dist& mu, const Dist& nu) {
  if (mu.size() != e.rows() || nu.size() != e.rows()) throw DimensionError("equivalent: dimension mismatch");
  const RatVector diff = mu.vector() - nu.vector();
  Equivalence out;
  for (Index k = 0; k < e.rank(); ++k) {
    Rational dot = diff.dot(e.basis.column(k));
    if (dot != 0) {
      out.equivalent = false;
      out.witnesses.push_back({k, std::move(dot)});
    }
  }
  return out;
}

namespace {

// Vertices of sum_i weight_i * C_i over the enabled states with positive weight.
std::vector<RatVector> successor_polytope(const ParamTransMatrix& ptm, const RatMatrix& e, const Dist& w,
                                          std::size_t cap) {
  std::vector<std::size_t> states;
  for (std::size_t i = 0; i < ptm.choices.size(); ++i) {
    if (ptm.enabled(i) && w[static_cast<Index>(i)] != 0) states.push_back(i);
  }
  if (states.empty()) return {};
  check_product(ptm, cap, states);
  std::vector<std::vector<Candidate>> groups;
  for (auto i : states) {
    std::vector<Candidate> g;
    for (std::size_t j = 0; j < ptm.choices[i].size(); ++j) {
      g.push_back({j, RatVector(w[static_cast<Index>(i)] * (e.transpose() * ptm.choices[i][j]))});
    }
    groups.push_back(std::move(g));
  }
  std::vector<RatVector> out;
  for (auto& t : vertex_tuples(groups, e.cols())) out.push_back(std::move(t.sum));
  return out;
}

bool member(const std::vector<RatVector>& set, const RatVector& v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

}  // namespace

Def3Report check_def3(const PA& pa, const BisimMatrix& e, const Dist& mu, const Dist& nu,
                      const LabelSet& labels, std::size_t max_choices) {
  if (mu.size() != pa.num_states() || nu.size() != pa.num_states()) {
    throw DimensionError("check_def3: dimension mismatch");
  }
  Def3Report r;
  const ParamTransMatrix ptm = param_trans_matrix(pa, labels);
  r.mass_mu = 0;
  r.mass_nu = 0;
  for (std::size_t i = 0; i < ptm.choices.size(); ++i) {
    if (!ptm.enabled(i)) continue;
    r.mass_mu += mu[static_cast<Index>(i)];
    r.mass_nu += nu[static_cast<Index>(i)];
  }
  r.clause1 = r.mass_mu == r.mass_nu;
  if (!r.clause1 || r.mass_mu == 0) return r;

  const RatMatrix m = e.matrix();
  const auto pm = successor_polytope(ptm, m, mu, max_choices);
  const auto pn = successor_polytope(ptm, m, nu, max_choices);
  for (const auto& v : pm) {
    if (!member(pn, v)) r.only_mu.push_back(v);
  }
  for (const auto& v : pn) {
    if (!member(pm, v)) r.only_nu.push_back(v);
  }
  r.clause2 = r.only_mu.empty() && r.only_nu.empty();
  return r;
}

namespace {

void set_why(std::string* why, std::string text) {
  if (why) *why = std::move(text);
}

const ParamTransMatrix* find_scheduled(const std::vector<ParamTransMatrix>& schedule, const LabelSet& labels) {
  for (const auto& p : schedule) {
    if (p.labels == labels) return &p;
  }
  return nullptr;
}

}  // namespace

bool replay_provenance(const PA& pa, const BisimMatrix& e, std::string* why) {
  const Index n = pa.num_states();
  if (e.provenance.empty() || e.provenance.front().vector != ones(n)) {
    set_why(why, "provenance does not start with the all-ones column");
    return false;
  }
  const auto schedule = apply_variant(pa, e.variant);
  RatBasis replay(n);
  replay.insert(ones(n));
  RatMatrix snapshot = replay.matrix();
  std::size_t sweep = 0;
  for (std::size_t k = 1; k < e.provenance.size(); ++k) {
    const auto& entry = e.provenance[k];
    if (entry.sweep < sweep) {
      set_why(why, "provenance sweeps out of order");
      return false;
    }
    if (entry.sweep != sweep) {
      sweep = entry.sweep;
      snapshot = replay.matrix();
    }
    const ParamTransMatrix* ptm = find_scheduled(schedule, entry.labels);
    if (!ptm) {
      set_why(why, "entry " + std::to_string(k) + " uses a label set outside the schedule");
      return false;
    }
    // Extremality of the recorded tuple against every pure tuple sum.
    std::vector<std::size_t> states;
    for (std::size_t i = 0; i < ptm->choices.size(); ++i) {
      if (ptm->enabled(i)) states.push_back(i);
    }
    RatVector chosen = RatVector::Zero(snapshot.cols());
    for (auto i : states) chosen += snapshot.transpose() * ptm->choices[i][entry.picks.at(i)];
    std::vector<RatVector> cloud;
    std::vector<std::size_t> odo(states.size(), 0);
    for (bool done = false; !done;) {
      RatVector s = RatVector::Zero(snapshot.cols());
      for (std::size_t q = 0; q < states.size(); ++q) s += snapshot.transpose() * ptm->choices[states[q]][odo[q]];
      cloud.push_back(std::move(s));
      done = true;
      for (std::size_t q = states.size(); q-- > 0;) {
        if (++odo[q] < ptm->choices[states[q]].size()) {
          done = false;
          break;
        }
        odo[q] = 0;
      }
    }
    if (!is_vertex<Rational>(chosen, cloud)) {
      set_why(why, "entry " + std::to_string(k) + " records a non-extremal choice");
      return false;
    }
    const RatMatrix produced = product_with(*ptm, entry.picks, snapshot);
    const RatBasis from = column_space(produced);
    if (!from.contains(entry.vector)) {
      set_why(why, "entry " + std::to_string(k) + " is not produced by its recorded choice");
      return false;
    }
    replay.insert(entry.vector);
  }
  if (!(replay == e.basis)) {
    set_why(why, "replayed span differs from the matrix");
    return false;
  }
  return true;
}

bool verify_bisimulation_matrix(const PA& pa, const BisimMatrix& e, std::string* why) {
  if (!e.basis.contains(ones(pa.num_states()))) {
    set_why(why, "all-ones column missing");
    return false;
  }
  const RatMatrix m = e.matrix();
  for (const auto& ptm : apply_variant(pa, e.variant)) {
    for (const auto& c : extremal_choices(ptm, m)) {
      if (!is_stable(e.basis, instantiate(ptm, pure_choice(ptm, c.picks)))) {
        set_why(why, "not stable for label set {" + [&] {
          std::string s;
          for (const auto& l : pa.label_names(ptm.labels)) s += (s.empty() ? "" : ",") + l;
          return s;
        }() + "}");
        return false;
      }
    }
  }
  return true;
}

}  // namespace dbisim
