#pragma once

// Minimal bisimulation matrices for probabilistic automata.
//
// Two distributions mu, nu are related iff (mu - nu) E = 0. E starts as the
// all-ones column and is closed under P_A^{W(c)} for every scheduled label
// set A and every extremal pure choice c, until nothing new appears.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dbisim/linalg.hpp"
#include "dbisim/pa.hpp"

namespace dbisim {

enum class Variant {
  Full,        // every nonempty label set
  Singleton,   // singleton label sets only
  ExactLabel,  // rows of states whose enabled set differs from A are zeroed
};

std::string to_string(Variant v);
Variant parse_variant(std::string_view text);

/// A pure choice per enabled state whose summed effect vector is a vertex of
/// the Minkowski sum of the per-state choice polytopes.
struct ExtremalChoice {
  LabelSet labels;
  std::vector<std::size_t> picks;  // index into ptm.choices[i]; 0 for disabled states
  std::vector<RatVector> rows;     // mu_i^{pick} E, empty for disabled states
  RatVector sum;
};

struct ProvenanceEntry {
  LabelSet labels;                 // empty for the seed column
  std::vector<std::size_t> picks;  // empty for the seed column
  std::size_t sweep = 0;
  RatVector vector;                // the column as produced, before canonicalisation
};

struct BisimMatrix {
  RatBasis basis;
  Variant variant = Variant::Full;
  std::vector<ProvenanceEntry> provenance;
  std::vector<Index> rank_history;  // rank after each sweep

  Index rank() const { return basis.rank(); }
  Index rows() const { return basis.rows(); }
  RatMatrix matrix() const { return basis.matrix(); }
};

struct EngineOptions {
  std::size_t max_choices = 1'000'000;
  unsigned jobs = 1;
};

/// The parametric matrices iterated by Algorithm 1 for a variant, in
/// schedule order: size-then-lexicographic label sets, those with S_A empty
/// skipped.
std::vector<ParamTransMatrix> apply_variant(const PA& pa, Variant variant);

std::vector<ExtremalChoice> extremal_choices(const ParamTransMatrix& ptm, const RatMatrix& e,
                                             std::size_t max_choices = 1'000'000);

/// Columns of P E that fall outside colspace(E).
std::vector<RatVector> stability_defects(const RatBasis& e, const RatMatrix& p);

/// rho E = 0 implies rho P E = 0, i.e. colspace(P E) is within colspace(E).
bool is_stable(const RatBasis& e, const RatMatrix& p);

BisimMatrix minimal_bisim_matrix(const PA& pa, Variant variant = Variant::Full,
                                 const EngineOptions& options = {});

/// Same fixpoint over an explicit schedule (used to check order invariance).
BisimMatrix minimal_bisim_matrix(const PA& pa, const std::vector<ParamTransMatrix>& schedule,
                                 Variant variant, const EngineOptions& options = {});

/// Closure of the all-ones column under every P_a. Requires at most one
/// transition per (state, label). The result is the minimal bisimulation
/// matrix when every state has at most one outgoing transition.
BisimMatrix deterministic_bisim_matrix(const PA& pa);

struct Witness {
  Index column = 0;
  Rational value;  // (mu - nu) . column
};

struct Equivalence {
  bool equivalent = true;
  std::vector<Witness> witnesses;  // every canonical column with nonzero product
};

Equivalence equivalent(const BisimMatrix& e, const Dist& mu, const Dist& nu);

struct Def3Report {
  Rational mass_mu;
  Rational mass_nu;
  bool clause1 = true;
  bool clause2 = true;
  std::vector<RatVector> only_mu;  // successor-polytope vertices missing on the nu side
  std::vector<RatVector> only_nu;

  bool pass() const { return clause1 && clause2; }
};

/// Checks both clauses of the distribution bisimulation definition for one
/// label set: equal enabled mass, and equal polytopes of reachable successor
/// classes (mu-weighted Minkowski sum of the choice polytopes versus the
/// nu-weighted one, compared through their vertex sets).
Def3Report check_def3(const PA& pa, const BisimMatrix& e, const Dist& mu, const Dist& nu,
                      const LabelSet& labels, std::size_t max_choices = 1'000'000);

/// Re-derives every provenance entry from the model: each recorded choice is
/// extremal against the basis of its sweep and each recorded column lies in
/// the span it claims to come from; the replay must end in the same span.
bool replay_provenance(const PA& pa, const BisimMatrix& e, std::string* why = nullptr);

/// All-ones column present and stable under every scheduled extremal choice.
bool verify_bisimulation_matrix(const PA& pa, const BisimMatrix& e, std::string* why = nullptr);

}  // namespace dbisim
