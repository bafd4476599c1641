#pragma once

// Exact LP feasibility (phase-one simplex, Bland's rule) and the convex-hull
// primitives built on it.

#include <optional>
#include <span>
#include <vector>

#include "dbisim/linalg.hpp"

namespace dbisim {

enum class Relation { LessEqual, GreaterEqual, Equal };

template <typename Scalar>
struct LinearConstraint {
  VectorX<Scalar> coeffs;
  Relation relation = Relation::Equal;
  Scalar rhs{0};
};

template <typename Scalar>
struct Feasibility {
  bool feasible = false;
  VectorX<Scalar> witness;  // satisfies every constraint exactly when feasible
};

/// Finds x >= 0 with a x = b, or reports that none exists.
///
/// Phase one of the tableau simplex: one artificial per row, minimise their
/// sum. Entering column is the lowest index with negative reduced cost, the
/// leaving row breaks ratio ties by the lowest basic variable, so the method
/// cannot cycle.
template <typename Scalar>
std::optional<VectorX<Scalar>> nonnegative_solution(const MatrixX<Scalar>& a,
                                                    const VectorX<Scalar>& b) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (b.size() != m) throw DimensionError("nonnegative_solution: rhs size mismatch");

  // Columns: n structural, m artificial, then the rhs.
  MatrixX<Scalar> t = MatrixX<Scalar>::Zero(m + 1, n + m + 1);
  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const bool flip = b(i) < 0;
    for (Index j = 0; j < n; ++j) t(i, j) = flip ? Scalar(-a(i, j)) : a(i, j);
    t(i, n + m) = flip ? Scalar(-b(i)) : b(i);
    t(i, n + i) = 1;
    basis[static_cast<std::size_t>(i)] = n + i;
  }
  // Reduced costs of the phase-one objective (sum of artificials).
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) t(m, j) -= t(i, j);
    t(m, n + m) -= t(i, n + m);
  }

  for (;;) {
    Index enter = -1;
    for (Index j = 0; j < n + m; ++j) {
      if (t(m, j) < 0) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    Index leave = -1;
    Scalar best;
    for (Index i = 0; i < m; ++i) {
      if (t(i, enter) <= 0) continue;
      Scalar ratio = t(i, n + m) / t(i, enter);
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best = std::move(ratio);
      }
    }
    // Phase one is bounded below by zero, so an entering column always has a
    // positive entry.
    if (leave < 0) break;

    const Scalar inv = Scalar(1) / t(leave, enter);
    std::vector<Index> nz;
    for (Index j = 0; j <= n + m; ++j) {
      if (t(leave, j) == 0) continue;
      t(leave, j) *= inv;
      nz.push_back(j);
    }
    for (Index i = 0; i <= m; ++i) {
      if (i == leave || t(i, enter) == 0) continue;
      const Scalar f = t(i, enter);
      for (Index j : nz) t(i, j) -= f * t(leave, j);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  if (t(m, n + m) != 0) return std::nullopt;
  VectorX<Scalar> x = VectorX<Scalar>::Zero(n);
  for (Index i = 0; i < m; ++i) {
    const Index j = basis[static_cast<std::size_t>(i)];
    if (j < n) x(j) = t(i, n + m);
  }
  return x;
}

/// Feasibility of a system over `unknowns` free (sign-unrestricted) variables.
template <typename Scalar>
Feasibility<Scalar> lp_feasible(std::span<const LinearConstraint<Scalar>> constraints, Index unknowns) {
  Index slacks = 0;
  for (const auto& c : constraints) {
    if (c.coeffs.size() != unknowns) throw DimensionError("lp_feasible: constraint width mismatch");
    if (c.relation != Relation::Equal) ++slacks;
  }
  const Index rows = static_cast<Index>(constraints.size());
  // x = x_plus - x_minus, one slack per inequality.
  MatrixX<Scalar> a = MatrixX<Scalar>::Zero(rows, 2 * unknowns + slacks);
  VectorX<Scalar> b(rows);
  Index slack = 2 * unknowns;
  for (Index i = 0; i < rows; ++i) {
    const auto& c = constraints[static_cast<std::size_t>(i)];
    a.row(i).head(unknowns) = c.coeffs.transpose();
    a.row(i).segment(unknowns, unknowns) = -c.coeffs.transpose();
    if (c.relation == Relation::LessEqual) a(i, slack++) = 1;
    if (c.relation == Relation::GreaterEqual) a(i, slack++) = -1;
    b(i) = c.rhs;
  }
  Feasibility<Scalar> out;
  if (auto x = nonnegative_solution<Scalar>(a, b)) {
    out.feasible = true;
    out.witness = x->head(unknowns) - x->segment(unknowns, unknowns);
  }
  return out;
}

template <typename Scalar>
Feasibility<Scalar> lp_feasible(const std::vector<LinearConstraint<Scalar>>& constraints, Index unknowns) {
  return lp_feasible<Scalar>(std::span<const LinearConstraint<Scalar>>(constraints), unknowns);
}

/// Convex weights expressing `p` over `points`, if p lies in their hull.
template <typename Scalar>
std::optional<VectorX<Scalar>> convex_weights(const VectorX<Scalar>& p,
                                              std::span<const VectorX<Scalar>> points) {
  if (points.empty()) return std::nullopt;
  const Index d = p.size();
  MatrixX<Scalar> a(d + 1, static_cast<Index>(points.size()));
  VectorX<Scalar> b(d + 1);
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].size() != d) throw DimensionError("convex_weights: dimension mismatch");
    a.col(static_cast<Index>(j)).head(d) = points[j];
    a(d, static_cast<Index>(j)) = 1;
  }
  b.head(d) = p;
  b(d) = 1;
  return nonnegative_solution<Scalar>(a, b);
}

/// True iff `p` is not a convex combination of the other points of `cloud`.
/// `p` must occur in the cloud; all its copies are excluded.
template <typename Scalar>
bool is_vertex(const VectorX<Scalar>& p, std::span<const VectorX<Scalar>> cloud) {
  std::vector<VectorX<Scalar>> others;
  bool found = false;
  for (const auto& q : cloud) {
    if (q.size() != p.size()) throw DimensionError("is_vertex: dimension mismatch");
    if (q == p) {
      found = true;
    } else {
      others.push_back(q);
    }
  }
  if (!found) throw Error("is_vertex: point is not a member of the cloud");
  return !convex_weights<Scalar>(p, others).has_value();
}

template <typename Scalar>
bool is_vertex(const VectorX<Scalar>& p, const std::vector<VectorX<Scalar>>& cloud) {
  return is_vertex<Scalar>(p, std::span<const VectorX<Scalar>>(cloud));
}

/// Indices (first occurrences) of the points of `cloud` that are vertices of
/// its convex hull, in input order.
template <typename Scalar>
std::vector<std::size_t> hull_vertex_indices(std::span<const VectorX<Scalar>> cloud) {
  std::vector<std::size_t> unique_idx;
  std::vector<VectorX<Scalar>> unique;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    bool seen = false;
    for (const auto& u : unique) {
      if (u == cloud[i]) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      unique_idx.push_back(i);
      unique.push_back(cloud[i]);
    }
  }
  for (const auto& u : unique) {
    if (u.size() != unique.front().size()) throw DimensionError("hull_vertex_indices: dimension mismatch");
  }
  if (unique.size() <= 2) return unique_idx;
  // The unique maximiser of a linear functional is a vertex; coordinate
  // directions settle many points without an LP.
  std::vector<bool> known(unique.size(), false);
  const Index d = unique.front().size();
  for (Index j = 0; j < d; ++j) {
    for (int sign : {1, -1}) {
      std::size_t best = 0;
      bool tie = false;
      for (std::size_t k = 1; k < unique.size(); ++k) {
        const Scalar diff = sign * (unique[k](j) - unique[best](j));
        if (diff > 0) {
          best = k;
          tie = false;
        } else if (diff == 0) {
          tie = true;
        }
      }
      if (!tie) known[best] = true;
    }
  }
  // A point found inside the hull of the rest can be dropped before the
  // next test: the hull does not change.
  std::vector<bool> alive(unique.size(), true);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < unique.size(); ++k) {
    if (known[k]) {
      out.push_back(unique_idx[k]);
      continue;
    }
    std::vector<VectorX<Scalar>> others;
    for (std::size_t j = 0; j < unique.size(); ++j) {
      if (j != k && alive[j]) others.push_back(unique[j]);
    }
    if (convex_weights<Scalar>(unique[k], others).has_value()) {
      alive[k] = false;
    } else {
      out.push_back(unique_idx[k]);
    }
  }
  return out;
}

template <typename Scalar>
std::vector<VectorX<Scalar>> hull_vertices(std::span<const VectorX<Scalar>> cloud) {
  std::vector<VectorX<Scalar>> out;
  for (std::size_t i : hull_vertex_indices<Scalar>(cloud)) out.push_back(cloud[i]);
  return out;
}

template <typename Scalar>
std::vector<VectorX<Scalar>> hull_vertices(const std::vector<VectorX<Scalar>>& cloud) {
  return hull_vertices<Scalar>(std::span<const VectorX<Scalar>>(cloud));
}

}  // namespace dbisim
