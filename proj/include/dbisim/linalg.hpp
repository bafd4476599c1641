#pragma once

// Exact linear algebra over a field scalar: reduced echelon forms, canonical
// column bases, span tests and kernels. Every routine is templated on the
// scalar so that the same code runs on any exact field type; the library
// instantiates it with `Rational`.

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "dbisim/rational.hpp"

namespace dbisim {

/// Brings `m` into reduced row echelon form in place and returns the pivot
/// column of every nonzero row, in row order.
template <typename Scalar>
std::vector<Index> reduce_rows(MatrixX<Scalar>& m) {
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Index sel = -1;
    for (Index r = row; r < m.rows(); ++r) {
      if (m(r, col) != 0) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != row) m.row(sel).swap(m.row(row));
    const Scalar inv = Scalar(1) / m(row, col);
    m.row(row) *= inv;
    for (Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Scalar f = m(r, col);
      m.row(r) -= f * m.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <typename Scalar>
Index rank(MatrixX<Scalar> m) {
  return static_cast<Index>(reduce_rows(m).size());
}

/// Basis of { x | m x = 0 }.
template <typename Scalar>
std::vector<VectorX<Scalar>> kernel(MatrixX<Scalar> m) {
  const auto pivots = reduce_rows(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (Index p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<VectorX<Scalar>> out;
  for (Index free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    VectorX<Scalar> x = VectorX<Scalar>::Zero(m.cols());
    x(free) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      x(pivots[r]) = -m(static_cast<Index>(r), free);
    }
    out.push_back(std::move(x));
  }
  return out;
}

/// Some solution of `a x = b` (free unknowns set to zero), or nothing.
template <typename Scalar>
std::optional<VectorX<Scalar>> solve(const MatrixX<Scalar>& a, const VectorX<Scalar>& b) {
  if (a.rows() != b.size()) throw DimensionError("solve: row count differs from rhs size");
  MatrixX<Scalar> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  const auto pivots = reduce_rows(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  VectorX<Scalar> x = VectorX<Scalar>::Zero(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    x(pivots[r]) = aug(static_cast<Index>(r), a.cols());
  }
  return x;
}

/// A subspace of Scalar^rows held in reduced column echelon form: every
/// column has a leading 1 at its pivot row, every other column is zero on
/// that row, and columns are ordered by pivot row. The form is unique for a
/// given subspace, so two bases compare equal iff they span the same space.
template <typename Scalar>
class ColumnBasis {
 public:
  ColumnBasis() = default;
  explicit ColumnBasis(Index rows) : rows_(rows) {}

  Index rows() const { return rows_; }
  Index rank() const { return static_cast<Index>(columns_.size()); }
  const std::vector<Index>& pivots() const { return pivots_; }
  const VectorX<Scalar>& column(Index k) const { return columns_[static_cast<std::size_t>(k)]; }
  const std::vector<VectorX<Scalar>>& columns() const { return columns_; }

  MatrixX<Scalar> matrix() const {
    MatrixX<Scalar> m(rows_, rank());
    for (Index k = 0; k < rank(); ++k) m.col(k) = column(k);
    return m;
  }

  /// `v` minus its projection along the pivot rows; zero iff v is in the span.
  VectorX<Scalar> residual(const VectorX<Scalar>& v) const {
    check_dim(v);
    VectorX<Scalar> r = v;
    for (std::size_t k = 0; k < columns_.size(); ++k) {
      const Scalar f = r(pivots_[k]);
      if (f != 0) r -= f * columns_[k];
    }
    return r;
  }

  bool contains(const VectorX<Scalar>& v) const { return is_zero_vector(residual(v)); }

  /// Coefficients of `v` over the canonical columns, if v is in the span.
  std::optional<VectorX<Scalar>> coordinates(const VectorX<Scalar>& v) const {
    if (!contains(v)) return std::nullopt;
    VectorX<Scalar> c(rank());
    for (std::size_t k = 0; k < columns_.size(); ++k) c(static_cast<Index>(k)) = v(pivots_[k]);
    return c;
  }

  /// Adds `v` to the span; returns false when it was already contained.
  bool insert(const VectorX<Scalar>& v) {
    VectorX<Scalar> r = residual(v);
    Index p = 0;
    while (p < r.size() && r(p) == 0) ++p;
    if (p == r.size()) return false;
    r /= Scalar(r(p));
    for (auto& c : columns_) {
      const Scalar f = c(p);
      if (f != 0) c -= f * r;
    }
    const auto at = std::lower_bound(pivots_.begin(), pivots_.end(), p);
    const auto offset = at - pivots_.begin();
    pivots_.insert(at, p);
    columns_.insert(columns_.begin() + offset, std::move(r));
    return true;
  }

  bool contains_all(const ColumnBasis& other) const {
    return std::all_of(other.columns_.begin(), other.columns_.end(),
                       [&](const VectorX<Scalar>& c) { return contains(c); });
  }

  friend bool operator==(const ColumnBasis& a, const ColumnBasis& b) {
    return a.rows_ == b.rows_ && a.pivots_ == b.pivots_ && a.columns_ == b.columns_;
  }

 private:
  void check_dim(const VectorX<Scalar>& v) const {
    if (v.size() != rows_) throw DimensionError("vector dimension does not match basis");
  }

  Index rows_ = 0;
  std::vector<Index> pivots_;
  std::vector<VectorX<Scalar>> columns_;
};

/// Canonical basis of span(vectors). `dim` fixes the ambient dimension, which
/// matters for an empty input.
template <typename Scalar>
ColumnBasis<Scalar> reduce(std::span<const VectorX<Scalar>> vectors, Index dim) {
  ColumnBasis<Scalar> basis(dim);
  for (const auto& v : vectors) {
    if (v.size() != dim) throw DimensionError("reduce: vectors have different dimensions");
    basis.insert(v);
  }
  return basis;
}

template <typename Scalar>
ColumnBasis<Scalar> reduce(const std::vector<VectorX<Scalar>>& vectors) {
  if (vectors.empty()) throw DimensionError("reduce: dimension of an empty list is unknown");
  return reduce<Scalar>(std::span<const VectorX<Scalar>>(vectors), vectors.front().size());
}

template <typename Scalar>
ColumnBasis<Scalar> column_space(const MatrixX<Scalar>& m) {
  ColumnBasis<Scalar> basis(m.rows());
  for (Index k = 0; k < m.cols(); ++k) basis.insert(VectorX<Scalar>(m.col(k)));
  return basis;
}

template <typename Scalar>
bool in_span(const ColumnBasis<Scalar>& basis, const VectorX<Scalar>& v) {
  return basis.contains(v);
}

/// True iff the row vector `v` is orthogonal to every column of `m`, i.e. v·m = 0.
template <typename Scalar>
bool annihilates(const MatrixX<Scalar>& m, const VectorX<Scalar>& v) {
  if (v.size() != m.rows()) throw DimensionError("annihilates: dimension mismatch");
  return is_zero_vector(VectorX<Scalar>(m.transpose() * v));
}

/// Coefficients expressing `v` as a combination of `generators`, if any.
template <typename Scalar>
std::optional<VectorX<Scalar>> express(std::span<const VectorX<Scalar>> generators,
                                       const VectorX<Scalar>& v) {
  MatrixX<Scalar> g(v.size(), static_cast<Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (generators[k].size() != v.size()) throw DimensionError("express: dimension mismatch");
    g.col(static_cast<Index>(k)) = generators[k];
  }
  return solve<Scalar>(g, v);
}

using RatBasis = ColumnBasis<Rational>;

}  // namespace dbisim
