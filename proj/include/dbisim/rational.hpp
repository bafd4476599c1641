#pragma once

// Exact rational scalar and the dense Eigen types built on it.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>

#include <string>
#include <string_view>

#include "dbisim/error.hpp"

namespace dbisim {

// Expression templates are disabled so that Eigen's own expression machinery
// sees plain values.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RatVector = VectorX<Rational>;
using RatMatrix = MatrixX<Rational>;
using Index = Eigen::Index;

/// Parses `"p/q"`, `"n"` or `"-p/q"`. Rejects a zero denominator and any
/// other syntax; the result is always in lowest terms.
Rational parse_rational(std::string_view text);

/// Canonical literal: `"n"` for integers, `"p/q"` otherwise.
std::string format_rational(const Rational& value);

inline bool is_zero(const Rational& value) { return value.is_zero(); }

template <typename Derived>
bool is_zero_vector(const Eigen::MatrixBase<Derived>& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0) return false;
  }
  return true;
}

double to_double(const Rational& value);

}  // namespace dbisim
