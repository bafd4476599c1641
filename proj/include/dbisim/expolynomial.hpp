#pragma once

// Functions sum_i coef_i * t^k_i * exp(-r_i t) on [0, inf) with exact
// rational coefficients and rates. Closed under sums, products, convolution.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dbisim/rational.hpp"

namespace dbisim {

struct ExpTerm {
  Rational coef;
  unsigned power = 0;
  Rational rate;
};

class Expolynomial {
 public:
  Expolynomial() = default;

  /// coef * t^power * exp(-rate t); rate must be positive.
  static Expolynomial term(Rational coef, unsigned power, Rational rate);
  /// Density of Exp(rate).
  static Expolynomial exponential(const Rational& rate);

  /// Terms ordered by (rate, power), no zero coefficients.
  std::vector<ExpTerm> terms() const;
  bool is_zero() const { return terms_.empty(); }

  Expolynomial& operator+=(const Expolynomial& other);
  Expolynomial& operator-=(const Expolynomial& other);
  Expolynomial& operator*=(const Rational& scale);

  friend Expolynomial operator+(Expolynomial a, const Expolynomial& b) { return a += b; }
  friend Expolynomial operator-(Expolynomial a, const Expolynomial& b) { return a -= b; }
  friend Expolynomial operator*(Expolynomial a, const Rational& s) { return a *= s; }
  friend Expolynomial operator*(const Rational& s, Expolynomial a) { return a *= s; }
  friend Expolynomial operator*(const Expolynomial& a, const Expolynomial& b);
  friend bool operator==(const Expolynomial& a, const Expolynomial& b) { return a.terms_ == b.terms_; }

  /// Integral over [0, inf): sum coef * k! / r^(k+1).
  Rational integral() const;

  double operator()(double t) const;
  /// Integral over [a, b] in floating point; b may be infinity.
  double integral(double a, double b) const;

  std::string to_string() const;

 private:
  void add(const Rational& rate, unsigned power, const Rational& coef);

  std::map<std::pair<Rational, unsigned>, Rational> terms_;
};

/// (f * g)(t) = integral_0^t f(s) g(t - s) ds.
Expolynomial convolve(const Expolynomial& f, const Expolynomial& g);

}  // namespace dbisim
