#include "dbisim/expolynomial.hpp"

#include <cmath>

namespace dbisim {

namespace {

Rational factorial(unsigned n) {
  Rational f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

Rational binomial(unsigned n, unsigned k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

Rational power(const Rational& base, unsigned n) {
  Rational p = 1;
  for (unsigned i = 0; i < n; ++i) p *= base;
  return p;
}

// integral_a^inf t^k e^{-rt} dt
double upper_tail(unsigned k, double r, double a) {
  if (std::isinf(a)) return 0.0;
  double sum = 0.0;
  double kfact_over_jfact = 1.0;  // k!/j!, built downwards from j = k
  for (unsigned j = k + 1; j-- > 0;) {
    sum += kfact_over_jfact * std::pow(a, static_cast<double>(j)) / std::pow(r, static_cast<double>(k - j + 1));
    kfact_over_jfact *= static_cast<double>(j);
  }
  return std::exp(-r * a) * sum;
}

}  // namespace

Expolynomial Expolynomial::term(Rational coef, unsigned power, Rational rate) {
  if (rate <= 0) throw Error("expolynomial rates must be positive");
  Expolynomial e;
  e.add(rate, power, coef);
  return e;
}

Expolynomial Expolynomial::exponential(const Rational& rate) { return term(rate, 0, rate); }

void Expolynomial::add(const Rational& rate, unsigned power, const Rational& coef) {
  if (coef == 0) return;
  auto key = std::make_pair(rate, power);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), coef);
    return;
  }
  it->second += coef;
  if (it->second == 0) terms_.erase(it);
}

std::vector<ExpTerm> Expolynomial::terms() const {
  std::vector<ExpTerm> out;
  out.reserve(terms_.size());
  for (const auto& [key, coef] : terms_) out.push_back({coef, key.second, key.first});
  return out;
}

Expolynomial& Expolynomial::operator+=(const Expolynomial& other) {
  for (const auto& [key, coef] : other.terms_) add(key.first, key.second, coef);
  return *this;
}

Expolynomial& Expolynomial::operator-=(const Expolynomial& other) {
  for (const auto& [key, coef] : other.terms_) add(key.first, key.second, -coef);
  return *this;
}

Expolynomial& Expolynomial::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, coef] : terms_) coef *= scale;
  return *this;
}

Expolynomial operator*(const Expolynomial& a, const Expolynomial& b) {
  Expolynomial out;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) out.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
  }
  return out;
}

Rational Expolynomial::integral() const {
  Rational total = 0;
  for (const auto& [key, coef] : terms_) total += coef * factorial(key.second) / power(key.first, key.second + 1);
  return total;
}

double Expolynomial::operator()(double t) const {
  double v = 0.0;
  for (const auto& [key, coef] : terms_) {
    v += to_double(coef) * std::pow(t, static_cast<double>(key.second)) * std::exp(-to_double(key.first) * t);
  }
  return v;
}

double Expolynomial::integral(double a, double b) const {
  double v = 0.0;
  for (const auto& [key, coef] : terms_) {
    const double r = to_double(key.first);
    v += to_double(coef) * (upper_tail(key.second, r, a) - upper_tail(key.second, r, b));
  }
  return v;
}

std::string Expolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [key, coef] : terms_) {
    if (!s.empty()) s += " + ";
    s += format_rational(coef);
    if (key.second > 0) s += "*t^" + std::to_string(key.second);
    s += "*exp(-" + format_rational(key.first) + "t)";
  }
  return s;
}

// s^k e^{-rs} convolved with s^m e^{-ps}:
//   e^{-pt} sum_i C(m,i) (-1)^i t^{m-i} integral_0^t s^{k+i} e^{-(r-p)s} ds
Expolynomial convolve(const Expolynomial& f, const Expolynomial& g) {
  Expolynomial out;
  for (const auto& tf : f.terms()) {
    for (const auto& tg : g.terms()) {
      const Rational d = tf.rate - tg.rate;
      const Rational c = tf.coef * tg.coef;
      for (unsigned i = 0; i <= tg.power; ++i) {
        const Rational ci = (i % 2 == 0 ? c : Rational(-c)) * binomial(tg.power, i);
        const unsigned n = tf.power + i;
        const unsigned tp = tg.power - i;
        if (d == 0) {
          out += Expolynomial::term(ci / (n + 1), tp + n + 1, tg.rate);
          continue;
        }
        // integral_0^t s^n e^{-ds} ds = n!/d^{n+1} - e^{-dt} sum_j n!/(j! d^{n+1-j}) t^j
        const Rational nf = factorial(n);
        out += Expolynomial::term(ci * nf / power(d, n + 1), tp, tg.rate);
        for (unsigned j = 0; j <= n; ++j) {
          out -= Expolynomial::term(ci * nf / (factorial(j) * power(d, n + 1 - j)), tp + j, tf.rate);
        }
      }
    }
  }
  return out;
}

}  // namespace dbisim
