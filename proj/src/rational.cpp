#include "dbisim/rational.hpp"

#include <cctype>

namespace dbisim {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw ModelError("malformed rational literal '" + std::string(text) + "'");
  }
  using Int = boost::multiprecision::mpz_int;
  const Int n{std::string(num)};
  const Int d{std::string(den)};
  if (d == 0) throw ModelError("zero denominator in rational literal '" + std::string(text) + "'");
  Rational r = Rational(n) / Rational(d);
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace dbisim
