#include "invlag/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace invlag {

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    mpq_class v(text);
    if (v.get_den() == 0) throw std::invalid_argument("Rational::parse: zero denominator");
    v.canonicalize();
    return Rational(v);
  }
  auto dot = text.find('.');
  auto epos = text.find_first_of("eE");
  if (dot == std::string::npos && epos == std::string::npos) {
    return Rational(mpq_class(text));
  }
  // Decimal: mantissa digits become an integer scaled by a power of ten.
  std::string mant = epos == std::string::npos ? text : text.substr(0, epos);
  long exp10 = 0;
  if (epos != std::string::npos) exp10 = std::strtol(text.c_str() + epos + 1, nullptr, 10);
  dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty() || digits == "-" || digits == "+")
    throw std::invalid_argument("Rational::parse: malformed number '" + text + "'");
  mpq_class v(digits);
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0) v *= p10; else v /= mpq_class(p10);
  v.canonicalize();
  return Rational(v);
}

Rational Rational::pow(int e) const {
  if (e == 0) return Rational(1);
  bool inv = e < 0;
  unsigned long k = static_cast<unsigned long>(inv ? -static_cast<long>(e) : e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), v_.get_num().get_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), v_.get_den().get_mpz_t(), k);
  mpq_class r(num, den);
  r.canonicalize();
  Rational out{r};
  return inv ? out.inverse() : out;
}

std::string Rational::str() const {
  return v_.get_str();
}

std::optional<Rational> Rational::snap(double x, long max_den, double rel_tol) {
  if (!std::isfinite(x)) return std::nullopt;
  const double tol = rel_tol * (1.0 + std::fabs(x));
  // Continued-fraction convergents.
  double a = x;
  long p0 = 1, q0 = 0, p1 = static_cast<long>(std::floor(a)), q1 = 1;
  a -= std::floor(a);
  for (int it = 0; it < 64; ++it) {
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::fabs(approx - x) <= tol) return Rational(p1, q1);
    if (a == 0.0) break;
    a = 1.0 / a;
    double fl = std::floor(a);
    if (fl > 1e15) break;
    long ai = static_cast<long>(fl);
    a -= fl;
    long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den || q2 <= 0) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
  }
  if (q1 != 0 && q1 <= max_den && std::fabs(static_cast<double>(p1) / q1 - x) <= tol)
    return Rational(p1, q1);
  return std::nullopt;
}

}  // namespace invlag
