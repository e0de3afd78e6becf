#pragma once

#include <map>
#include <optional>
#include <vector>

#include "invlag/expr.hpp"
#include "invlag/rational.hpp"

namespace invlag {

using Monomial = std::vector<int>;  // exponent per coordinate, length = dim

/// Sparse multivariate polynomial with exact rational coefficients.
/// Zero coefficients are never stored.
class Poly {
public:
  explicit Poly(int dim) : dim_(dim) {}
  static Poly constant(int dim, const Rational& c);
  static Poly variable(int dim, int index);  // 1-based
  static Poly monomial(int dim, Monomial m, const Rational& c);

  int dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  int total_degree() const;

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  Rational coefficient(const Monomial& m) const;

  Poly& add_term(const Monomial& m, const Rational& c);

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly scaled(const Rational& c) const;
  Poly pow(int e) const;  // e >= 0
  Poly derivative(int index) const;

  Rational eval_exact(const std::vector<Rational>& point) const;
  double eval(const std::vector<double>& point) const;

  Expr to_expr() const;

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

private:
  int dim_;
  std::map<Monomial, Rational> terms_;
};

/// Exact expansion; nullopt when the expression contains exp/ln/abs,
/// divides by a non-constant, or references an unassigned parameter.
std::optional<Poly> as_polynomial(const Expr& e, int dim, const ParamMap& params = {});

/// All monomials in `dim` variables of total degree <= degree, in a fixed
/// deterministic order (graded lexicographic).
std::vector<Monomial> monomials_up_to_degree(int dim, int degree);

}  // namespace invlag
