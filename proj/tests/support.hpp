#pragma once

// Shared fixtures for the test suites: the catalog of reduced systems the
// worked examples live on, and a matrix-exponential oracle independent of
// the integrator under test.

#include <cmath>
#include <string>
#include <vector>

#include "invlag/dynamics.hpp"
#include "invlag/lie_algebra.hpp"
#include "invlag/reduced_geometry.hpp"

namespace testsupport {

using namespace invlag;

inline ReducedSODE affine_line_sode(const Rational& a, const Rational& b) {
  LieAlgebra alg = affine_line();
  std::vector<Expr> gamma{
      Expr::constant(0L),
      parse_expr("x*(b*x - a*y)", alg.names(), {"a", "b"}),
  };
  return ReducedSODE{alg, gamma, {{"a", a}, {"b", b}}};
}

/// gamma for the Bloch-Iserles dynamics, frozen from the displayed matrix ODE
/// (x' = -2y(x+z), y' = x^2 - z^2, z' = 2y(x+z)).
inline ReducedSODE bloch_iserles_sode() {
  LieAlgebra alg = bloch_iserles_2();
  std::vector<Expr> gamma{
      parse_expr("-2*y*(x + z)", alg.names(), {}),
      parse_expr("x^2 - z^2", alg.names(), {}),
      parse_expr("2*y*(x + z)", alg.names(), {}),
  };
  return ReducedSODE{alg, gamma, {}};
}

struct NamedSODE {
  std::string name;
  ReducedSODE sode;
};

/// The five catalog systems, parameters already assigned where needed.
inline std::vector<NamedSODE> catalog_sodes() {
  return {
      {"abelian3_canonical", canonical_connection(abelian(3))},
      {"heisenberg3_canonical", canonical_connection(heisenberg3())},
      {"a4_8_canonical", canonical_connection(a4_8())},
      {"affine_line(a=1,b=1)", affine_line_sode(Rational(1), Rational(1))},
      {"bloch_iserles_2", bloch_iserles_sode()},
  };
}

/// Scaling-and-squaring Taylor-16 matrix exponential; test-only oracle.
inline Matrix matrix_exp(const Matrix& a) {
  const int m = static_cast<int>(a.size());
  double norm = 0;
  for (const auto& row : a) {
    double s = 0;
    for (double v : row) s += std::fabs(v);
    norm = std::max(norm, s);
  }
  int squarings = 0;
  Matrix scaled = a;
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  double factor = std::ldexp(1.0, -squarings);
  scaled = mat_scale(a, factor);
  Matrix result = mat_identity(m);
  Matrix term = mat_identity(m);
  for (int k = 1; k <= 16; ++k) {
    term = mat_scale(mat_mul(term, scaled), 1.0 / k);
    result = mat_add(result, term);
  }
  for (int s = 0; s < squarings; ++s) result = mat_mul(result, result);
  return result;
}

/// 2x2 representation of the affine-line algebra: B1 = E11, B2 = E12.
inline MatrixRep affine_rep() {
  MatrixRep rep;
  rep.m = 2;
  rep.basis = {Matrix{{1, 0}, {0, 0}}, Matrix{{0, 1}, {0, 0}}};
  return rep;
}

/// gl(2) representation of bloch_iserles_2 via w -> wN.
inline MatrixRep bloch_iserles_rep() {
  MatrixRep rep;
  rep.m = 2;
  rep.basis = {Matrix{{0, 1}, {0, 0}}, Matrix{{-1, 0}, {0, 1}}, Matrix{{0, 0}, {-1, 0}}};
  return rep;
}

/// 3x3 strictly-upper-triangular representation of heisenberg3
/// ({E1,E3} = E2): B1 = E12, B2 = E13, B3 = E23.
inline MatrixRep heisenberg_rep() {
  MatrixRep rep;
  rep.m = 3;
  rep.basis = {Matrix{{0, 1, 0}, {0, 0, 0}, {0, 0, 0}},
               Matrix{{0, 0, 1}, {0, 0, 0}, {0, 0, 0}},
               Matrix{{0, 0, 0}, {0, 0, 1}, {0, 0, 0}}};
  return rep;
}

}  // namespace testsupport
