#pragma once

#include <string>
#include <vector>

#include "invlag/expr.hpp"
#include "invlag/lie_algebra.hpp"
#include "invlag/region.hpp"

namespace invlag {

using ExprMatrix = std::vector<std::vector<Expr>>;  // [row][col]

/// An invariant second-order system reduced to the Lie algebra:
/// the vector field gamma = gamma^i d/dw^i on g.
struct ReducedSODE {
  LieAlgebra alg;
  std::vector<Expr> gamma;  // gamma[i-1] = gamma^i
  ParamMap params;

  int dim() const { return alg.dim(); }
  /// gamma with parameters substituted.
  std::vector<Expr> gamma_substituted() const;
  /// Directional derivative gamma(f) = gamma^i df/dw^i.
  Expr apply_gamma(const Expr& f) const;
};

ReducedSODE canonical_connection(const LieAlgebra& alg);

/// Connection coefficients lambda^k_i = -1/2 (d gamma^k / d w^i - w^j C^k_{ji}),
/// returned as lambda[k-1][i-1].
ExprMatrix compute_lambda(const ReducedSODE& sode);

/// psi^i_j = 1/2 (d gamma^i / d w^j + C^i_{kj} w^k), returned as psi[i-1][j-1].
ExprMatrix compute_psi(const ReducedSODE& sode);

enum class PhiMethod { Direct, Civilized };

/// Jacobi endomorphism phi^l_j, stored phi[l-1][j-1]: the coefficient of E_l in
/// Phi(E_j). Both formulas produce the same tensor; Direct expands gamma's
/// second derivatives, Civilized is written in terms of psi.
ExprMatrix compute_phi(const ReducedSODE& sode, PhiMethod method);

/// Computes phi by both formulas and checks their difference with is_zero on
/// the given region; returns the civilized form. Throws std::logic_error when
/// the cross-check fails.
ExprMatrix compute_phi_checked(const ReducedSODE& sode, const Region& region, double tol);

struct BracketReport {
  bool ok = true;
  std::string message;
  std::vector<std::string> sample_brackets;  // human-readable table lines
};

/// Structural self-test of the algebroid presentation on basis sections:
/// [[e_i,e_j]] = C^k_{ij} e_k, [[e_i,W_j]] = C^k_{ij} W_k, [[W_i,W_j]] = 0,
/// plus the Jacobi identity of the combined 2n-dimensional table.
BracketReport verify_basis_brackets(const LieAlgebra& alg);

}  // namespace invlag
