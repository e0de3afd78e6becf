#pragma once

#include <optional>
#include <string>
#include <vector>

#include "invlag/poly.hpp"
#include "invlag/reduced_geometry.hpp"
#include "invlag/region.hpp"

namespace invlag {

/// Symmetric multiplier-matrix candidate (k_ij); only i <= j is stored.
class Multiplier {
public:
  explicit Multiplier(int dim)
      : n_(dim), upper_(static_cast<size_t>(dim) * (dim + 1) / 2, Expr::constant(0L)) {}

  static Multiplier from_hessian(const Expr& l, int dim);

  int dim() const { return n_; }
  const Expr& entry(int i, int j) const { return upper_[idx(i, j)]; }
  void set(int i, int j, Expr e) { upper_[idx(i, j)] = std::move(e); }

  /// Determinant as an expression (cofactor expansion).
  Expr determinant() const;

  bool all_polynomial(const ParamMap& params) const;

private:
  size_t idx(int i, int j) const {
    if (i > j) std::swap(i, j);
    // row-major upper triangle, 1-based: row r holds n-r+1 entries
    return static_cast<size_t>(i - 1) * (n_ + 1) - static_cast<size_t>(i * (i - 1)) / 2 +
           (j - i);
  }
  int n_;
  std::vector<Expr> upper_;
};

/// Hessian of a scalar expression as a Multiplier (symmetric by Schwarz).
Multiplier hessian(const Expr& l, int dim);

/// nabla-condition residual N_ij = gamma^k dk_ij/dw^k - k_kj lambda^k_i - k_ik lambda^k_j.
ExprMatrix nabla_residual(const ReducedSODE& sode, const Multiplier& k);

/// phi-condition residual R_jk = k_ij phi^i_k - k_ik phi^i_j (skew in j,k).
ExprMatrix phi_residual(const ReducedSODE& sode, const Multiplier& k);
ExprMatrix phi_residual_with(const ExprMatrix& phi, const Multiplier& k);

/// Closure residual T_ijl = dk_ij/dw^l - dk_lj/dw^i, returned as [i][j][l].
std::vector<ExprMatrix> closure_residual(const Multiplier& k);

enum class Regularity { Regular, Singular };

struct RegularityVerdict {
  Regularity kind = Regularity::Regular;
  bool identically_zero = false;               // det vanishes as a polynomial
  std::optional<std::vector<double>> witness;  // point where det is (near) zero
  double min_abs_det = 0.0;
};

/// Aggregate report for the reduced Helmholtz conditions.
struct CheckReport {
  ZeroVerdict nabla, phi, closure;
  RegularityVerdict regularity;
  bool symmetric = true;  // structural, always true for Multiplier
  bool gamma_vanishes_at_origin = true;
  std::string warning;  // set when gamma(0) != 0
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0.0;

  bool passed() const {
    return symmetric && nabla.is_zero() && phi.is_zero() && closure.is_zero() &&
           regularity.kind == Regularity::Regular;
  }
  /// Name of the first failing condition, empty when passed.
  std::string failing_condition() const;
};

/// Runs all five reduced Helmholtz conditions on the region.
CheckReport check_multiplier(const ReducedSODE& sode, const Multiplier& k,
                             const Region& region, double tol);

/// Solution family of the polynomial multiplier ansatz.
struct AnsatzFamily {
  int dim = 0;
  int degree = 0;
  std::vector<std::pair<int, int>> slots;   // (i,j), i <= j
  std::vector<Monomial> monomials;          // per-slot monomial basis
  std::vector<std::vector<Rational>> basis; // nullspace generators, length slots*monomials
  std::vector<bool> generator_det_zero;     // det identically zero, per generator
  bool generic_det_zero = false;            // det of a pseudo-random combination
  std::vector<Rational> generic_weights;

  int family_dim() const { return static_cast<int>(basis.size()); }
  Multiplier materialize(const std::vector<Rational>& coeffs) const;
  Multiplier generator(int index) const { return materialize(basis.at(index)); }
  Multiplier generic_member() const;
  /// Index of a generator with non-vanishing determinant, or -1.
  int regular_generator() const;
  /// Legend entry "(i,j) w^m" for coefficient position t.
  std::string legend(size_t t) const;
};

/// Imposes nabla, phi, closure and symmetry as exact polynomial identities on
/// entries of total degree <= degree; gamma must be polynomial after
/// parameter substitution. Throws std::invalid_argument otherwise.
AnsatzFamily solve_ansatz(const ReducedSODE& sode, int degree);

struct ClosureViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotPolynomialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Potential of a closed symmetric polynomial multiplier:
/// l(w) = integral_0^1 (1-s) w^i w^j k_ij(sw) ds, exactly per monomial.
/// Hessian(l) = k, l(0) = 0, grad l(0) = 0.
Expr recover_potential(const Multiplier& k, const ParamMap& params = {});

}  // namespace invlag
