#pragma once

#include <optional>
#include <string>
#include <vector>

#include "invlag/obstruction.hpp"
#include "invlag/reduced_geometry.hpp"

namespace invlag {

using Matrix = std::vector<std::vector<double>>;  // dense row-major

/// Faithful matrix representation of the algebra: [B_i, B_j] = C^k_{ij} B_k.
struct MatrixRep {
  int m = 0;                 // representation dimension
  std::vector<Matrix> basis; // one m x m matrix per algebra basis element

  /// Verifies the commutator relations entrywise to `tol` (default 1e-12).
  void validate(const LieAlgebra& alg, double tol = 1e-12) const;
};

struct Trajectory {
  double dt = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> w;      // samples of w(t)
  std::vector<std::vector<double>> w_dot;  // gamma(w) at the samples (for interpolation)
  std::vector<double> energy;              // present when a Lagrangian was supplied
};

struct TrajectoryDomainError : std::runtime_error {
  double time_reached;
  TrajectoryDomainError(const std::string& msg, double t)
      : std::runtime_error(msg), time_reached(t) {}
};

/// Is the system of Euler-Poincare type for l? Tests every component of the
/// defect vector V on the region.
ZeroVerdict ep_check(const ReducedSODE& sode, const Expr& l, const Region& region, double tol);

/// Solves k_ij gamma^j = C^k_{mi} w^m dl/dw^k for gamma symbolically; only
/// available when the Hessian of l is constant and invertible.
std::optional<std::vector<Expr>> derive_sode_symbolic(const LieAlgebra& alg, const Expr& l,
                                                      const ParamMap& params = {});

/// Same system solved numerically at one point; throws on singular Hessian.
std::vector<double> derive_sode_at(const LieAlgebra& alg, const Expr& l,
                                   const std::vector<double>& point,
                                   const ParamMap& params = {});

/// Energy E = w^i dl/dw^i - l.
Expr energy(const Expr& l, int dim);

/// Classical fixed-step 4th-order integration of w' = gamma(w).
Trajectory integrate(const ReducedSODE& sode, const std::vector<double>& w0, double dt,
                     int steps, const std::optional<Expr>& l = std::nullopt);

/// Reconstruction g' = g (w^i(t) B_i) along a stored trajectory; w(t) between
/// grid points is cubic Hermite using the stored derivatives.
std::vector<Matrix> reconstruct(const MatrixRep& rep, const Trajectory& traj, const Matrix& g0);

// Small dense helpers shared with the tests and the CLI.
Matrix mat_identity(int m);
Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_add(const Matrix& a, const Matrix& b);
Matrix mat_scale(const Matrix& a, double s);
double mat_max_abs_diff(const Matrix& a, const Matrix& b);
double mat_det(const Matrix& a);

/// CSV export: t, w1..wn[, energy][, g11..gmm row-major].
std::string trajectory_csv(const Trajectory& traj,
                           const std::vector<Matrix>* group_samples = nullptr);

}  // namespace invlag
