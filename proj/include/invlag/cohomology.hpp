#pragma once

#include <optional>
#include <vector>

#include "invlag/lie_algebra.hpp"
#include "invlag/rat_matrix.hpp"

namespace invlag {

/// 1-cochain: a linear map g -> R with components nu_i.
struct Cochain1 {
  std::vector<Rational> nu;
  bool is_zero() const;
};

/// Skew 2-cochain mu_{ij} = -mu_{ji}; stored densely, skewness enforced.
class Cochain2 {
public:
  explicit Cochain2(int dim) : n_(dim), entries_(static_cast<size_t>(dim) * dim) {}
  int dim() const { return n_; }
  const Rational& at(int i, int j) const { return entries_[idx(i, j)]; }
  void set(int i, int j, const Rational& v);  // also sets (j,i) = -v
  bool is_zero() const;

private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i - 1) * n_ + (j - 1); }
  int n_;
  std::vector<Rational> entries_;
};

/// Totally antisymmetric 3-cochain, stored for i<j<k.
struct Cochain3 {
  int dim;
  std::vector<Rational> entries;  // ordered by (i<j<k) lexicographically
  bool is_zero() const;
};

/// (d nu)_{ij} = -nu_l C^l_{ij}; nu is a cocycle iff nu_l C^l_{ij} = 0.
Cochain2 d1(const LieAlgebra& alg, const Cochain1& nu);

/// (d mu)_{ijk} = mu_{il} C^l_{jk} + mu_{jl} C^l_{ki} + mu_{kl} C^l_{ij}.
/// With the d1 sign above, d2(d1(nu)) = 0 by the Jacobi identity.
Cochain3 d2(const LieAlgebra& alg, const Cochain2& mu);

/// (dim H^1, dim H^2) with trivial real coefficients, computed exactly.
std::pair<int, int> cohomology_dims(const LieAlgebra& alg);

struct CoboundarySolution {
  std::vector<Rational> theta;                    // theta_k C^k_{ij} = mu_{ij}
  std::vector<std::vector<Rational>> freedom;     // nullspace of the solve
};

/// Solves theta_k C^k_{ij} = mu_{ij}; nullopt when mu is not a coboundary.
std::optional<CoboundarySolution> solve_coboundary(const LieAlgebra& alg, const Cochain2& mu);

}  // namespace invlag
