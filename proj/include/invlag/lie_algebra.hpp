#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "invlag/rational.hpp"

namespace invlag {

/// A structure-constant triple: C^k_{ij} = value.
struct StructureTriple {
  int i, j, k;  // 1-based
  Rational value;
};

struct AlgebraValidation {
  bool ok = true;
  std::string message;                       // empty when ok
  std::optional<std::tuple<int, int, int, int>> offending;  // (i,j,k,m) of first violation
};

/// Finite-dimensional real Lie algebra given by structure constants
/// {E_i, E_j} = C^k_{ij} E_k with rational C^k_{ij}.
class LieAlgebra {
public:
  /// From triples with i < j; antisymmetric counterparts are filled in.
  static LieAlgebra from_triples(int dim, std::vector<std::string> names,
                                 const std::vector<StructureTriple>& triples);
  /// From a full (possibly inconsistent) table; used to validate raw input.
  static LieAlgebra from_full_table(int dim, std::vector<std::string> names,
                                    const std::vector<StructureTriple>& triples);

  int dim() const { return n_; }
  const std::vector<std::string>& names() const { return names_; }

  /// C^k_{ij}, all 1-based.
  const Rational& c(int k, int i, int j) const {
    return table_[idx(k, i, j)];
  }

  /// Antisymmetry and the Jacobi identity, checked exactly.
  AlgebraValidation validate() const;

  /// Bracket of coordinate vectors: {u, v}^k = C^k_{ij} u^i v^j.
  std::vector<Rational> bracket(const std::vector<Rational>& u,
                                const std::vector<Rational>& v) const;

private:
  LieAlgebra(int n, std::vector<std::string> names)
      : n_(n), names_(std::move(names)), table_(static_cast<size_t>(n) * n * n) {}
  size_t idx(int k, int i, int j) const {
    return (static_cast<size_t>(k - 1) * n_ + (i - 1)) * n_ + (j - 1);
  }
  int n_;
  std::vector<std::string> names_;
  std::vector<Rational> table_;
};

// Catalog of the named algebras used by the examples and tests.
LieAlgebra abelian(int dim);
LieAlgebra heisenberg3();   // {E1,E3} = E2
LieAlgebra a4_8();          // {E2,E3}=E1, {E2,E4}=E2, {E3,E4}=-E3
LieAlgebra affine_line();   // {E1,E2} = E2, coordinates (x,y)
/// Sym(2) with {u,v} = uNv - vNu, N = [[0,1],[-1,0]]; the constants are
/// derived from this matrix definition at construction time (the derived
/// bracket is {Ex,Ey} = 2Ex, not the sometimes-quoted 2Ez; see README).
LieAlgebra bloch_iserles_2();

std::optional<LieAlgebra> catalog_algebra(const std::string& name);
std::vector<std::string> catalog_names();

}  // namespace invlag
