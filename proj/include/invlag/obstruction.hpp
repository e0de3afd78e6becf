#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "invlag/cohomology.hpp"
#include "invlag/helmholtz.hpp"
#include "invlag/reduced_geometry.hpp"

namespace invlag {

struct LagrangianCandidate {
  Expr l;
  std::optional<Region> validity;  // region where l is defined and regular
};

/// Euler-Poincare defect V_i = gamma^k d2l/dw^i dw^k - C^l_{ki} w^k dl/dw^l.
/// The system is of EP type for l exactly when V = 0.
std::vector<Expr> ep_vector(const ReducedSODE& sode, const Expr& l);

/// Everything the obstruction analysis extracts from a multiplier that passed the
/// Helmholtz conditions.
struct ObstructionData {
  std::vector<Expr> V;
  Cochain1 nu;         // V at the origin
  Cochain2 mu;         // first derivatives of V at the origin, mu_{ji} = dV_i/dw^j
  ExprMatrix chi;      // chi_ij = psi^l_i k_jl - psi^l_j k_il
  bool affine_ok = false;    // V - (mu_{ji} w^j + nu_i) vanishes on the region
  bool cocycle_ok = false;   // nu_l C^l_{ij} = 0 and d2(mu) = 0
  bool chi_ok = false;       // chi_ij - mu_ij - C^k_ij dl/dw^k vanishes on the region
  bool exact = true;         // all extracted constants snapped to rationals
  bool extracted_at_origin = true;  // false: affine fit over region samples
  std::string detail;  // human-readable notes (snap failures, fit residuals)

  ObstructionData() : mu(0) {}
};

struct HelmholtzFailure {
  std::string condition;  // which reduced Helmholtz condition failed
  CheckReport report;
};

/// Runs the Helmholtz check on Hessian(l) first (failure aborts), then
/// extracts nu, mu, verifies affinity of V, the cocycle conditions, and the
/// chi cross-check.
std::variant<ObstructionData, HelmholtzFailure> extract_obstructions(
    const ReducedSODE& sode, const Expr& l, const Region& region, double tol);

struct Corrected {
  std::vector<Rational> theta;
  std::vector<std::vector<Rational>> theta_freedom;
  Expr corrected;  // l' = l + theta_k w^k, EP-verified on the region
};
struct Obstructed {
  std::string cohomology_class;  // "H1" or "H2"
  std::string detail;            // the nonzero class representative
};

/// nu != 0 -> Obstructed(H1); mu not a coboundary -> Obstructed(H2);
/// otherwise the corrected Lagrangian, post-verified with ep_vector == 0.
std::variant<Corrected, Obstructed> correct_lagrangian(const ReducedSODE& sode, const Expr& l,
                                                       const ObstructionData& data,
                                                       const Region& region, double tol);

// decide: the full pipeline.

struct LagrangianFound {
  Expr lagrangian;
  ObstructionData obstructions;
  std::string note;
};
struct NoGoSingular {
  std::string detail;
};
struct CheckFailed {
  std::string condition;
  CheckReport report;
};

using DecideVerdict = std::variant<LagrangianFound, NoGoSingular, Obstructed, CheckFailed>;

/// Input to decide: a candidate Lagrangian, an explicit polynomial
/// multiplier, or a polynomial ansatz search of the given degree.
struct FromLagrangian { Expr l; };
struct FromMultiplier { Multiplier k; };
struct FromAnsatz { int degree = 0; };
using DecideSource = std::variant<FromLagrangian, FromMultiplier, FromAnsatz>;

DecideVerdict decide(const ReducedSODE& sode, const DecideSource& source, const Region& region,
                     double tol);

std::string verdict_name(const DecideVerdict& v);

}  // namespace invlag
