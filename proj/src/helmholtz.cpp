#include "invlag/helmholtz.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "invlag/rat_matrix.hpp"

namespace invlag {

Multiplier Multiplier::from_hessian(const Expr& l, int dim) {
  Multiplier k(dim);
  for (int i = 1; i <= dim; ++i) {
    Expr di = l.differentiate(i);
    for (int j = i; j <= dim; ++j) k.set(i, j, di.differentiate(j));
  }
  return k;
}

Multiplier hessian(const Expr& l, int dim) { return Multiplier::from_hessian(l, dim); }

namespace {

Expr det_recursive(const Multiplier& k, std::vector<int> rows, std::vector<int> cols) {
  if (rows.size() == 1) return k.entry(rows[0], cols[0]);
  std::vector<Expr> terms;
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (size_t c = 0; c < cols.size(); ++c) {
    std::vector<int> sub_cols;
    for (size_t t = 0; t < cols.size(); ++t) {
      if (t != c) sub_cols.push_back(cols[t]);
    }
    Expr minor = det_recursive(k, sub_rows, sub_cols);
    Expr signed_entry = Expr::product(
        {Expr::constant(c % 2 == 0 ? 1L : -1L), k.entry(rows[0], cols[c]), minor});
    terms.push_back(std::move(signed_entry));
  }
  return Expr::sum(std::move(terms));
}

}  // namespace

Expr Multiplier::determinant() const {
  std::vector<int> all(n_);
  for (int i = 0; i < n_; ++i) all[i] = i + 1;
  return det_recursive(*this, all, all);
}

bool Multiplier::all_polynomial(const ParamMap& params) const {
  for (int i = 1; i <= n_; ++i) {
    for (int j = i; j <= n_; ++j) {
      if (!as_polynomial(entry(i, j), n_, params)) return false;
    }
  }
  return true;
}

ExprMatrix nabla_residual(const ReducedSODE& sode, const Multiplier& k) {
  const int n = sode.dim();
  ExprMatrix lambda = compute_lambda(sode);
  ExprMatrix out(n, std::vector<Expr>(n));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      std::vector<Expr> terms;
      for (int m = 1; m <= n; ++m) {
        terms.push_back(Expr::product({sode.gamma[m - 1], k.entry(i, j).differentiate(m)}));
        terms.push_back(Expr::negate(Expr::product({k.entry(m, j), lambda[m - 1][i - 1]})));
        terms.push_back(Expr::negate(Expr::product({k.entry(i, m), lambda[m - 1][j - 1]})));
      }
      out[i - 1][j - 1] = Expr::sum(std::move(terms));
    }
  }
  return out;
}

ExprMatrix phi_residual_with(const ExprMatrix& phi, const Multiplier& k) {
  const int n = k.dim();
  ExprMatrix out(n, std::vector<Expr>(n));
  for (int j = 1; j <= n; ++j) {
    for (int m = 1; m <= n; ++m) {
      std::vector<Expr> terms;
      for (int i = 1; i <= n; ++i) {
        terms.push_back(Expr::product({k.entry(i, j), phi[i - 1][m - 1]}));
        terms.push_back(Expr::negate(Expr::product({k.entry(i, m), phi[i - 1][j - 1]})));
      }
      out[j - 1][m - 1] = Expr::sum(std::move(terms));
    }
  }
  return out;
}

ExprMatrix phi_residual(const ReducedSODE& sode, const Multiplier& k) {
  return phi_residual_with(compute_phi(sode, PhiMethod::Civilized), k);
}

std::vector<ExprMatrix> closure_residual(const Multiplier& k) {
  const int n = k.dim();
  std::vector<ExprMatrix> out(n, ExprMatrix(n, std::vector<Expr>(n)));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      for (int l = 1; l <= n; ++l) {
        out[i - 1][j - 1][l - 1] = Expr::difference(k.entry(i, j).differentiate(l),
                                                    k.entry(l, j).differentiate(i));
      }
    }
  }
  return out;
}

std::string CheckReport::failing_condition() const {
  if (!symmetric) return "symmetry";
  if (regularity.kind == Regularity::Singular) return "regularity";
  if (!nabla.is_zero()) return "nabla";
  if (!phi.is_zero()) return "phi";
  if (!closure.is_zero()) return "closure";
  return "";
}

namespace {

ZeroVerdict combine(ZeroVerdict acc, ZeroVerdict v) {
  if (acc.kind == ZeroKind::Nonzero) return acc;
  v.max_residual = std::max(v.max_residual, acc.max_residual);
  v.samples_used = std::max(v.samples_used, acc.samples_used);
  if (v.kind == ZeroKind::Nonzero) return v;
  if (acc.kind == ZeroKind::SampledZero && v.kind == ZeroKind::ProvedZero)
    v.kind = ZeroKind::SampledZero;
  return v;
}

ZeroVerdict matrix_is_zero(const ExprMatrix& m, const Region& region, double tol,
                           const ParamMap& params, bool upper_only) {
  ZeroVerdict acc{ZeroKind::ProvedZero, std::nullopt, 0.0, 0.0, 0};
  for (size_t i = 0; i < m.size(); ++i) {
    for (size_t j = upper_only ? i : 0; j < m[i].size(); ++j) {
      acc = combine(acc, is_zero(m[i][j], region, tol, params));
      if (acc.kind == ZeroKind::Nonzero) return acc;
    }
  }
  return acc;
}

RegularityVerdict check_regularity(const Expr& det, int dim, const Region& region, double tol,
                                   const ParamMap& params) {
  RegularityVerdict v;
  if (auto p = as_polynomial(det, dim, params)) {
    if (p->is_zero()) {
      v.kind = Regularity::Singular;
      v.identically_zero = true;
      return v;
    }
  }
  auto points = sample_region(region, dim, params);
  v.min_abs_det = std::numeric_limits<double>::infinity();
  for (const auto& pt : points) {
    double value, mag;
    try {
      value = det.eval(pt, params);
      mag = det.eval_magnitude(pt, params);
    } catch (const DomainError&) {
      continue;
    }
    double rel = std::fabs(value) / (1.0 + std::fabs(mag));
    v.min_abs_det = std::min(v.min_abs_det, std::fabs(value));
    if (rel <= tol) {
      v.kind = Regularity::Singular;
      v.witness = pt;
      return v;
    }
  }
  return v;
}

}  // namespace

CheckReport check_multiplier(const ReducedSODE& sode, const Multiplier& k,
                             const Region& region, double tol) {
  const int n = sode.dim();
  CheckReport report;
  report.seed = region.seed;
  report.samples = region.samples;
  report.tol = tol;

  // Necessary condition gamma(0) = 0 for a global regular Lagrangian.
  try {
    std::vector<double> origin(n, 0.0);
    for (int i = 0; i < n; ++i) {
      if (std::fabs(sode.gamma[i].eval(origin, sode.params)) > tol) {
        report.gamma_vanishes_at_origin = false;
        report.warning =
            "gamma(0) != 0: the system cannot come from a Lagrangian smooth and "
            "regular near the origin";
        break;
      }
    }
  } catch (const EvalError&) {
    // gamma singular at the origin; the warning stays unset.
  }

  report.nabla = matrix_is_zero(nabla_residual(sode, k), region, tol, sode.params, true);
  ExprMatrix phi = compute_phi_checked(sode, region, tol);
  report.phi = matrix_is_zero(phi_residual_with(phi, k), region, tol, sode.params, true);

  auto closure = closure_residual(k);
  ZeroVerdict cl{ZeroKind::ProvedZero, std::nullopt, 0.0, 0.0, 0};
  for (int i = 1; i <= n && cl.kind != ZeroKind::Nonzero; ++i) {
    for (int j = 1; j <= n && cl.kind != ZeroKind::Nonzero; ++j) {
      for (int l = i + 1; l <= n && cl.kind != ZeroKind::Nonzero; ++l) {
        cl = combine(cl, is_zero(closure[i - 1][j - 1][l - 1], region, tol, sode.params));
      }
    }
  }
  report.closure = cl;

  report.regularity = check_regularity(k.determinant(), n, region, tol, sode.params);
  return report;
}

// ---------------------------------------------------------------------------
// Polynomial ansatz solver.

namespace {

struct PolyMatrix {
  int n;
  std::vector<Poly> entries;  // row-major n*n
  Poly& at(int i, int j) { return entries[static_cast<size_t>(i - 1) * n + (j - 1)]; }
  const Poly& at(int i, int j) const {
    return entries[static_cast<size_t>(i - 1) * n + (j - 1)];
  }
  static PolyMatrix zero(int n) {
    return PolyMatrix{n, std::vector<Poly>(static_cast<size_t>(n) * n, Poly(n))};
  }
};

PolyMatrix to_poly_matrix(const ExprMatrix& m, int dim, const ParamMap& params,
                          const char* what) {
  PolyMatrix out = PolyMatrix::zero(dim);
  for (int i = 1; i <= dim; ++i) {
    for (int j = 1; j <= dim; ++j) {
      auto p = as_polynomial(m[i - 1][j - 1], dim, params);
      if (!p) throw NotPolynomialError(std::string(what) + " is not polynomial");
      out.at(i, j) = *p;
    }
  }
  return out;
}

Poly poly_det(const PolyMatrix& m) {
  const int n = m.n;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i + 1;
  // Cofactor expansion via permutation recursion; fine for the small n here.
  std::function<Poly(std::vector<int>, std::vector<int>)> rec =
      [&](std::vector<int> rows, std::vector<int> cols) -> Poly {
    if (rows.size() == 1) return m.at(rows[0], cols[0]);
    Poly acc(n);
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (size_t c = 0; c < cols.size(); ++c) {
      std::vector<int> sub_cols;
      for (size_t t = 0; t < cols.size(); ++t) {
        if (t != c) sub_cols.push_back(cols[t]);
      }
      Poly term = m.at(rows[0], cols[c]) * rec(sub_rows, sub_cols);
      acc = c % 2 == 0 ? acc + term : acc - term;
    }
    return acc;
  };
  return rec(perm, perm);
}

}  // namespace

Multiplier AnsatzFamily::materialize(const std::vector<Rational>& coeffs) const {
  Multiplier k(dim);
  const size_t nm = monomials.size();
  for (size_t s = 0; s < slots.size(); ++s) {
    Poly p(dim);
    for (size_t m = 0; m < nm; ++m) {
      p.add_term(monomials[m], coeffs.at(s * nm + m));
    }
    k.set(slots[s].first, slots[s].second, p.to_expr());
  }
  return k;
}

Multiplier AnsatzFamily::generic_member() const {
  std::vector<Rational> combo(slots.size() * monomials.size());
  for (size_t b = 0; b < basis.size(); ++b) {
    for (size_t t = 0; t < combo.size(); ++t) combo[t] += generic_weights[b] * basis[b][t];
  }
  return materialize(combo);
}

int AnsatzFamily::regular_generator() const {
  for (size_t b = 0; b < basis.size(); ++b) {
    if (!generator_det_zero[b]) return static_cast<int>(b);
  }
  return -1;
}

std::string AnsatzFamily::legend(size_t t) const {
  const size_t nm = monomials.size();
  const auto& slot = slots[t / nm];
  const Monomial& m = monomials[t % nm];
  std::ostringstream out;
  out << "k" << slot.first << slot.second;
  for (int i = 0; i < dim; ++i) {
    if (m[i] == 0) continue;
    out << "*w" << i + 1;
    if (m[i] > 1) out << "^" << m[i];
  }
  return out.str();
}

AnsatzFamily solve_ansatz(const ReducedSODE& sode, int degree) {
  if (degree < 0) throw std::invalid_argument("solve_ansatz: degree must be >= 0");
  const int n = sode.dim();

  // gamma, lambda, phi as exact polynomials (parameters substituted).
  std::vector<Poly> gamma;
  for (const auto& g : sode.gamma) {
    auto p = as_polynomial(g, n, sode.params);
    if (!p) throw NotPolynomialError("solve_ansatz: gamma is not polynomial");
    gamma.push_back(*p);
  }
  PolyMatrix lambda = to_poly_matrix(compute_lambda(sode), n, sode.params, "lambda");
  PolyMatrix phi = to_poly_matrix(compute_phi(sode, PhiMethod::Civilized), n, sode.params, "phi");
  // both phi formulas must agree exactly on polynomial gamma
  PolyMatrix phi_direct =
      to_poly_matrix(compute_phi(sode, PhiMethod::Direct), n, sode.params, "phi");
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (!(phi.at(i, j) == phi_direct.at(i, j)))
        throw std::logic_error("solve_ansatz: phi formulas disagree");
    }
  }

  AnsatzFamily family;
  family.dim = n;
  family.degree = degree;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) family.slots.emplace_back(i, j);
  }
  family.monomials = monomials_up_to_degree(n, degree);
  const size_t nm = family.monomials.size();
  const size_t unknowns = family.slots.size() * nm;

  // Row key: (condition id, monomial); the residuals are linear in k.
  std::map<std::pair<int, Monomial>, std::map<size_t, Rational>> rows;

  auto emit = [&](int cond_id, const Poly& residual, size_t unknown) {
    for (const auto& [mono, coeff] : residual.terms()) {
      rows[{cond_id, mono}][unknown] = coeff;
    }
  };

  for (size_t u = 0; u < unknowns; ++u) {
    const auto [a, b] = family.slots[u / nm];
    const Monomial& mono = family.monomials[u % nm];
    // k with the single symmetric entry k_ab = k_ba = w^mono.
    PolyMatrix k = PolyMatrix::zero(n);
    k.at(a, b) = Poly::monomial(n, mono, Rational(1));
    if (a != b) k.at(b, a) = Poly::monomial(n, mono, Rational(1));

    int cond = 0;
    // nabla: N_ij for i <= j.
    for (int i = 1; i <= n; ++i) {
      for (int j = i; j <= n; ++j) {
        Poly r(n);
        for (int m = 1; m <= n; ++m) {
          r = r + gamma[m - 1] * k.at(i, j).derivative(m);
          r = r - k.at(m, j) * lambda.at(m, i);
          r = r - k.at(i, m) * lambda.at(m, j);
        }
        emit(cond++, r, u);
      }
    }
    // phi: R_jm for j < m.
    for (int j = 1; j <= n; ++j) {
      for (int m = j + 1; m <= n; ++m) {
        Poly r(n);
        for (int i = 1; i <= n; ++i) {
          r = r + k.at(i, j) * phi.at(i, m);
          r = r - k.at(i, m) * phi.at(i, j);
        }
        emit(cond++, r, u);
      }
    }
    // closure: T_ijl for i < l, all j.
    for (int i = 1; i <= n; ++i) {
      for (int l = i + 1; l <= n; ++l) {
        for (int j = 1; j <= n; ++j) {
          Poly r = k.at(i, j).derivative(l) - k.at(l, j).derivative(i);
          emit(cond++, r, u);
        }
      }
    }
  }

  RatMatrix system(static_cast<int>(rows.size()), static_cast<int>(unknowns));
  int r = 0;
  for (const auto& [key, cols] : rows) {
    for (const auto& [u, coeff] : cols) system.at(r, static_cast<int>(u)) = coeff;
    ++r;
  }
  family.basis = nullspace(system);

  // Regularity analysis: each generator, then a pseudo-random combination.
  SplitMix64 rng(0x5eedULL);
  for (const auto& vec : family.basis) {
    PolyMatrix k = PolyMatrix::zero(n);
    for (size_t u = 0; u < unknowns; ++u) {
      if (vec[u].is_zero()) continue;
      const auto [a, b] = family.slots[u / nm];
      k.at(a, b).add_term(family.monomials[u % nm], vec[u]);
      if (a != b) k.at(b, a).add_term(family.monomials[u % nm], vec[u]);
    }
    family.generator_det_zero.push_back(poly_det(k).is_zero());
  }
  for (size_t b = 0; b < family.basis.size(); ++b)
    family.generic_weights.push_back(rng.next_small_rational());
  if (!family.basis.empty()) {
    PolyMatrix k = PolyMatrix::zero(n);
    for (size_t b = 0; b < family.basis.size(); ++b) {
      for (size_t u = 0; u < unknowns; ++u) {
        Rational c = family.generic_weights[b] * family.basis[b][u];
        if (c.is_zero()) continue;
        const auto [i, j] = family.slots[u / nm];
        k.at(i, j).add_term(family.monomials[u % nm], c);
        if (i != j) k.at(j, i).add_term(family.monomials[u % nm], c);
      }
    }
    family.generic_det_zero = poly_det(k).is_zero();
  } else {
    family.generic_det_zero = true;  // the empty family has no regular member
  }
  return family;
}

Expr recover_potential(const Multiplier& k, const ParamMap& params) {
  const int n = k.dim();
  // Exact closure precondition.
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      for (int l = i + 1; l <= n; ++l) {
        Expr t = Expr::difference(k.entry(i, j).differentiate(l),
                                  k.entry(l, j).differentiate(i));
        auto p = as_polynomial(t, n, params);
        if (!p) throw NotPolynomialError("recover_potential: entries must be polynomial");
        if (!p->is_zero())
          throw ClosureViolation("recover_potential: closure condition fails at (" +
                                 std::to_string(i) + "," + std::to_string(j) + "," +
                                 std::to_string(l) + ")");
      }
    }
  }
  Poly l(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      auto p = as_polynomial(k.entry(i, j), n, params);
      if (!p) throw NotPolynomialError("recover_potential: entries must be polynomial");
      for (const auto& [mono, coeff] : p->terms()) {
        int d = 0;
        for (int e : mono) d += e;
        // integral_0^1 (1-s) s^d ds = 1/((d+1)(d+2))
        Monomial m = mono;
        m[i - 1] += 1;
        m[j - 1] += 1;
        l.add_term(m, coeff / Rational(static_cast<long>(d + 1) * (d + 2)));
      }
    }
  }
  return l.to_expr();
}

}  // namespace invlag
