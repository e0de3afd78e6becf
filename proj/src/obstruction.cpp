#include "invlag/obstruction.hpp"

#include <cmath>
#include <sstream>

namespace invlag {

std::vector<Expr> ep_vector(const ReducedSODE& sode, const Expr& l) {
  const int n = sode.dim();
  const auto& alg = sode.alg;
  std::vector<Expr> V(n);
  for (int i = 1; i <= n; ++i) {
    std::vector<Expr> terms;
    Expr di = l.differentiate(i);
    for (int k = 1; k <= n; ++k) {
      terms.push_back(Expr::product({sode.gamma[k - 1], di.differentiate(k)}));
    }
    for (int m = 1; m <= n; ++m) {
      for (int k = 1; k <= n; ++k) {
        const Rational& c = alg.c(m, k, i);
        if (!c.is_zero())
          terms.push_back(Expr::product({Expr::constant(-c), Expr::variable(k),
                                         l.differentiate(m)}));
      }
    }
    V[i - 1] = Expr::sum(std::move(terms));
  }
  return V;
}

namespace {

constexpr long kSnapMaxDen = 1000000;

/// Snaps a double to a rational; falls back to an exact double->rational
/// conversion (marked inexact) when no small fraction is close enough.
std::pair<Rational, bool> snap_constant(double x, double tol) {
  if (auto r = Rational::snap(x, kSnapMaxDen, tol)) return {*r, true};
  if (!std::isfinite(x)) return {Rational(0), false};
  mpq_class q(x);
  return {Rational(q), false};
}

bool origin_in_region(const Region& region, int dim, const ParamMap& params) {
  std::vector<double> origin(dim, 0.0);
  for (const auto& c : region.constraints) {
    double v;
    try {
      v = c.expr.eval(origin, params);
    } catch (const EvalError&) {
      return false;
    }
    if (c.positive ? v <= region.margin : v >= -region.margin) return false;
  }
  if (!region.box.empty()) {
    for (const auto& [lo, hi] : region.box) {
      if (lo > 0.0 || hi < 0.0) return false;
    }
  }
  return true;
}

/// Least-squares affine fit V(w) ~ c0 + c_j w^j over the sample points.
/// Returns n+1 coefficients (c0, c_1..c_n).
std::vector<double> affine_fit(const std::vector<std::vector<double>>& points,
                               const std::vector<double>& values, int dim) {
  const int m = dim + 1;
  std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
  std::vector<double> atb(m, 0.0);
  for (size_t s = 0; s < points.size(); ++s) {
    std::vector<double> row(m);
    row[0] = 1.0;
    for (int j = 0; j < dim; ++j) row[j + 1] = points[s][j];
    for (int a = 0; a < m; ++a) {
      atb[a] += row[a] * values[s];
      for (int b = 0; b < m; ++b) ata[a][b] += row[a] * row[b];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::fabs(ata[r][col]) > std::fabs(ata[piv][col])) piv = r;
    }
    std::swap(ata[piv], ata[col]);
    std::swap(atb[piv], atb[col]);
    double d = ata[col][col];
    if (std::fabs(d) < 1e-14) throw std::runtime_error("affine_fit: degenerate sample set");
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      double f = ata[r][col] / d;
      for (int c2 = col; c2 < m; ++c2) ata[r][c2] -= f * ata[col][c2];
      atb[r] -= f * atb[col];
    }
  }
  std::vector<double> x(m);
  for (int a = 0; a < m; ++a) x[a] = atb[a] / ata[a][a];
  return x;
}

}  // namespace

std::variant<ObstructionData, HelmholtzFailure> extract_obstructions(const ReducedSODE& sode,
                                                                     const Expr& l,
                                                                     const Region& region,
                                                                     double tol) {
  const int n = sode.dim();
  const auto& alg = sode.alg;
  Multiplier k = hessian(l, n);
  CheckReport check = check_multiplier(sode, k, region, tol);
  if (!check.passed()) return HelmholtzFailure{check.failing_condition(), check};

  ObstructionData data;
  data.mu = Cochain2(n);
  data.V = ep_vector(sode, l);
  std::ostringstream detail;

  // dV_i/dw^j + dV_j/dw^i = 0 is the nabla condition in disguise; assert it.
  bool dv_symmetry_ok = true;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      Expr sym = Expr::sum({data.V[i - 1].differentiate(j), data.V[j - 1].differentiate(i)});
      ZeroVerdict v = is_zero(sym, region, tol, sode.params);
      if (!v.is_zero()) {
        dv_symmetry_ok = false;
        detail << "symmetric part of dV is nonzero at (" << i << "," << j << "); ";
      }
    }
  }

  // Extract nu_i = V_i(0) and A[j][i] = dV_i/dw^j (0), at the origin when the
  // region allows it, otherwise from an affine fit over the region samples.
  std::vector<double> nu_raw(n, 0.0);
  std::vector<std::vector<double>> A_raw(n, std::vector<double>(n, 0.0));
  bool at_origin = origin_in_region(region, n, sode.params);
  if (at_origin) {
    std::vector<double> origin(n, 0.0);
    try {
      for (int i = 1; i <= n; ++i) {
        nu_raw[i - 1] = data.V[i - 1].eval(origin, sode.params);
        for (int j = 1; j <= n; ++j) {
          A_raw[j - 1][i - 1] = data.V[i - 1].differentiate(j).eval(origin, sode.params);
        }
      }
    } catch (const EvalError&) {
      at_origin = false;
    }
  }
  if (!at_origin) {
    data.extracted_at_origin = false;
    auto points = sample_region(region, n, sode.params);
    for (int i = 1; i <= n; ++i) {
      std::vector<std::vector<double>> usable;
      std::vector<double> values;
      for (const auto& p : points) {
        try {
          double v = data.V[i - 1].eval(p, sode.params);
          usable.push_back(p);
          values.push_back(v);
        } catch (const EvalError&) {
        }
      }
      if (usable.size() < static_cast<size_t>(n + 2))
        throw SamplerExhausted("extract_obstructions: not enough usable samples for the fit");
      auto fit = affine_fit(usable, values, n);
      nu_raw[i - 1] = fit[0];
      for (int j = 1; j <= n; ++j) A_raw[j - 1][i - 1] = fit[j];
    }
    detail << "nu/mu from affine fit over " << region.samples << " samples; ";
  }

  // Snap to rationals.
  data.nu.nu.resize(n);
  for (int i = 0; i < n; ++i) {
    auto [r, ok] = snap_constant(nu_raw[i], tol);
    data.nu.nu[i] = r;
    if (!ok) {
      data.exact = false;
      detail << "nu_" << i + 1 << " did not snap to a small rational; ";
    }
  }
  for (int p = 1; p <= n; ++p) {
    for (int q = p + 1; q <= n; ++q) {
      // mu_{pq} = dV_q/dw^p; its skew counterpart must agree.
      auto [r, ok] = snap_constant(A_raw[p - 1][q - 1], tol);
      auto [r2, ok2] = snap_constant(A_raw[q - 1][p - 1], tol);
      if (!(ok && ok2)) {
        data.exact = false;
        detail << "mu_" << p << q << " did not snap; ";
      }
      if (r2 != -r) {
        // Tolerate float asymmetry only below tol; otherwise mark inexact.
        if (std::fabs(A_raw[p - 1][q - 1] + A_raw[q - 1][p - 1]) >
            tol * (1.0 + std::fabs(A_raw[p - 1][q - 1]))) {
          data.exact = false;
          detail << "mu_" << p << q << " not skew within tolerance; ";
        }
      }
      data.mu.set(p, q, r);
    }
  }

  // Global affinity of V: V_i - (mu_{ji} w^j + nu_i) == 0 on the region.
  data.affine_ok = dv_symmetry_ok;
  for (int i = 1; i <= n; ++i) {
    std::vector<Expr> model{Expr::constant(data.nu.nu[i - 1])};
    for (int j = 1; j <= n; ++j) {
      const Rational& muji = data.mu.at(j, i);
      if (!muji.is_zero())
        model.push_back(Expr::product({Expr::constant(muji), Expr::variable(j)}));
    }
    Expr residual = Expr::difference(data.V[i - 1], Expr::sum(std::move(model)));
    ZeroVerdict v = is_zero(residual, region, tol, sode.params);
    if (!v.is_zero()) {
      data.affine_ok = false;
      detail << "V_" << i << " is not affine (residual " << v.witness_value << "); ";
    }
  }

  // Cocycle conditions: nu_l C^l_{ij} = 0 and the cyclic mu sum. Exact when
  // every constant snapped to a rational; otherwise tested at tolerance.
  data.cocycle_ok = true;
  if (data.exact) {
    for (int i = 1; i <= n && data.cocycle_ok; ++i) {
      for (int j = i + 1; j <= n && data.cocycle_ok; ++j) {
        Rational acc;
        for (int m = 1; m <= n; ++m) acc += data.nu.nu[m - 1] * alg.c(m, i, j);
        if (!acc.is_zero()) {
          data.cocycle_ok = false;
          detail << "nu is not a cocycle at (" << i << "," << j << "); ";
        }
      }
    }
    if (data.cocycle_ok && !d2(alg, data.mu).is_zero()) {
      data.cocycle_ok = false;
      detail << "mu is not a cocycle; ";
    }
  } else {
    double scale = 0;
    for (double v : nu_raw) scale = std::max(scale, std::fabs(v));
    for (const auto& row : A_raw) {
      for (double v : row) scale = std::max(scale, std::fabs(v));
    }
    for (int i = 1; i <= n && data.cocycle_ok; ++i) {
      for (int j = i + 1; j <= n && data.cocycle_ok; ++j) {
        double acc = 0;
        for (int m = 1; m <= n; ++m)
          acc += nu_raw[m - 1] * alg.c(m, i, j).to_double();
        if (std::fabs(acc) > tol * (1.0 + scale)) {
          data.cocycle_ok = false;
          detail << "nu is not a cocycle at (" << i << "," << j << ") [tolerance]; ";
        }
      }
    }
    for (int i = 1; i <= n && data.cocycle_ok; ++i) {
      for (int j = i + 1; j <= n && data.cocycle_ok; ++j) {
        for (int k2 = j + 1; k2 <= n && data.cocycle_ok; ++k2) {
          double acc = 0;
          for (int m = 1; m <= n; ++m) {
            acc += data.mu.at(i, m).to_double() * alg.c(m, j, k2).to_double();
            acc += data.mu.at(j, m).to_double() * alg.c(m, k2, i).to_double();
            acc += data.mu.at(k2, m).to_double() * alg.c(m, i, j).to_double();
          }
          if (std::fabs(acc) > tol * (1.0 + scale)) {
            data.cocycle_ok = false;
            detail << "mu is not a cocycle [tolerance]; ";
          }
        }
      }
    }
  }

  // chi_ij = psi^l_i k_jl - psi^l_j k_il must equal mu_ij + C^k_ij dl/dw^k.
  ExprMatrix psi = compute_psi(sode);
  data.chi.assign(n, std::vector<Expr>(n, Expr::constant(0L)));
  data.chi_ok = true;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      std::vector<Expr> terms;
      for (int m = 1; m <= n; ++m) {
        terms.push_back(Expr::product({psi[m - 1][i - 1], k.entry(j, m)}));
        terms.push_back(Expr::negate(Expr::product({psi[m - 1][j - 1], k.entry(i, m)})));
      }
      data.chi[i - 1][j - 1] = Expr::sum(std::move(terms));
    }
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      std::vector<Expr> rhs{Expr::constant(data.mu.at(i, j))};
      for (int m = 1; m <= n; ++m) {
        const Rational& c = alg.c(m, i, j);
        if (!c.is_zero())
          rhs.push_back(Expr::product({Expr::constant(c), l.differentiate(m)}));
      }
      Expr residual = Expr::difference(data.chi[i - 1][j - 1], Expr::sum(std::move(rhs)));
      ZeroVerdict v = is_zero(residual, region, tol, sode.params);
      if (!v.is_zero()) {
        data.chi_ok = false;
        detail << "chi identity fails at (" << i << "," << j << "); ";
      }
    }
  }

  data.detail = detail.str();
  return data;
}

namespace {

std::string format_cochain1(const Cochain1& nu) {
  std::ostringstream out;
  out << "nu = (";
  for (size_t i = 0; i < nu.nu.size(); ++i) {
    if (i) out << ", ";
    out << nu.nu[i].str();
  }
  out << ")";
  return out.str();
}

std::string format_cochain2(const Cochain2& mu) {
  std::ostringstream out;
  out << "mu:";
  bool any = false;
  for (int i = 1; i <= mu.dim(); ++i) {
    for (int j = i + 1; j <= mu.dim(); ++j) {
      if (mu.at(i, j).is_zero()) continue;
      out << " mu_" << i << j << " = " << mu.at(i, j).str() << ";";
      any = true;
    }
  }
  if (!any) out << " 0";
  return out.str();
}

}  // namespace

std::variant<Corrected, Obstructed> correct_lagrangian(const ReducedSODE& sode, const Expr& l,
                                                       const ObstructionData& data,
                                                       const Region& region, double tol) {
  if (!data.cocycle_ok)
    throw std::invalid_argument("correct_lagrangian: obstruction data lacks cocycle_ok");
  if (!data.nu.is_zero()) {
    return Obstructed{"H1", format_cochain1(data.nu)};
  }
  auto sol = solve_coboundary(sode.alg, data.mu);
  if (!sol) {
    return Obstructed{"H2", format_cochain2(data.mu)};
  }
  std::vector<Expr> terms{l};
  for (int k = 1; k <= sode.dim(); ++k) {
    if (!sol->theta[k - 1].is_zero())
      terms.push_back(Expr::product({Expr::constant(sol->theta[k - 1]), Expr::variable(k)}));
  }
  Expr corrected = Expr::sum(std::move(terms));
  if (!corrected.references_param()) {
    // collect like terms so the reported l' is in expanded normal form
    if (auto p = as_polynomial(corrected, sode.dim())) corrected = p->to_expr();
  }
  // Post-verify: the corrected Lagrangian satisfies the EP equations.
  auto V = ep_vector(sode, corrected);
  for (int i = 0; i < sode.dim(); ++i) {
    ZeroVerdict v = is_zero(V[i], region, tol, sode.params);
    if (!v.is_zero()) {
      std::ostringstream msg;
      msg << "correct_lagrangian: post-verification failed, V_" << i + 1
          << " != 0 at witness (value " << v.witness_value << ")";
      throw std::logic_error(msg.str());
    }
  }
  return Corrected{sol->theta, sol->freedom, corrected};
}

namespace {

DecideVerdict decide_from_lagrangian(const ReducedSODE& sode, const Expr& l,
                                     const Region& region, double tol, std::string note) {
  auto extracted = extract_obstructions(sode, l, region, tol);
  if (std::holds_alternative<HelmholtzFailure>(extracted)) {
    auto& fail = std::get<HelmholtzFailure>(extracted);
    if (fail.condition == "regularity") {
      std::string detail = fail.report.regularity.identically_zero
                               ? "det(k) is identically zero"
                               : "det(k) vanishes on the region";
      return NoGoSingular{detail};
    }
    return CheckFailed{fail.condition, fail.report};
  }
  auto& data = std::get<ObstructionData>(extracted);
  if (!data.affine_ok)
    return CheckFailed{"V-affinity", CheckReport{}};
  if (!data.cocycle_ok)
    return CheckFailed{"cocycle", CheckReport{}};
  auto corrected = correct_lagrangian(sode, l, data, region, tol);
  if (std::holds_alternative<Obstructed>(corrected))
    return std::get<Obstructed>(corrected);
  auto& c = std::get<Corrected>(corrected);
  return LagrangianFound{c.corrected, std::move(data), std::move(note)};
}

}  // namespace

DecideVerdict decide(const ReducedSODE& sode, const DecideSource& source, const Region& region,
                     double tol) {
  if (std::holds_alternative<FromLagrangian>(source)) {
    return decide_from_lagrangian(sode, std::get<FromLagrangian>(source).l, region, tol, "");
  }
  if (std::holds_alternative<FromMultiplier>(source)) {
    const auto& k = std::get<FromMultiplier>(source).k;
    CheckReport check = check_multiplier(sode, k, region, tol);
    if (!check.passed()) {
      if (check.failing_condition() == "regularity") {
        return NoGoSingular{check.regularity.identically_zero
                                ? "det(k) is identically zero"
                                : "det(k) vanishes on the region"};
      }
      return CheckFailed{check.failing_condition(), check};
    }
    Expr l = recover_potential(k, sode.params);
    return decide_from_lagrangian(sode, l, region, tol, "potential recovered from multiplier");
  }
  const int degree = std::get<FromAnsatz>(source).degree;
  AnsatzFamily family = solve_ansatz(sode, degree);
  std::ostringstream note;
  note << "ansatz degree " << degree << ", family dimension " << family.family_dim();
  if (family.family_dim() == 0) {
    return NoGoSingular{"ansatz family is empty (degree " + std::to_string(degree) + ")"};
  }
  if (family.generic_det_zero) {
    return NoGoSingular{"every member of the " + std::to_string(family.family_dim()) +
                        "-dimensional ansatz family (degree " + std::to_string(degree) +
                        ") has identically zero determinant"};
  }
  int gen = family.regular_generator();
  Multiplier k = gen >= 0 ? family.generator(gen) : family.generic_member();
  Expr l = recover_potential(k, sode.params);
  return decide_from_lagrangian(sode, l, region, tol, note.str());
}

std::string verdict_name(const DecideVerdict& v) {
  if (std::holds_alternative<LagrangianFound>(v)) return "LagrangianFound";
  if (std::holds_alternative<NoGoSingular>(v)) return "NoGoSingular";
  if (std::holds_alternative<Obstructed>(v))
    return "Obstructed(" + std::get<Obstructed>(v).cohomology_class + ")";
  return "CheckFailed(" + std::get<CheckFailed>(v).condition + ")";
}

}  // namespace invlag
