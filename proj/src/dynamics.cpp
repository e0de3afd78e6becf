#include "invlag/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "invlag/rat_matrix.hpp"

namespace invlag {

Matrix mat_identity(int m) {
  Matrix out(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) out[i][i] = 1.0;
  return out;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  const size_t n = a.size(), p = b[0].size(), inner = b.size();
  Matrix out(n, std::vector<double>(p, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < inner; ++k) {
      double aik = a[i][k];
      if (aik == 0.0) continue;
      for (size_t j = 0; j < p; ++j) out[i][j] += aik * b[k][j];
    }
  }
  return out;
}

Matrix mat_add(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
  }
  return out;
}

Matrix mat_scale(const Matrix& a, double s) {
  Matrix out = a;
  for (auto& row : out) {
    for (auto& v : row) v *= s;
  }
  return out;
}

double mat_max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::fabs(a[i][j] - b[i][j]));
  }
  return m;
}

double mat_det(const Matrix& a) {
  Matrix m = a;
  const int n = static_cast<int>(m.size());
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    }
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      double f = m[r][c] / m[c][c];
      for (int c2 = c; c2 < n; ++c2) m[r][c2] -= f * m[c][c2];
    }
  }
  return det;
}

void MatrixRep::validate(const LieAlgebra& alg, double tol) const {
  const int n = alg.dim();
  if (static_cast<int>(basis.size()) != n)
    throw std::invalid_argument("MatrixRep: need one basis matrix per algebra dimension");
  for (const auto& B : basis) {
    if (static_cast<int>(B.size()) != m)
      throw std::invalid_argument("MatrixRep: matrix size mismatch");
    for (const auto& row : B) {
      if (static_cast<int>(row.size()) != m)
        throw std::invalid_argument("MatrixRep: matrix size mismatch");
    }
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      Matrix comm = mat_add(mat_mul(basis[i - 1], basis[j - 1]),
                            mat_scale(mat_mul(basis[j - 1], basis[i - 1]), -1.0));
      Matrix expected(m, std::vector<double>(m, 0.0));
      for (int k = 1; k <= n; ++k) {
        double c = alg.c(k, i, j).to_double();
        if (c != 0.0) expected = mat_add(expected, mat_scale(basis[k - 1], c));
      }
      double err = mat_max_abs_diff(comm, expected);
      if (err > tol) {
        std::ostringstream msg;
        msg << "MatrixRep: [B_" << i << ",B_" << j << "] deviates from C^k_{" << i << j
            << "} B_k by " << err;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

ZeroVerdict ep_check(const ReducedSODE& sode, const Expr& l, const Region& region, double tol) {
  auto V = ep_vector(sode, l);
  ZeroVerdict acc{ZeroKind::ProvedZero, std::nullopt, 0.0, 0.0, 0};
  for (const auto& component : V) {
    ZeroVerdict v = is_zero(component, region, tol, sode.params);
    if (v.kind == ZeroKind::Nonzero) return v;
    if (v.kind == ZeroKind::SampledZero) acc.kind = ZeroKind::SampledZero;
    acc.max_residual = std::max(acc.max_residual, v.max_residual);
    acc.samples_used = std::max(acc.samples_used, v.samples_used);
  }
  return acc;
}

namespace {

/// Right-hand side r_i = C^k_{mi} w^m dl/dw^k of the EP system k gamma = r.
std::vector<Expr> ep_rhs(const LieAlgebra& alg, const Expr& l) {
  const int n = alg.dim();
  std::vector<Expr> rhs(n);
  for (int i = 1; i <= n; ++i) {
    std::vector<Expr> terms;
    for (int k = 1; k <= n; ++k) {
      for (int m = 1; m <= n; ++m) {
        const Rational& c = alg.c(k, m, i);
        if (!c.is_zero())
          terms.push_back(Expr::product({Expr::constant(c), Expr::variable(m),
                                         l.differentiate(k)}));
      }
    }
    rhs[i - 1] = Expr::sum(std::move(terms));
  }
  return rhs;
}

}  // namespace

std::optional<std::vector<Expr>> derive_sode_symbolic(const LieAlgebra& alg, const Expr& l,
                                                      const ParamMap& params) {
  const int n = alg.dim();
  Multiplier k = hessian(l, n);
  // Constant rational Hessian?
  RatMatrix kc(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      auto p = as_polynomial(k.entry(i, j), n, params);
      if (!p || !p->is_constant()) return std::nullopt;
      kc.at(i - 1, j - 1) = p->constant_term();
    }
  }
  auto rhs = ep_rhs(alg, l);
  // Solve k gamma = rhs by exact inversion: columns of k^{-1} from rref of [k | I].
  RatMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = kc.at(i, j);
    aug.at(i, n + i) = Rational(1);
  }
  RrefResult rr = rref(aug);
  // Invertible iff the pivots are exactly the first n columns.
  bool invertible = static_cast<int>(rr.pivot_cols.size()) == n;
  for (int i = 0; invertible && i < n; ++i) invertible = rr.pivot_cols[i] == i;
  if (!invertible) return std::nullopt;

  std::vector<Expr> gamma(n);
  for (int i = 1; i <= n; ++i) {
    std::vector<Expr> terms;
    for (int j = 1; j <= n; ++j) {
      const Rational& inv_ij = rr.reduced.at(i - 1, n + j - 1);
      if (!inv_ij.is_zero())
        terms.push_back(Expr::product({Expr::constant(inv_ij), rhs[j - 1]}));
    }
    gamma[i - 1] = Expr::sum(std::move(terms));
  }
  return gamma;
}

std::vector<double> derive_sode_at(const LieAlgebra& alg, const Expr& l,
                                   const std::vector<double>& point, const ParamMap& params) {
  const int n = alg.dim();
  Multiplier k = hessian(l, n);
  Matrix km(n, std::vector<double>(n));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) km[i - 1][j - 1] = k.entry(i, j).eval(point, params);
  }
  auto rhs_exprs = ep_rhs(alg, l);
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = rhs_exprs[i].eval(point, params);
  // Gaussian elimination with partial pivoting.
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int rr2 = c + 1; rr2 < n; ++rr2) {
      if (std::fabs(km[rr2][c]) > std::fabs(km[piv][c])) piv = rr2;
    }
    if (std::fabs(km[piv][c]) < 1e-13)
      throw DomainError("derive_sode_at: singular Hessian at the given point");
    std::swap(km[piv], km[c]);
    std::swap(r[piv], r[c]);
    for (int rr2 = 0; rr2 < n; ++rr2) {
      if (rr2 == c) continue;
      double f = km[rr2][c] / km[c][c];
      for (int c2 = c; c2 < n; ++c2) km[rr2][c2] -= f * km[c][c2];
      r[rr2] -= f * r[c];
    }
  }
  for (int i = 0; i < n; ++i) r[i] /= km[i][i];
  return r;
}

Expr energy(const Expr& l, int dim) {
  std::vector<Expr> terms;
  for (int i = 1; i <= dim; ++i) {
    terms.push_back(Expr::product({Expr::variable(i), l.differentiate(i)}));
  }
  terms.push_back(Expr::negate(l));
  return Expr::sum(std::move(terms));
}

Trajectory integrate(const ReducedSODE& sode, const std::vector<double>& w0, double dt,
                     int steps, const std::optional<Expr>& l) {
  if (dt <= 0) throw std::invalid_argument("integrate: dt must be positive");
  const int n = sode.dim();
  if (static_cast<int>(w0.size()) != n)
    throw std::invalid_argument("integrate: w0 dimension mismatch");
  auto gamma = sode.gamma_substituted();
  auto f = [&](const std::vector<double>& w) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = gamma[i].eval(w);
    return out;
  };
  std::optional<Expr> energy_expr;
  if (l) energy_expr = energy(l->substitute_params(sode.params), n);

  Trajectory traj;
  traj.dt = dt;
  std::vector<double> w = w0;
  auto record = [&](double t) {
    for (double v : w) {
      if (!std::isfinite(v)) throw DomainError("integrate: state is no longer finite");
    }
    traj.times.push_back(t);
    traj.w.push_back(w);
    traj.w_dot.push_back(f(w));
    if (energy_expr) traj.energy.push_back(energy_expr->eval(w));
  };
  auto axpy = [&](const std::vector<double>& base, double s, const std::vector<double>& d) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = base[i] + s * d[i];
    return out;
  };
  try {
    record(0.0);
    for (int s = 1; s <= steps; ++s) {
      auto k1 = f(w);
      auto k2 = f(axpy(w, dt / 2, k1));
      auto k3 = f(axpy(w, dt / 2, k2));
      auto k4 = f(axpy(w, dt, k3));
      for (int i = 0; i < n; ++i) {
        w[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      }
      record(s * dt);
    }
  } catch (const DomainError& e) {
    double reached = traj.times.empty() ? 0.0 : traj.times.back();
    throw TrajectoryDomainError(std::string("integrate: ") + e.what(), reached);
  }
  return traj;
}

namespace {

/// Cubic Hermite value of w on [t_k, t_{k+1}] with stored endpoint derivatives.
std::vector<double> hermite_w(const Trajectory& traj, size_t seg, double theta) {
  const auto& w0 = traj.w[seg];
  const auto& w1 = traj.w[seg + 1];
  const auto& d0 = traj.w_dot[seg];
  const auto& d1 = traj.w_dot[seg + 1];
  const double h = traj.dt;
  const double t = theta;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  std::vector<double> out(w0.size());
  for (size_t i = 0; i < w0.size(); ++i) {
    out[i] = h00 * w0[i] + h * h10 * d0[i] + h01 * w1[i] + h * h11 * d1[i];
  }
  return out;
}

}  // namespace

std::vector<Matrix> reconstruct(const MatrixRep& rep, const Trajectory& traj, const Matrix& g0) {
  if (traj.w.empty()) throw std::invalid_argument("reconstruct: empty trajectory");
  if (std::fabs(mat_det(g0)) < 1e-300)
    throw std::invalid_argument("reconstruct: g0 must be invertible");
  const int m = rep.m;
  auto algebra_matrix = [&](const std::vector<double>& w) {
    Matrix out(m, std::vector<double>(m, 0.0));
    for (size_t i = 0; i < rep.basis.size(); ++i) {
      if (w[i] == 0.0) continue;
      out = mat_add(out, mat_scale(rep.basis[i], w[i]));
    }
    return out;
  };
  auto rhs = [&](const Matrix& g, const std::vector<double>& w) {
    return mat_mul(g, algebra_matrix(w));
  };

  std::vector<Matrix> samples;
  samples.reserve(traj.w.size());
  Matrix g = g0;
  samples.push_back(g);
  const double dt = traj.dt;
  for (size_t seg = 0; seg + 1 < traj.w.size(); ++seg) {
    const auto& w_begin = traj.w[seg];
    auto w_half = hermite_w(traj, seg, 0.5);
    const auto& w_end = traj.w[seg + 1];
    Matrix k1 = rhs(g, w_begin);
    Matrix k2 = rhs(mat_add(g, mat_scale(k1, dt / 2)), w_half);
    Matrix k3 = rhs(mat_add(g, mat_scale(k2, dt / 2)), w_half);
    Matrix k4 = rhs(mat_add(g, mat_scale(k3, dt)), w_end);
    Matrix incr = mat_add(mat_add(k1, mat_scale(k2, 2.0)), mat_add(mat_scale(k3, 2.0), k4));
    g = mat_add(g, mat_scale(incr, dt / 6));
    samples.push_back(g);
  }
  return samples;
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<Matrix>* group_samples) {
  std::ostringstream out;
  out.precision(17);
  const int n = traj.w.empty() ? 0 : static_cast<int>(traj.w[0].size());
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",w" << i;
  if (!traj.energy.empty()) out << ",energy";
  if (group_samples && !group_samples->empty()) {
    const auto& g = (*group_samples)[0];
    for (size_t r = 0; r < g.size(); ++r) {
      for (size_t c = 0; c < g[r].size(); ++c) out << ",g" << r + 1 << c + 1;
    }
  }
  out << "\n";
  for (size_t s = 0; s < traj.times.size(); ++s) {
    out << traj.times[s];
    for (int i = 0; i < n; ++i) out << "," << traj.w[s][i];
    if (!traj.energy.empty()) out << "," << traj.energy[s];
    if (group_samples && !group_samples->empty()) {
      for (const auto& row : (*group_samples)[s]) {
        for (double v : row) out << "," << v;
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace invlag
