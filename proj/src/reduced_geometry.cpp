#include "invlag/reduced_geometry.hpp"

#include <sstream>
#include <stdexcept>

namespace invlag {

std::vector<Expr> ReducedSODE::gamma_substituted() const {
  std::vector<Expr> out;
  out.reserve(gamma.size());
  for (const auto& g : gamma) out.push_back(g.substitute_params(params));
  return out;
}

Expr ReducedSODE::apply_gamma(const Expr& f) const {
  std::vector<Expr> terms;
  for (int i = 1; i <= dim(); ++i) {
    terms.push_back(Expr::product({gamma[i - 1], f.differentiate(i)}));
  }
  return Expr::sum(std::move(terms));
}

ReducedSODE canonical_connection(const LieAlgebra& alg) {
  std::vector<Expr> zero(alg.dim(), Expr::constant(0L));
  return ReducedSODE{alg, std::move(zero), {}};
}

namespace {

Expr half() { return Expr::constant(Rational(1, 2)); }

Expr c_expr(const Rational& c) { return Expr::constant(c); }

}  // namespace

ExprMatrix compute_lambda(const ReducedSODE& sode) {
  const int n = sode.dim();
  const auto& alg = sode.alg;
  ExprMatrix lambda(n, std::vector<Expr>(n));
  for (int k = 1; k <= n; ++k) {
    for (int i = 1; i <= n; ++i) {
      // lambda^k_i = -1/2 (d gamma^k/d w^i - w^j C^k_{ji})
      std::vector<Expr> bracket_terms;
      for (int j = 1; j <= n; ++j) {
        if (!alg.c(k, j, i).is_zero())
          bracket_terms.push_back(Expr::product({c_expr(alg.c(k, j, i)), Expr::variable(j)}));
      }
      Expr inner = Expr::difference(sode.gamma[k - 1].differentiate(i),
                                    Expr::sum(std::move(bracket_terms)));
      lambda[k - 1][i - 1] = Expr::product({Expr::constant(Rational(-1, 2)), inner});
    }
  }
  return lambda;
}

ExprMatrix compute_psi(const ReducedSODE& sode) {
  const int n = sode.dim();
  const auto& alg = sode.alg;
  ExprMatrix psi(n, std::vector<Expr>(n));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      // psi^i_j = 1/2 (d gamma^i/d w^j + C^i_{kj} w^k)
      std::vector<Expr> terms{sode.gamma[i - 1].differentiate(j)};
      for (int k = 1; k <= n; ++k) {
        if (!alg.c(i, k, j).is_zero())
          terms.push_back(Expr::product({c_expr(alg.c(i, k, j)), Expr::variable(k)}));
      }
      psi[i - 1][j - 1] = Expr::product({half(), Expr::sum(std::move(terms))});
    }
  }
  return psi;
}

namespace {

ExprMatrix compute_phi_direct(const ReducedSODE& sode) {
  const int n = sode.dim();
  const auto& alg = sode.alg;
  ExprMatrix phi(n, std::vector<Expr>(n));
  for (int l = 1; l <= n; ++l) {
    for (int j = 1; j <= n; ++j) {
      std::vector<Expr> terms;
      for (int i = 1; i <= n; ++i) {
        // 1/2 gamma^i d^2 gamma^l / dw^i dw^j
        terms.push_back(Expr::product({half(), sode.gamma[i - 1],
                                       sode.gamma[l - 1].differentiate(j).differentiate(i)}));
        // 1/2 gamma^i C^l_{ij}
        if (!alg.c(l, i, j).is_zero())
          terms.push_back(Expr::product({half(), c_expr(alg.c(l, i, j)), sode.gamma[i - 1]}));
        // -1/4 dgamma^i/dw^j dgamma^l/dw^i
        terms.push_back(Expr::product({Expr::constant(Rational(-1, 4)),
                                       sode.gamma[i - 1].differentiate(j),
                                       sode.gamma[l - 1].differentiate(i)}));
        for (int k = 1; k <= n; ++k) {
          // -3/4 C^k_{ij} w^i dgamma^l/dw^k
          if (!alg.c(k, i, j).is_zero())
            terms.push_back(Expr::product({Expr::constant(Rational(-3, 4)),
                                           c_expr(alg.c(k, i, j)), Expr::variable(i),
                                           sode.gamma[l - 1].differentiate(k)}));
          // +1/4 w^i C^l_{ik} dgamma^k/dw^j
          if (!alg.c(l, i, k).is_zero())
            terms.push_back(Expr::product({Expr::constant(Rational(1, 4)),
                                           c_expr(alg.c(l, i, k)), Expr::variable(i),
                                           sode.gamma[k - 1].differentiate(j)}));
        }
      }
      // -1/4 w^m w^n C^k_{mj} C^l_{nk}
      for (int m = 1; m <= n; ++m) {
        for (int nn = 1; nn <= n; ++nn) {
          for (int k = 1; k <= n; ++k) {
            Rational coeff = alg.c(k, m, j) * alg.c(l, nn, k);
            if (!coeff.is_zero())
              terms.push_back(Expr::product({Expr::constant(Rational(-1, 4) * coeff),
                                             Expr::variable(m), Expr::variable(nn)}));
          }
        }
      }
      phi[l - 1][j - 1] = Expr::sum(std::move(terms));
    }
  }
  return phi;
}

ExprMatrix compute_phi_civilized(const ReducedSODE& sode) {
  const int n = sode.dim();
  const auto& alg = sode.alg;
  ExprMatrix psi = compute_psi(sode);
  ExprMatrix phi(n, std::vector<Expr>(n));
  for (int l = 1; l <= n; ++l) {
    for (int j = 1; j <= n; ++j) {
      // phi^l_j = gamma(psi^l_j) - w^k C^i_{kj} psi^l_i + w^k C^l_{ki} psi^i_j - psi^k_j psi^l_k
      std::vector<Expr> terms{sode.apply_gamma(psi[l - 1][j - 1])};
      for (int k = 1; k <= n; ++k) {
        for (int i = 1; i <= n; ++i) {
          if (!alg.c(i, k, j).is_zero())
            terms.push_back(Expr::product({c_expr(-alg.c(i, k, j)), Expr::variable(k),
                                           psi[l - 1][i - 1]}));
          if (!alg.c(l, k, i).is_zero())
            terms.push_back(Expr::product({c_expr(alg.c(l, k, i)), Expr::variable(k),
                                           psi[i - 1][j - 1]}));
        }
        terms.push_back(Expr::product({Expr::constant(-1L), psi[k - 1][j - 1],
                                       psi[l - 1][k - 1]}));
      }
      phi[l - 1][j - 1] = Expr::sum(std::move(terms));
    }
  }
  return phi;
}

}  // namespace

ExprMatrix compute_phi(const ReducedSODE& sode, PhiMethod method) {
  return method == PhiMethod::Direct ? compute_phi_direct(sode) : compute_phi_civilized(sode);
}

ExprMatrix compute_phi_checked(const ReducedSODE& sode, const Region& region, double tol) {
  ExprMatrix direct = compute_phi_direct(sode);
  ExprMatrix civilized = compute_phi_civilized(sode);
  const int n = sode.dim();
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) {
      Expr diff = Expr::difference(direct[l][j], civilized[l][j]);
      ZeroVerdict v = is_zero(diff, region, tol, sode.params);
      if (!v.is_zero()) {
        std::ostringstream msg;
        msg << "phi cross-check failed at entry (" << l + 1 << "," << j + 1
            << "): residual " << v.witness_value;
        throw std::logic_error(msg.str());
      }
    }
  }
  return civilized;
}

BracketReport verify_basis_brackets(const LieAlgebra& alg) {
  const int n = alg.dim();
  // Combined table on the 2n basis sections (e_1..e_n, W_1..W_n):
  //   [[e_i, e_j]] = C^k_{ij} e_k, [[e_i, W_j]] = C^k_{ij} W_k, [[W_i, W_j]] = 0.
  std::vector<StructureTriple> full;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      for (int k = 1; k <= n; ++k) {
        const Rational& c = alg.c(k, i, j);
        if (c.is_zero()) continue;
        full.push_back({i, j, k, c});                // e-e -> e (loop covers both orders)
        full.push_back({i, n + j, n + k, c});        // e-W -> W
        full.push_back({n + j, i, n + k, -c});       // W-e, antisymmetric counterpart
      }
    }
  }
  LieAlgebra combined = LieAlgebra::from_full_table(2 * n, {}, full);
  AlgebraValidation val = combined.validate();
  BracketReport report;
  if (!val.ok) {
    report.ok = false;
    report.message = "combined basis-section table fails: " + val.message;
    return report;
  }
  // Table lines for the report.
  auto section_name = [&](int idx) {
    return idx <= n ? "e" + std::to_string(idx) : "W" + std::to_string(idx - n);
  };
  for (int i = 1; i <= 2 * n; ++i) {
    for (int j = i + 1; j <= 2 * n; ++j) {
      std::ostringstream line;
      bool any = false;
      for (int k = 1; k <= 2 * n; ++k) {
        const Rational& c = combined.c(k, i, j);
        if (c.is_zero()) continue;
        if (any) line << " + ";
        if (c != Rational(1)) line << c.str() << "*";
        line << section_name(k);
        any = true;
      }
      if (any) {
        report.sample_brackets.push_back("[" + section_name(i) + "," + section_name(j) +
                                         "] = " + line.str());
      }
    }
  }
  return report;
}

}  // namespace invlag
