#include "doctest.h"

#include "invlag/region.hpp"
#include "support.hpp"

using namespace invlag;
using namespace testsupport;

namespace {

// Three distinct rational parameter assignments cover symbolic-in-parameter
// identities without a full CAS.
const std::vector<std::pair<Rational, Rational>> kParamGrid{
    {Rational(1), Rational(1)}, {Rational(0), Rational(2)}, {Rational(-3, 2), Rational(5, 3)}};

Expr parse_xy(const std::string& text) {
  return parse_expr(text, {"x", "y"}, {"a", "b"});
}

void check_entry(const Expr& got, const std::string& expected, const ParamMap& params) {
  Region region = Region::default_box(2);
  Expr want = parse_xy(expected);
  auto v = is_zero(Expr::difference(got, want), region, 1e-9, params);
  CHECK_MESSAGE(v.kind == ZeroKind::ProvedZero, "expected ", expected);
}

}  // namespace

TEST_CASE("canonical connection: lambda = psi = 1/2 w^j C^k_{ji}") {
  for (const auto& named : catalog_sodes()) {
    ReducedSODE canonical = canonical_connection(named.sode.alg);
    auto lambda = compute_lambda(canonical);
    auto psi = compute_psi(canonical);
    const int n = canonical.dim();
    Region region = Region::default_box(n);
    for (int k = 1; k <= n; ++k) {
      for (int i = 1; i <= n; ++i) {
        std::vector<Expr> expect;
        for (int j = 1; j <= n; ++j) {
          const Rational& c = canonical.alg.c(k, j, i);
          if (!c.is_zero())
            expect.push_back(Expr::product({Expr::constant(c * Rational(1, 2)),
                                            Expr::variable(j)}));
        }
        Expr want = Expr::sum(std::move(expect));
        CHECK(is_zero(Expr::difference(lambda[k - 1][i - 1], want), region, 1e-9, {}).kind ==
              ZeroKind::ProvedZero);
        CHECK(is_zero(Expr::difference(psi[k - 1][i - 1], want), region, 1e-9, {}).kind ==
              ZeroKind::ProvedZero);
      }
    }
  }
}

TEST_CASE("affine line: nabla coefficients match the printed connection") {
  for (const auto& [a, b] : kParamGrid) {
    ReducedSODE sode = affine_line_sode(a, b);
    auto lambda = compute_lambda(sode);
    // nabla E_x = (-bx + 1/2(a-1)y) E_y and nabla E_y = 1/2(a+1)x E_y
    check_entry(lambda[1][0], "-b*x + 1/2*(a - 1)*y", sode.params);
    check_entry(lambda[1][1], "1/2*(a + 1)*x", sode.params);
    check_entry(lambda[0][0], "0", sode.params);
    check_entry(lambda[0][1], "0", sode.params);
  }
}

TEST_CASE("affine line: psi^y_y = 1/2(1-a)x and lambda + psi = dgamma/dw") {
  for (const auto& [a, b] : kParamGrid) {
    ReducedSODE sode = affine_line_sode(a, b);
    auto psi = compute_psi(sode);
    check_entry(psi[1][1], "1/2*(1 - a)*x", sode.params);

    auto lambda = compute_lambda(sode);
    Region region = Region::default_box(2);
    for (int k = 1; k <= 2; ++k) {
      for (int i = 1; i <= 2; ++i) {
        // Difference of the defining formulas: psi - lambda = dgamma/dw.
        Expr diff = Expr::difference(psi[k - 1][i - 1], lambda[k - 1][i - 1]);
        Expr dgamma = sode.gamma[k - 1].differentiate(i);
        CHECK(is_zero(Expr::difference(diff, dgamma), region, 1e-9, sode.params).kind ==
              ZeroKind::ProvedZero);
        // Sum of the defining formulas: psi + lambda = w^j C^k_{ji}.
        Expr sum = Expr::sum({psi[k - 1][i - 1], lambda[k - 1][i - 1]});
        std::vector<Expr> bracket;
        for (int j = 1; j <= 2; ++j) {
          const Rational& c = sode.alg.c(k, j, i);
          if (!c.is_zero())
            bracket.push_back(Expr::product({Expr::constant(c), Expr::variable(j)}));
        }
        CHECK(is_zero(Expr::difference(sum, Expr::sum(std::move(bracket))), region, 1e-9,
                      sode.params)
                  .kind == ZeroKind::ProvedZero);
      }
    }
  }
}

TEST_CASE("affine line: Jacobi endomorphism matches the printed Phi") {
  for (const auto& [a, b] : kParamGrid) {
    ReducedSODE sode = affine_line_sode(a, b);
    for (auto method : {PhiMethod::Direct, PhiMethod::Civilized}) {
      auto phi = compute_phi(sode, method);
      // Phi(E_x) = 1/4 (a-1)^2 xy E_y, Phi(E_y) = -1/4 (a-1)^2 x^2 E_y
      check_entry(phi[1][0], "1/4*(a - 1)^2*x*y", sode.params);
      check_entry(phi[1][1], "-1/4*(a - 1)^2*x^2", sode.params);
      check_entry(phi[0][0], "0", sode.params);
      check_entry(phi[0][1], "0", sode.params);
    }
  }
}

TEST_CASE("canonical connection: phi = -1/4 w^m w^n C^k_{mj} C^l_{nk}") {
  for (const auto& named : catalog_sodes()) {
    ReducedSODE canonical = canonical_connection(named.sode.alg);
    const int n = canonical.dim();
    auto phi = compute_phi(canonical, PhiMethod::Civilized);
    Region region = Region::default_box(n);
    for (int l = 1; l <= n; ++l) {
      for (int j = 1; j <= n; ++j) {
        std::vector<Expr> expect;
        for (int m = 1; m <= n; ++m) {
          for (int nn = 1; nn <= n; ++nn) {
            for (int k = 1; k <= n; ++k) {
              Rational c = canonical.alg.c(k, m, j) * canonical.alg.c(l, nn, k);
              if (!c.is_zero())
                expect.push_back(Expr::product({Expr::constant(c * Rational(-1, 4)),
                                                Expr::variable(m), Expr::variable(nn)}));
            }
          }
        }
        CHECK(is_zero(Expr::difference(phi[l - 1][j - 1], Expr::sum(std::move(expect))),
                      region, 1e-9, {})
                  .kind == ZeroKind::ProvedZero);
      }
    }
  }
}

TEST_CASE("Bloch-Iserles: nabla and Phi coefficient tables") {
  ReducedSODE sode = bloch_iserles_sode();
  auto names = sode.alg.names();
  Region region = Region::default_box(3);
  auto check3 = [&](const ExprMatrix& got, const char* table[3][3]) {
    for (int l = 0; l < 3; ++l) {
      for (int j = 0; j < 3; ++j) {
        Expr want = parse_expr(table[l][j], names, {});
        CHECK(is_zero(Expr::difference(got[l][j], want), region, 1e-9, {}).kind ==
              ZeroKind::ProvedZero);
      }
    }
  };
  // nabla E_x = -(x + z/2) Ey - y Ez, nabla E_y = (2x + z) Ex - (x + 2z) Ez,
  // nabla E_z = y Ex + (z + x/2) Ey; lambda[k][i] = coefficient of E_k in nabla E_i.
  const char* lambda_table[3][3] = {
      {"0", "2*x + z", "y"},
      {"-x - 1/2*z", "0", "z + 1/2*x"},
      {"-y", "-x - 2*z", "0"},
  };
  auto lambda = compute_lambda(sode);
  check3(lambda, lambda_table);

  const char* phi_table[3][3] = {
      {"-3*y^2 + 1/2*z^2", "3*x*y - 4*y*z", "4*y^2 - 1/2*x*z"},
      {"3/2*x*y - 2*y*z", "4*x*z - 3/2*x^2 - 3/2*z^2", "3/2*y*z - 2*x*y"},
      {"4*y^2 - 1/2*x*z", "3*y*z - 4*x*y", "-3*y^2 + 1/2*x^2"},
  };
  for (auto method : {PhiMethod::Direct, PhiMethod::Civilized}) {
    auto phi = compute_phi(sode, method);
    check3(phi, phi_table);
  }
}

TEST_CASE("phi cross-check: direct and civilized agree on every catalog sode") {
  for (const auto& named : catalog_sodes()) {
    ReducedSODE sode = named.sode;
    auto direct = compute_phi(sode, PhiMethod::Direct);
    auto civilized = compute_phi(sode, PhiMethod::Civilized);
    Region region = Region::default_box(sode.dim());
    for (int l = 0; l < sode.dim(); ++l) {
      for (int j = 0; j < sode.dim(); ++j) {
        auto v = is_zero(Expr::difference(direct[l][j], civilized[l][j]), region, 1e-9,
                         sode.params);
        CHECK_MESSAGE(v.kind == ZeroKind::ProvedZero, named.name, " entry ", l + 1, ",", j + 1);
      }
    }
    // and the checked wrapper does not throw
    CHECK_NOTHROW(compute_phi_checked(sode, region, 1e-9));
  }
}

TEST_CASE("phi cross-check degrades to SampledZero for non-polynomial gamma") {
  LieAlgebra alg = affine_line();
  ReducedSODE sode{alg,
                   {Expr::constant(0L), parse_expr("exp(x)*y", alg.names(), {})},
                   {}};
  Region region = Region::default_box(2);
  auto direct = compute_phi(sode, PhiMethod::Direct);
  auto civilized = compute_phi(sode, PhiMethod::Civilized);
  bool sampled_somewhere = false;
  for (int l = 0; l < 2; ++l) {
    for (int j = 0; j < 2; ++j) {
      auto v = is_zero(Expr::difference(direct[l][j], civilized[l][j]), region, 1e-9, {});
      CHECK(v.is_zero());
      sampled_somewhere = sampled_somewhere || v.kind == ZeroKind::SampledZero;
    }
  }
  CHECK(sampled_somewhere);
}

TEST_CASE("basis-section bracket tables close and satisfy Jacobi") {
  for (const auto& named : catalog_sodes()) {
    BracketReport report = verify_basis_brackets(named.sode.alg);
    CHECK_MESSAGE(report.ok, named.name, ": ", report.message);
  }
  // abelian: all brackets vanish
  BracketReport ab = verify_basis_brackets(abelian(3));
  CHECK(ab.ok);
  CHECK(ab.sample_brackets.empty());
  // Heisenberg: [e1, W3] = W2
  BracketReport h = verify_basis_brackets(heisenberg3());
  bool found = false;
  for (const auto& line : h.sample_brackets) found = found || line == "[e1,W3] = W2";
  CHECK(found);
  // affine line: [e1, e2] = e2
  BracketReport aff = verify_basis_brackets(affine_line());
  found = false;
  for (const auto& line : aff.sample_brackets) found = found || line == "[e1,e2] = e2";
  CHECK(found);
}
