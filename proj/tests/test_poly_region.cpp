#include <cmath>

#include "doctest.h"

#include "invlag/lie_algebra.hpp"
#include "invlag/poly.hpp"
#include "invlag/region.hpp"

using namespace invlag;

namespace {
const std::vector<std::string> kW2{"w1", "w2"};
const std::vector<std::string> kW3{"w1", "w2", "w3"};
}  // namespace

TEST_CASE("as_polynomial: (w1+w2)^2 expands exactly") {
  Expr e = parse_expr("(w1 + w2)^2", kW2, {});
  auto p = as_polynomial(e, 2);
  REQUIRE(p.has_value());
  CHECK(p->coefficient({2, 0}) == Rational(1));
  CHECK(p->coefficient({1, 1}) == Rational(2));
  CHECK(p->coefficient({0, 2}) == Rational(1));
  CHECK(p->terms().size() == 3);
}

TEST_CASE("as_polynomial: exp is NotPolynomial") {
  CHECK(!as_polynomial(parse_expr("exp(w1)", kW2, {}), 2).has_value());
  CHECK(!as_polynomial(parse_expr("abs(w1)", kW2, {}), 2).has_value());
  CHECK(!as_polynomial(parse_expr("w1/w2", kW2, {}), 2).has_value());
  CHECK(!as_polynomial(parse_expr("a*w1", kW2, {"a"}), 2).has_value());  // unassigned
  CHECK(as_polynomial(parse_expr("a*w1", kW2, {"a"}), 2, {{"a", Rational(3)}}).has_value());
}

TEST_CASE("as_polynomial: Heisenberg canonical gamma contraction is the zero polynomial") {
  // Gamma^i = 1/2 C^i_{jk} w^j w^k vanishes by antisymmetry; build it explicitly.
  LieAlgebra alg = heisenberg3();
  for (int i = 1; i <= 3; ++i) {
    std::vector<Expr> terms;
    for (int j = 1; j <= 3; ++j) {
      for (int k = 1; k <= 3; ++k) {
        const Rational& c = alg.c(i, j, k);
        if (!c.is_zero())
          terms.push_back(Expr::product({Expr::constant(c * Rational(1, 2)),
                                         Expr::variable(j), Expr::variable(k)}));
      }
    }
    auto p = as_polynomial(Expr::sum(std::move(terms)), 3);
    REQUIRE(p.has_value());
    CHECK(p->is_zero());
  }
}

TEST_CASE("polynomial evaluation agrees with exact expression evaluation on rationals") {
  std::vector<std::string> polys{
      "(w1 + w2)^3 - w1*w2", "w1^4/4 - 2*w2 + 1/3", "(w1 - w2)*(w1 + w2) - w1^2 + w2^2"};
  std::vector<std::vector<Rational>> points{
      {Rational(1, 2), Rational(-2, 3)}, {Rational(0), Rational(5)}, {Rational(-7, 4), Rational(1)}};
  for (const auto& t : polys) {
    Expr e = parse_expr(t, kW2, {});
    auto p = as_polynomial(e, 2);
    REQUIRE(p.has_value());
    for (const auto& pt : points) {
      CHECK(p->eval_exact(pt) == e.eval_exact(pt));
    }
  }
}

TEST_CASE("region sampling is reproducible and honors constraints") {
  Region r = Region::default_box(2);
  r.constraints.push_back({parse_expr("w1 - w2", kW2, {}), true});
  r.samples = 50;
  r.seed = 123;
  auto a = sample_region(r, 2);
  auto b = sample_region(r, 2);
  CHECK(a == b);  // bit-identical
  for (const auto& p : a) {
    CHECK(p[0] - p[1] > r.margin);
    CHECK(p[0] >= -2.0);
    CHECK(p[0] <= 2.0);
  }
  r.seed = 124;
  CHECK(sample_region(r, 2) != a);
}

TEST_CASE("sampler exhaustion on an empty region") {
  Region r = Region::default_box(1);
  r.constraints.push_back({parse_expr("w1 - 10", {"w1"}, {}), true});  // impossible in [-2,2]
  r.samples = 4;
  CHECK_THROWS_AS(sample_region(r, 1), SamplerExhausted);
}

TEST_CASE("is_zero: polynomial identities are proved, not sampled") {
  Region r = Region::default_box(2);
  auto v = is_zero(parse_expr("w1^2 - w1*w1", kW2, {}), r, 1e-9);
  CHECK(v.kind == ZeroKind::ProvedZero);

  // never ProvedZero for nonzero polynomials
  auto nz = is_zero(parse_expr("w1^2 - w1*w1 + 1e-30*w2", kW2, {}), r, 1e-9);
  CHECK(nz.kind != ZeroKind::ProvedZero);
}

TEST_CASE("is_zero: w3 is nonzero with a witness off the w3 = 0 plane") {
  Region r = Region::default_box(3);
  auto v = is_zero(parse_expr("w3", kW3, {}), r, 1e-9);
  REQUIRE(v.kind == ZeroKind::Nonzero);
  REQUIRE(v.witness.has_value());
  CHECK(std::fabs((*v.witness)[2]) > 1e-9);
}

TEST_CASE("is_zero: transcendental identity sampled to zero") {
  // ln|w1 w2| = ln|w1| + ln|w2| away from the axes
  Region r = Region::default_box(2);
  r.constraints.push_back({parse_expr("w1", kW2, {}), true});
  r.constraints.push_back({parse_expr("w2", kW2, {}), true});
  Expr lhs = parse_expr("ln(abs(w1*w2))", kW2, {});
  Expr rhs = parse_expr("ln(abs(w1)) + ln(abs(w2))", kW2, {});
  auto v = is_zero(Expr::difference(lhs, rhs), r, 1e-9);
  CHECK(v.kind == ZeroKind::SampledZero);

  auto bad = is_zero(Expr::difference(lhs, parse_expr("ln(abs(w1))", kW2, {})), r, 1e-9);
  CHECK(bad.kind == ZeroKind::Nonzero);
}

TEST_CASE("monomial enumeration is graded and complete") {
  auto ms = monomials_up_to_degree(3, 2);
  CHECK(ms.size() == 10);  // 1 + 3 + 6
  CHECK(ms[0] == Monomial{0, 0, 0});
  int deg1 = 0, deg2 = 0;
  for (const auto& m : ms) {
    int d = m[0] + m[1] + m[2];
    if (d == 1) ++deg1;
    if (d == 2) ++deg2;
  }
  CHECK(deg1 == 3);
  CHECK(deg2 == 6);
}
