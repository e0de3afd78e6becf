#include <cmath>

#include "doctest.h"

#include "support.hpp"

using namespace invlag;
using namespace testsupport;

TEST_CASE("matrix representations validate against their algebras") {
  CHECK_NOTHROW(affine_rep().validate(affine_line()));
  CHECK_NOTHROW(bloch_iserles_rep().validate(bloch_iserles_2()));
  CHECK_NOTHROW(heisenberg_rep().validate(heisenberg3()));
  // wrong representation is rejected
  MatrixRep bad = affine_rep();
  bad.basis[1] = Matrix{{0, 0}, {1, 0}};
  CHECK_THROWS_AS(bad.validate(affine_line()), std::invalid_argument);
}

TEST_CASE("ep_check examples") {
  SUBCASE("Bloch-Iserles quadratic Lagrangian passes exactly") {
    ReducedSODE sode = bloch_iserles_sode();
    Expr l = parse_expr("1/2*(x^2 + 2*y^2 + z^2)", sode.alg.names(), {});
    auto v = ep_check(sode, l, Region::default_box(3), 1e-9);
    CHECK(v.kind == ZeroKind::ProvedZero);
  }
  SUBCASE("affine line case 1 passes on its region (sampled)") {
    ReducedSODE sode = affine_line_sode(Rational(1), Rational(1));
    Expr l = parse_expr("-x*ln(abs(x - y))", sode.alg.names(), {});
    Region region = Region::default_box(2);
    region.constraints.push_back({parse_expr("x - y", sode.alg.names(), {}), true});
    auto v = ep_check(sode, l, region, 1e-9);
    CHECK(v.kind == ZeroKind::SampledZero);
  }
  SUBCASE("case 2C quadratic candidate fails with a witness") {
    ReducedSODE sode = affine_line_sode(Rational(0), Rational(0));
    Expr l = parse_expr("1/2*(x^2 + y^2)", sode.alg.names(), {});
    auto v = ep_check(sode, l, Region::default_box(2), 1e-9);
    REQUIRE(v.kind == ZeroKind::Nonzero);
    REQUIRE(v.witness.has_value());
    // V_2 = -x y at the witness
    const auto& p = *v.witness;
    CHECK(std::fabs(p[0] * p[1]) > 1e-9);
  }
}

TEST_CASE("derive_sode: Bloch-Iserles dynamics from the quadratic Lagrangian") {
  LieAlgebra alg = bloch_iserles_2();
  Expr l = parse_expr("1/2*(x^2 + 2*y^2 + z^2)", alg.names(), {});
  auto gamma = derive_sode_symbolic(alg, l);
  REQUIRE(gamma.has_value());
  ReducedSODE expected = bloch_iserles_sode();
  Region region = Region::default_box(3);
  for (int i = 0; i < 3; ++i) {
    CHECK(is_zero(Expr::difference((*gamma)[i], expected.gamma[i]), region, 1e-9, {}).kind ==
          ZeroKind::ProvedZero);
  }
  // round trip: the derived sode passes ep_check
  ReducedSODE derived{alg, *gamma, {}};
  CHECK(ep_check(derived, l, region, 1e-9).kind == ZeroKind::ProvedZero);
}

TEST_CASE("derive_sode: matrix-form dynamics w' = [w^2, N] agree componentwise") {
  // The definitive check that the derived structure constants are right:
  // evaluate [w^2, N] directly in matrix form and compare with the EP field
  // of l = 1/2 tr(w^2) on a point grid.
  LieAlgebra alg = bloch_iserles_2();
  Expr l = parse_expr("1/2*(x^2 + 2*y^2 + z^2)", alg.names(), {});  // = 1/2 tr(w^2)
  auto gamma = derive_sode_symbolic(alg, l);
  REQUIRE(gamma.has_value());
  SplitMix64 rng(88);
  for (int trial = 0; trial < 25; ++trial) {
    double x = rng.next_in(-2, 2), y = rng.next_in(-2, 2), z = rng.next_in(-2, 2);
    Matrix w{{x, y}, {y, z}};
    Matrix N{{0, 1}, {-1, 0}};
    Matrix w2 = mat_mul(w, w);
    Matrix rhs = mat_add(mat_mul(w2, N), mat_scale(mat_mul(N, w2), -1.0));
    std::vector<double> pt{x, y, z};
    CHECK((*gamma)[0].eval(pt) == doctest::Approx(rhs[0][0]).epsilon(1e-12));
    CHECK((*gamma)[1].eval(pt) == doctest::Approx(rhs[0][1]).epsilon(1e-12));
    CHECK((*gamma)[2].eval(pt) == doctest::Approx(rhs[1][1]).epsilon(1e-12));
  }
}

TEST_CASE("derive_sode: abelian quadratic gives gamma = 0; A4,8 potential too") {
  auto gamma_ab = derive_sode_symbolic(abelian(3),
                                       parse_expr("1/2*(w1^2 + w2^2 + w3^2)",
                                                  {"w1", "w2", "w3"}, {}));
  REQUIRE(gamma_ab.has_value());
  for (const auto& g : *gamma_ab) CHECK(g.is_zero_constant());

  auto gamma_a48 = derive_sode_symbolic(
      a4_8(), parse_expr("w2*w3 - w1*w4 + 1/2*w4^2", {"w1", "w2", "w3", "w4"}, {}));
  REQUIRE(gamma_a48.has_value());
  Region region = Region::default_box(4);
  for (const auto& g : *gamma_a48) {
    CHECK(is_zero(g, region, 1e-9, {}).kind == ZeroKind::ProvedZero);
  }
}

TEST_CASE("derive_sode_at: numeric solve matches the symbolic route") {
  LieAlgebra alg = bloch_iserles_2();
  Expr l = parse_expr("1/2*(x^2 + 2*y^2 + z^2)", alg.names(), {});
  auto gamma = derive_sode_symbolic(alg, l);
  REQUIRE(gamma.has_value());
  std::vector<double> pt{0.7, -0.3, 1.1};
  auto numeric = derive_sode_at(alg, l, pt);
  for (int i = 0; i < 3; ++i) {
    CHECK(numeric[i] == doctest::Approx((*gamma)[i].eval(pt)).epsilon(1e-12));
  }
  // singular Hessian at a point is an error
  Expr bad = parse_expr("x^3", alg.names(), {});
  CHECK_THROWS_AS(derive_sode_at(alg, bad, {0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("energy examples") {
  SUBCASE("quadratic: E = l by Euler's relation") {
    Expr l = parse_expr("1/2*(x^2 + 2*y^2 + z^2)", {"x", "y", "z"}, {});
    Expr e = energy(l, 3);
    CHECK(is_zero(Expr::difference(e, l), Region::default_box(3), 1e-9, {}).kind ==
          ZeroKind::ProvedZero);
  }
  SUBCASE("case-1 Lagrangian: E = -x") {
    Expr l = parse_expr("-x*ln(abs(b*x - y))", {"x", "y"}, {"b"});
    Expr e = energy(l, 2);
    Region region = Region::default_box(2);
    region.constraints.push_back({parse_expr("b*x - y", {"x", "y"}, {"b"}), true});
    ParamMap params{{"b", Rational(1)}};
    auto v = is_zero(Expr::sum({e, Expr::variable(1)}), region, 1e-9, params);
    CHECK(v.is_zero());
  }
  SUBCASE("constant Lagrangian: E = -c") {
    Expr l = Expr::constant(Rational(7, 3));
    Expr e = energy(l, 2);
    CHECK(is_zero(Expr::sum({e, Expr::constant(Rational(7, 3))}), Region::default_box(2), 1e-9,
                  {})
              .kind == ZeroKind::ProvedZero);
  }
}

TEST_CASE("energy is a symbolic first integral of the derived dynamics") {
  // gamma(E) = w^i C^k_{ji} w^j dl/dw^k vanishes by skew-symmetry; with the
  // dynamics derived from l this is an exact polynomial identity.
  LieAlgebra alg = bloch_iserles_2();
  Expr l = parse_expr("1/2*(x^2 + 2*y^2 + z^2)", alg.names(), {});
  auto gamma = derive_sode_symbolic(alg, l);
  REQUIRE(gamma.has_value());
  ReducedSODE sode{alg, *gamma, {}};
  Expr de_dt = sode.apply_gamma(energy(l, 3));
  CHECK(is_zero(de_dt, Region::default_box(3), 1e-9, {}).kind == ZeroKind::ProvedZero);
}

TEST_CASE("integrate: canonical connection holds w constant exactly") {
  ReducedSODE sode = canonical_connection(a4_8());
  std::vector<double> w0{1, -2, 0.5, 3};
  Trajectory traj = integrate(sode, w0, 1e-2, 100);
  CHECK(traj.w.size() == 101);
  for (const auto& w : traj.w) {
    for (int i = 0; i < 4; ++i) CHECK(w[i] == w0[i]);
  }
}

TEST_CASE("integrate: Bloch-Iserles conserves the energy to 1e-9 relative") {
  ReducedSODE sode = bloch_iserles_sode();
  Expr l = parse_expr("1/2*(x^2 + 2*y^2 + z^2)", sode.alg.names(), {});
  // (1, 1/2, -1) is an equilibrium; also integrate a
  // genuinely moving trajectory
  for (std::vector<double> w0 : {std::vector<double>{1.0, 0.5, -1.0},
                                 std::vector<double>{1.0, 0.5, -0.3}}) {
    Trajectory traj = integrate(sode, w0, 1e-3, 1000, l);
    REQUIRE(traj.energy.size() == 1001);
    double e0 = traj.energy.front();
    for (double e : traj.energy) {
      CHECK(std::fabs(e - e0) <= 1e-9 * (1.0 + std::fabs(e0)));
    }
  }
}

TEST_CASE("integrate: order-4 convergence measured against a fine reference") {
  ReducedSODE sode = bloch_iserles_sode();
  std::vector<double> w0{1.0, 0.5, -0.3};
  const double T = 0.5;
  auto endpoint = [&](double dt) {
    Trajectory t = integrate(sode, w0, dt, static_cast<int>(std::lround(T / dt)));
    return t.w.back();
  };
  auto reference = endpoint(T / 2048);
  auto err = [&](const std::vector<double>& w) {
    double m = 0;
    for (int i = 0; i < 3; ++i) m = std::max(m, std::fabs(w[i] - reference[i]));
    return m;
  };
  double e1 = err(endpoint(T / 64));
  double e2 = err(endpoint(T / 128));
  double ratio = e1 / e2;
  CHECK(ratio > 12.0);  // 2^4 = 16 up to higher-order noise
  CHECK(ratio < 20.0);

  // log-log slope over a dt ladder
  std::vector<double> dts{T / 32, T / 64, T / 128, T / 256};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double dt : dts) {
    double x = std::log(dt), y = std::log(err(endpoint(dt)));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double n = static_cast<double>(dts.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope >= 3.5);
}

TEST_CASE("integrate: energy drift scales as dt^4 on a log-log fit") {
  ReducedSODE sode = bloch_iserles_sode();
  Expr l = parse_expr("1/2*(x^2 + 2*y^2 + z^2)", sode.alg.names(), {});
  const double T = 1.0;
  auto drift = [&](double dt) {
    Trajectory t = integrate(sode, {1.0, 0.5, -0.3}, dt, static_cast<int>(std::lround(T / dt)), l);
    double e0 = t.energy.front(), m = 0;
    for (double e : t.energy) m = std::max(m, std::fabs(e - e0));
    return m;
  };
  std::vector<double> dts{T / 16, T / 32, T / 64, T / 128};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double dt : dts) {
    double x = std::log(dt), y = std::log(drift(dt));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  double n = static_cast<double>(dts.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope >= 3.5);
}

TEST_CASE("integrate: domain error reports the time reached") {
  // w' = w^2 from w(0) = 1 blows up at t = 1
  LieAlgebra alg = abelian(1);
  ReducedSODE sode{alg, {parse_expr("w1^2", {"w1"}, {})}, {}};
  bool threw = false;
  try {
    integrate(sode, {1.0}, 1e-2, 1000);
  } catch (const TrajectoryDomainError& e) {
    threw = true;
    CHECK(e.time_reached > 0.5);
    CHECK(e.time_reached < 2.0);
  }
  CHECK(threw);
}

TEST_CASE("reconstruct: w = 0 keeps g = g0") {
  MatrixRep rep = affine_rep();
  ReducedSODE sode = canonical_connection(affine_line());
  Trajectory traj = integrate(sode, {0.0, 0.0}, 1e-2, 10);
  Matrix g0{{2, 1}, {0, 1}};
  auto samples = reconstruct(rep, traj, g0);
  for (const auto& g : samples) CHECK(mat_max_abs_diff(g, g0) == 0.0);
}

TEST_CASE("reconstruct: canonical flow matches the matrix exponential oracle") {
  // gamma = 0, so w(t) = w0 and g(t) = g0 exp(t w0^i B_i).
  MatrixRep rep = affine_rep();
  ReducedSODE sode = canonical_connection(affine_line());
  std::vector<double> w0{0.8, -0.6};
  Trajectory traj = integrate(sode, w0, 1e-3, 1000);
  auto samples = reconstruct(rep, traj, mat_identity(2));
  Matrix A{{w0[0], w0[1]}, {0, 0}};
  Matrix expected = matrix_exp(A);  // t = 1
  CHECK(mat_max_abs_diff(samples.back(), expected) <= 1e-8);
}

TEST_CASE("reconstruct: heisenberg canonical flow matches the exponential too") {
  MatrixRep rep = heisenberg_rep();
  ReducedSODE sode = canonical_connection(heisenberg3());
  std::vector<double> w0{0.5, -1.2, 0.9};
  Trajectory traj = integrate(sode, w0, 1e-3, 1000);
  auto samples = reconstruct(rep, traj, mat_identity(3));
  Matrix A(3, std::vector<double>(3, 0.0));
  for (int i = 0; i < 3; ++i) A = mat_add(A, mat_scale(rep.basis[i], w0[i]));
  CHECK(mat_max_abs_diff(samples.back(), matrix_exp(A)) <= 1e-8);
}

TEST_CASE("reconstruct: affine-group case-2B trajectory has small residual and positive det") {
  // gamma = (0, x(bx - ay)) with a=0, b=1 on x > 0: reconstruction on the
  // affine group; the residual g^-1 g' - w^i B_i measured by finite
  // differences stays below 1e-6.
  ReducedSODE sode = affine_line_sode(Rational(0), Rational(1));
  MatrixRep rep = affine_rep();
  const double dt = 1e-3;
  Trajectory traj = integrate(sode, {0.5, 0.2}, dt, 1000);
  auto samples = reconstruct(rep, traj, mat_identity(2));
  double max_residual = 0;
  for (size_t s = 1; s + 1 < samples.size(); s += 10) {
    // centered difference for g'
    Matrix gdot = mat_scale(mat_add(samples[s + 1], mat_scale(samples[s - 1], -1.0)),
                            1.0 / (2 * dt));
    // g^-1 for the 2x2 affine form [[p, q], [0, 1]]... general 2x2 inverse:
    const Matrix& g = samples[s];
    double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    CHECK(det > 0);
    Matrix ginv{{g[1][1] / det, -g[0][1] / det}, {-g[1][0] / det, g[0][0] / det}};
    Matrix lhs = mat_mul(ginv, gdot);
    Matrix want(2, std::vector<double>(2, 0.0));
    for (int i = 0; i < 2; ++i) want = mat_add(want, mat_scale(rep.basis[i], traj.w[s][i]));
    max_residual = std::max(max_residual, mat_max_abs_diff(lhs, want));
  }
  CHECK(max_residual <= 1e-6);
}

TEST_CASE("trajectory CSV has the expected shape") {
  ReducedSODE sode = bloch_iserles_sode();
  Expr l = parse_expr("1/2*(x^2 + 2*y^2 + z^2)", sode.alg.names(), {});
  Trajectory traj = integrate(sode, {1, 0, 0}, 0.1, 3, l);
  std::string csv = trajectory_csv(traj);
  CHECK(csv.rfind("t,w1,w2,w3,energy\n", 0) == 0);
  int lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 5);  // header + 4 samples
}
