#include "doctest.h"

#include "invlag/rat_matrix.hpp"
#include "invlag/region.hpp"

using namespace invlag;

namespace {

RatMatrix from_rows(const std::vector<std::vector<long>>& rows) {
  RatMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) m.at((int)i, (int)j) = Rational(rows[i][j]);
  }
  return m;
}

}  // namespace

TEST_CASE("rational basics") {
  CHECK(Rational(2, 6) == Rational(1, 3));
  CHECK(Rational(-4, -8) == Rational(1, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-1.25") == Rational(-5, 4));
  CHECK(Rational::parse("1e-3") == Rational(1, 1000));
  CHECK(Rational::parse("2.5e2") == Rational(250));
  CHECK(Rational(3, 4).pow(-2) == Rational(16, 9));
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK(Rational::snap(0.5, 1000000, 1e-9).value() == Rational(1, 2));
  CHECK(Rational::snap(-2.0 / 3.0, 1000000, 1e-9).value() == Rational(-2, 3));
  CHECK(!Rational::snap(3.14159265358979, 10, 1e-12).has_value());
}

TEST_CASE("rref identity and zero") {
  auto id = RatMatrix::identity(3);
  auto r = rref(id);
  CHECK(r.reduced == id);
  CHECK(r.pivot_cols == std::vector<int>{0, 1, 2});

  RatMatrix z(2, 3);
  auto rz = rref(z);
  CHECK(rz.pivot_cols.empty());
}

TEST_CASE("rref dependent rows") {
  auto m = from_rows({{1, 2}, {2, 4}});
  auto r = rref(m);
  CHECK(r.pivot_cols.size() == 1);
  CHECK(r.reduced.at(0, 0) == Rational(1));
  CHECK(r.reduced.at(0, 1) == Rational(2));
  CHECK(r.reduced.at(1, 0) == Rational(0));
  CHECK(r.reduced.at(1, 1) == Rational(0));
}

TEST_CASE("rref is idempotent") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    RatMatrix m(3, 4);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 4; ++j) {
        m.at(i, j) = Rational(static_cast<long>(rng.next() % 11) - 5,
                              static_cast<long>(rng.next() % 4) + 1);
      }
    }
    auto once = rref(m);
    auto twice = rref(once.reduced);
    CHECK(once.reduced == twice.reduced);
  }
}

TEST_CASE("nullspace basics and rank-nullity") {
  CHECK(nullspace(RatMatrix::identity(4)).empty());
  CHECK(nullspace(RatMatrix(2, 3)).size() == 3);

  SplitMix64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 1 + static_cast<int>(rng.next() % 4);
    int cols = 1 + static_cast<int>(rng.next() % 4);
    RatMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        m.at(i, j) = Rational(static_cast<long>(rng.next() % 7) - 3);
      }
    }
    auto basis = nullspace(m);
    auto rank = rref(m).pivot_cols.size();
    CHECK(rank + basis.size() == static_cast<size_t>(cols));
    for (const auto& v : basis) {
      auto mv = mat_vec(m, v);
      for (const auto& x : mv) CHECK(x == Rational(0));
    }
  }
}

TEST_CASE("solve: particular solutions and inconsistency") {
  auto id = RatMatrix::identity(2);
  auto sol = solve(id, {Rational(1), Rational(2)});
  REQUIRE(sol.has_value());
  CHECK(sol->particular == std::vector<Rational>{Rational(1), Rational(2)});
  CHECK(sol->nullspace.empty());

  RatMatrix zero1(1, 1);
  CHECK(!solve(zero1, {Rational(1)}).has_value());
}

// The coboundary system theta_k C^k_{ij} = mu_{ij} for A_{4,8} with
// mu_{23} = -1 and all other entries zero: rows indexed by pairs (i<j),
// columns by k. Nonzero C: C^1_{23} = 1, C^2_{24} = 1, C^3_{34} = -1.
TEST_CASE("A4,8 coboundary system solves to theta = (-1,0,0,*)") {
  RatMatrix m(6, 4);  // pairs (1,2),(1,3),(1,4),(2,3),(2,4),(3,4)
  m.at(3, 0) = Rational(1);   // (2,3): theta_1
  m.at(4, 1) = Rational(1);   // (2,4): theta_2
  m.at(5, 2) = Rational(-1);  // (3,4): theta_3
  std::vector<Rational> rhs(6);
  rhs[3] = Rational(-1);
  auto sol = solve(m, rhs);
  REQUIRE(sol.has_value());
  CHECK(sol->particular == std::vector<Rational>{Rational(-1), Rational(0), Rational(0), Rational(0)});
  REQUIRE(sol->nullspace.size() == 1);  // theta_4 free
  CHECK(sol->nullspace[0][3] == Rational(1));
}

// Constant-multiplier nabla system for the Bloch-Iserles algebra written out
// by hand from the printed equations (nablaBI): unknowns ordered
// (k_xx, k_xy, k_xz, k_yy, k_yz, k_zz), coefficients of each monomial frozen
// from the displayed equations. Its kernel must be the diag(1,2,1) line.
TEST_CASE("Bloch-Iserles constant-coefficient nullspace is diag(1,2,1)") {
  // Equation rows: for constant k the nabla equations reduce to the
  // coefficient of each of x, y, z in each of the 6 equations.
  // From (nablaBI) with gamma(k)=0:
  //  (x,x): (2x+z) k_xy + 2y k_xz          -> x: k_xy, z: k_xy, y: 2 k_xz
  //  (x,y): (x+z/2) k_yy + y k_yz - (2x+z) k_xx + (x-2z) k_xz
  //  (x,z): (x+z/2) k_yz + y k_zz - y k_xx - (z+x/2) k_xy
  //  (y,y): -2(2x+z) k_xy + 2(x+2z) k_yz
  //  (y,z): -(2x+z) k_xz + (x+2z) k_zz - y k_xy - (z+x/2) k_yy
  //  (z,z): -2y k_xz - (2z+x) k_yz
  auto R = [](long p, long q = 1) { return Rational(p, q); };
  RatMatrix m(18, 6);
  int r = 0;
  auto row = [&](std::initializer_list<std::pair<int, Rational>> entries) {
    for (auto [col, val] : entries) m.at(r, col) = val;
    ++r;
  };
  // (x,x)
  row({{1, R(1)}});             // x
  row({{2, R(2)}});             // y
  row({{1, R(1)}});             // z
  // (x,y)
  row({{3, R(1)}, {0, R(-2)}, {2, R(1)}});            // x
  row({{4, R(1)}});                                    // y
  row({{3, R(1, 2)}, {0, R(-1)}, {2, R(-2)}});        // z
  // (x,z)
  row({{4, R(1)}, {1, R(-1, 2)}});                     // x
  row({{5, R(1)}, {0, R(-1)}});                        // y
  row({{4, R(1, 2)}, {1, R(-1)}});                     // z
  // (y,y)
  row({{1, R(-4)}, {4, R(2)}});                        // x
  row({});                                             // y
  row({{1, R(-2)}, {4, R(4)}});                        // z
  // (y,z)
  row({{2, R(-2)}, {5, R(1)}, {3, R(-1, 2)}});         // x
  row({{1, R(-1)}});                                   // y
  row({{2, R(-1)}, {5, R(2)}, {3, R(-1)}});            // z
  // (z,z)
  row({{2, R(-2)}});                                   // y
  row({{4, R(-1)}});                                   // x -> -(2z+x): x coeff
  row({{4, R(-2)}});                                   // z
  auto basis = nullspace(m);
  REQUIRE(basis.size() == 1);
  const auto& v = basis[0];
  // proportional to (1, 0, 0, 2, 0, 1)
  CHECK(v[1] == Rational(0));
  CHECK(v[2] == Rational(0));
  CHECK(v[4] == Rational(0));
  CHECK(v[3] == v[0] * Rational(2));
  CHECK(v[5] == v[0]);
}

// Independent rank oracle: fraction-free Bareiss elimination over long long.
namespace {
int bareiss_rank(std::vector<std::vector<long long>> m) {
  if (m.empty()) return 0;
  int rows = (int)m.size(), cols = (int)m[0].size();
  int rank = 0;
  long long prev = 1;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r2 = rank; r2 < rows; ++r2) {
      if (m[r2][c] != 0) { piv = r2; break; }
    }
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    for (int r2 = rank + 1; r2 < rows; ++r2) {
      for (int c2 = c + 1; c2 < cols; ++c2) {
        m[r2][c2] = (m[rank][c] * m[r2][c2] - m[r2][c] * m[rank][c2]) / prev;
      }
      m[r2][c] = 0;
    }
    prev = m[rank][c];
    ++rank;
  }
  return rank;
}
}  // namespace

TEST_CASE("rref rank agrees with the Bareiss oracle on random integer matrices") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    int rows = 1 + (int)(rng.next() % 5);
    int cols = 1 + (int)(rng.next() % 5);
    RatMatrix m(rows, cols);
    std::vector<std::vector<long long>> ints(rows, std::vector<long long>(cols));
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        long v = (long)(rng.next() % 9) - 4;
        m.at(i, j) = Rational(v);
        ints[i][j] = v;
      }
    }
    CHECK((int)rref(m).pivot_cols.size() == bareiss_rank(ints));
  }
}
