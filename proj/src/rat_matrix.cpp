#include "invlag/rat_matrix.hpp"

#include <stdexcept>

namespace invlag {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
  return m;
}

RrefResult rref(const RatMatrix& m) {
  RatMatrix a = m;
  const int rows = a.rows(), cols = a.cols();
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (!a.at(i, c).is_zero()) { pivot = i; break; }
    }
    if (pivot < 0) continue;
    if (pivot != r) {
      for (int j = 0; j < cols; ++j) std::swap(a.at(pivot, j), a.at(r, j));
    }
    Rational inv = a.at(r, c).inverse();
    for (int j = c; j < cols; ++j) a.at(r, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a.at(i, c).is_zero()) continue;
      Rational f = a.at(i, c);
      for (int j = c; j < cols; ++j) a.at(i, j) -= f * a.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

std::vector<std::vector<Rational>> nullspace(const RatMatrix& m) {
  RrefResult rr = rref(m);
  const int cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (int c : rr.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    std::vector<Rational> v(cols);
    v[free_c] = Rational(1);
    for (size_t p = 0; p < rr.pivot_cols.size(); ++p) {
      v[rr.pivot_cols[p]] = -rr.reduced.at(static_cast<int>(p), free_c);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<LinearSolution> solve(const RatMatrix& m, const std::vector<Rational>& rhs) {
  if (static_cast<int>(rhs.size()) != m.rows())
    throw std::invalid_argument("solve: rhs size mismatch");
  RatMatrix aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = rhs[i];
  }
  RrefResult rr = rref(aug);
  for (int c : rr.pivot_cols) {
    if (c == m.cols()) return std::nullopt;  // pivot in the rhs column
  }
  std::vector<Rational> x(m.cols());
  for (size_t p = 0; p < rr.pivot_cols.size(); ++p) {
    x[rr.pivot_cols[p]] = rr.reduced.at(static_cast<int>(p), m.cols());
  }
  return LinearSolution{std::move(x), nullspace(m)};
}

std::vector<Rational> mat_vec(const RatMatrix& m, const std::vector<Rational>& v) {
  if (static_cast<int>(v.size()) != m.cols())
    throw std::invalid_argument("mat_vec: size mismatch");
  std::vector<Rational> out(m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    Rational acc;
    for (int j = 0; j < m.cols(); ++j) acc += m.at(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace invlag
