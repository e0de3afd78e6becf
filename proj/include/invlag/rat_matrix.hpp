#pragma once

#include <optional>
#include <vector>

#include "invlag/rational.hpp"

namespace invlag {

/// Dense matrix over exact rationals.
class RatMatrix {
public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const Rational& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  static RatMatrix identity(int n);

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  int rows_, cols_;
  std::vector<Rational> data_;
};

struct RrefResult {
  RatMatrix reduced;
  std::vector<int> pivot_cols;  // ascending; rank == pivot_cols.size()
};

/// Reduced row-echelon form; pivots are the first nonzero entry of each column
/// in order, so the basis orientation is deterministic.
RrefResult rref(const RatMatrix& m);

/// Exact nullspace basis; empty when the kernel is trivial.
std::vector<std::vector<Rational>> nullspace(const RatMatrix& m);

struct LinearSolution {
  std::vector<Rational> particular;
  std::vector<std::vector<Rational>> nullspace;  // freedom in the solution
};

/// Any particular solution of m*x = rhs plus the kernel, or nullopt when inconsistent.
std::optional<LinearSolution> solve(const RatMatrix& m, const std::vector<Rational>& rhs);

std::vector<Rational> mat_vec(const RatMatrix& m, const std::vector<Rational>& v);

}  // namespace invlag
