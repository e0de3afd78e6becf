#include "invlag/cohomology.hpp"

#include <stdexcept>

namespace invlag {

bool Cochain1::is_zero() const {
  for (const auto& v : nu) {
    if (!v.is_zero()) return false;
  }
  return true;
}

void Cochain2::set(int i, int j, const Rational& v) {
  if (i == j) {
    if (!v.is_zero()) throw std::invalid_argument("Cochain2: diagonal must be zero");
    return;
  }
  entries_[idx(i, j)] = v;
  entries_[idx(j, i)] = -v;
}

bool Cochain2::is_zero() const {
  for (const auto& v : entries_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

bool Cochain3::is_zero() const {
  for (const auto& v : entries) {
    if (!v.is_zero()) return false;
  }
  return true;
}

Cochain2 d1(const LieAlgebra& alg, const Cochain1& nu) {
  const int n = alg.dim();
  if (static_cast<int>(nu.nu.size()) != n)
    throw std::invalid_argument("d1: cochain size mismatch");
  Cochain2 out(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      Rational acc;
      for (int l = 1; l <= n; ++l) acc += nu.nu[l - 1] * alg.c(l, i, j);
      out.set(i, j, -acc);
    }
  }
  return out;
}

Cochain3 d2(const LieAlgebra& alg, const Cochain2& mu) {
  const int n = alg.dim();
  if (mu.dim() != n) throw std::invalid_argument("d2: cochain size mismatch");
  Cochain3 out{n, {}};
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      for (int k = j + 1; k <= n; ++k) {
        Rational acc;
        for (int l = 1; l <= n; ++l) {
          acc += mu.at(i, l) * alg.c(l, j, k);
          acc += mu.at(j, l) * alg.c(l, k, i);
          acc += mu.at(k, l) * alg.c(l, i, j);
        }
        out.entries.push_back(acc);
      }
    }
  }
  return out;
}

namespace {

std::vector<std::pair<int, int>> index_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

/// Matrix of d1 as a map R^n -> R^{n(n-1)/2}: row (i,j), column l, entry -C^l_{ij}.
RatMatrix d1_matrix(const LieAlgebra& alg) {
  const int n = alg.dim();
  auto pairs = index_pairs(n);
  RatMatrix m(static_cast<int>(pairs.size()), n);
  for (size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    for (int l = 1; l <= n; ++l) m.at(static_cast<int>(r), l - 1) = -alg.c(l, i, j);
  }
  return m;
}

/// Matrix of d2 on skew 2-cochains: row (i<j<k), column (p<q).
RatMatrix d2_matrix(const LieAlgebra& alg) {
  const int n = alg.dim();
  auto pairs = index_pairs(n);
  std::vector<std::tuple<int, int, int>> triples;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      for (int k = j + 1; k <= n; ++k) triples.emplace_back(i, j, k);
    }
  }
  RatMatrix m(static_cast<int>(triples.size()), static_cast<int>(pairs.size()));
  for (size_t c = 0; c < pairs.size(); ++c) {
    Cochain2 basis(n);
    basis.set(pairs[c].first, pairs[c].second, Rational(1));
    Cochain3 image = d2(alg, basis);
    for (size_t r = 0; r < triples.size(); ++r) {
      m.at(static_cast<int>(r), static_cast<int>(c)) = image.entries[r];
    }
  }
  return m;
}

}  // namespace

std::pair<int, int> cohomology_dims(const LieAlgebra& alg) {
  const int n = alg.dim();
  const int pairs = n * (n - 1) / 2;
  const int rank_d1 = static_cast<int>(rref(d1_matrix(alg)).pivot_cols.size());
  const int rank_d2 = pairs == 0 ? 0 : static_cast<int>(rref(d2_matrix(alg)).pivot_cols.size());
  const int h1 = n - rank_d1;
  const int h2 = (pairs - rank_d2) - rank_d1;
  return {h1, h2};
}

std::optional<CoboundarySolution> solve_coboundary(const LieAlgebra& alg, const Cochain2& mu) {
  const int n = alg.dim();
  if (mu.dim() != n) throw std::invalid_argument("solve_coboundary: size mismatch");
  auto pairs = index_pairs(n);
  RatMatrix m(static_cast<int>(pairs.size()), n);
  std::vector<Rational> rhs(pairs.size());
  for (size_t r = 0; r < pairs.size(); ++r) {
    auto [i, j] = pairs[r];
    for (int k = 1; k <= n; ++k) m.at(static_cast<int>(r), k - 1) = alg.c(k, i, j);
    rhs[r] = mu.at(i, j);
  }
  auto sol = solve(m, rhs);
  if (!sol) return std::nullopt;
  return CoboundarySolution{std::move(sol->particular), std::move(sol->nullspace)};
}

}  // namespace invlag
