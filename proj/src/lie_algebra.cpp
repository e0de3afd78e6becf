#include "invlag/lie_algebra.hpp"

#include <array>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace invlag {

namespace {

std::vector<std::string> default_names(int dim) {
  std::vector<std::string> names;
  names.reserve(dim);
  for (int i = 1; i <= dim; ++i) names.push_back("w" + std::to_string(i));
  return names;
}

void check_names(int dim, std::vector<std::string>& names) {
  if (names.empty()) names = default_names(dim);
  if (static_cast<int>(names.size()) != dim)
    throw std::invalid_argument("LieAlgebra: name count does not match dimension");
}

}  // namespace

LieAlgebra LieAlgebra::from_triples(int dim, std::vector<std::string> names,
                                    const std::vector<StructureTriple>& triples) {
  if (dim < 1) throw std::invalid_argument("LieAlgebra: dimension must be positive");
  check_names(dim, names);
  LieAlgebra alg(dim, std::move(names));
  for (const auto& t : triples) {
    if (t.i < 1 || t.i > dim || t.j < 1 || t.j > dim || t.k < 1 || t.k > dim)
      throw std::invalid_argument("LieAlgebra: structure-constant index out of range");
    if (t.i >= t.j)
      throw std::invalid_argument("LieAlgebra: triples must have i < j");
    alg.table_[alg.idx(t.k, t.i, t.j)] += t.value;
  }
  // Extend by antisymmetry.
  for (int k = 1; k <= dim; ++k) {
    for (int i = 1; i <= dim; ++i) {
      for (int j = i + 1; j <= dim; ++j) {
        alg.table_[alg.idx(k, j, i)] = -alg.table_[alg.idx(k, i, j)];
      }
    }
  }
  return alg;
}

LieAlgebra LieAlgebra::from_full_table(int dim, std::vector<std::string> names,
                                       const std::vector<StructureTriple>& triples) {
  if (dim < 1) throw std::invalid_argument("LieAlgebra: dimension must be positive");
  check_names(dim, names);
  LieAlgebra alg(dim, std::move(names));
  for (const auto& t : triples) {
    if (t.i < 1 || t.i > dim || t.j < 1 || t.j > dim || t.k < 1 || t.k > dim)
      throw std::invalid_argument("LieAlgebra: structure-constant index out of range");
    alg.table_[alg.idx(t.k, t.i, t.j)] += t.value;
  }
  return alg;
}

AlgebraValidation LieAlgebra::validate() const {
  // Antisymmetry C^k_{ij} = -C^k_{ji} (includes C^k_{ii} = 0).
  for (int i = 1; i <= n_; ++i) {
    for (int j = i; j <= n_; ++j) {
      for (int k = 1; k <= n_; ++k) {
        if (c(k, i, j) != -c(k, j, i)) {
          std::ostringstream msg;
          msg << "antisymmetry violated: C^" << k << "_{" << i << "," << j << "} = "
              << c(k, i, j).str() << " but C^" << k << "_{" << j << "," << i << "} = "
              << c(k, j, i).str();
          return {false, msg.str(), std::make_tuple(i, j, k, 0)};
        }
      }
    }
  }
  // Jacobi: C^l_{ij} C^m_{lk} + C^l_{jk} C^m_{li} + C^l_{ki} C^m_{lj} = 0.
  for (int i = 1; i <= n_; ++i) {
    for (int j = i + 1; j <= n_; ++j) {
      for (int k = j + 1; k <= n_; ++k) {
        for (int m = 1; m <= n_; ++m) {
          Rational sum;
          for (int l = 1; l <= n_; ++l) {
            sum += c(l, i, j) * c(m, l, k);
            sum += c(l, j, k) * c(m, l, i);
            sum += c(l, k, i) * c(m, l, j);
          }
          if (!sum.is_zero()) {
            std::ostringstream msg;
            msg << "Jacobi identity violated at (i,j,k,m) = (" << i << "," << j << ","
                << k << "," << m << "), cyclic sum = " << sum.str();
            return {false, msg.str(), std::make_tuple(i, j, k, m)};
          }
        }
      }
    }
  }
  return {};
}

std::vector<Rational> LieAlgebra::bracket(const std::vector<Rational>& u,
                                          const std::vector<Rational>& v) const {
  if (static_cast<int>(u.size()) != n_ || static_cast<int>(v.size()) != n_)
    throw std::invalid_argument("LieAlgebra::bracket: size mismatch");
  std::vector<Rational> out(n_);
  for (int k = 1; k <= n_; ++k) {
    Rational acc;
    for (int i = 1; i <= n_; ++i) {
      for (int j = 1; j <= n_; ++j) {
        if (!c(k, i, j).is_zero()) acc += c(k, i, j) * u[i - 1] * v[j - 1];
      }
    }
    out[k - 1] = acc;
  }
  return out;
}

LieAlgebra abelian(int dim) {
  return LieAlgebra::from_triples(dim, {}, {});
}

LieAlgebra heisenberg3() {
  return LieAlgebra::from_triples(3, {"w1", "w2", "w3"}, {{1, 3, 2, Rational(1)}});
}

LieAlgebra a4_8() {
  return LieAlgebra::from_triples(4, {"w1", "w2", "w3", "w4"},
                                  {{2, 3, 1, Rational(1)},
                                   {2, 4, 2, Rational(1)},
                                   {3, 4, 3, Rational(-1)}});
}

LieAlgebra affine_line() {
  return LieAlgebra::from_triples(2, {"x", "y"}, {{1, 2, 2, Rational(1)}});
}

namespace {

using Mat2 = std::array<std::array<Rational, 2>, 2>;

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  Mat2 out{};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
    }
  }
  return out;
}

}  // namespace

LieAlgebra bloch_iserles_2() {
  // Basis of Sym(2): Ex = [[1,0],[0,0]], Ey = [[0,1],[1,0]], Ez = [[0,0],[0,1]].
  const Mat2 Ex{{{Rational(1), Rational(0)}, {Rational(0), Rational(0)}}};
  const Mat2 Ey{{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}};
  const Mat2 Ez{{{Rational(0), Rational(0)}, {Rational(0), Rational(1)}}};
  const Mat2 N{{{Rational(0), Rational(1)}, {Rational(-1), Rational(0)}}};
  const std::array<Mat2, 3> basis{Ex, Ey, Ez};

  // {u, v} = uNv - vNu lands in Sym(2); coordinates of [[p,q],[q,r]] are (p,q,r).
  std::vector<StructureTriple> triples;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Mat2 br = mat_mul(mat_mul(basis[i], N), basis[j]);
      Mat2 rev = mat_mul(mat_mul(basis[j], N), basis[i]);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) br[r][c] -= rev[r][c];
      }
      if (br[0][1] != br[1][0])
        throw std::logic_error("bloch_iserles_2: bracket left Sym(2)");
      const Rational comp[3] = {br[0][0], br[0][1], br[1][1]};
      for (int k = 0; k < 3; ++k) {
        if (!comp[k].is_zero()) triples.push_back({i + 1, j + 1, k + 1, comp[k]});
      }
    }
  }
  return LieAlgebra::from_triples(3, {"x", "y", "z"}, triples);
}

std::optional<LieAlgebra> catalog_algebra(const std::string& name) {
  if (name == "heisenberg3") return heisenberg3();
  if (name == "a4_8") return a4_8();
  if (name == "affine_line") return affine_line();
  if (name == "bloch_iserles_2") return bloch_iserles_2();
  if (name.rfind("abelian", 0) == 0) {
    std::string suffix = name.substr(7);
    if (!suffix.empty() && suffix[0] == '_') suffix = suffix.substr(1);
    int d = suffix.empty() ? 1 : std::atoi(suffix.c_str());
    if (d >= 1) return abelian(d);
  }
  return std::nullopt;
}

std::vector<std::string> catalog_names() {
  return {"abelian_<n>", "heisenberg3", "a4_8", "affine_line", "bloch_iserles_2"};
}

}  // namespace invlag
