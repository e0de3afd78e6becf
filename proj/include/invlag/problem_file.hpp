#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invlag/dynamics.hpp"
#include "invlag/helmholtz.hpp"
#include "invlag/lie_algebra.hpp"
#include "invlag/reduced_geometry.hpp"

namespace invlag {

struct ProblemError : std::runtime_error {
  int line;  // 1-based; 0 when not tied to a location
  ProblemError(const std::string& msg, int line_no = 0)
      : std::runtime_error(msg), line(line_no) {}
};

struct RegionSpec {
  std::vector<std::pair<std::string, std::string>> constraints;  // (expr, ">0" | "<0")
  std::vector<std::pair<double, double>> box;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
};

struct IntegrateSpec {
  std::vector<double> w0;
  double dt = 0;
  int steps = 0;
};

/// Declarative problem description; see README for the file format.
struct ProblemFile {
  std::optional<std::string> catalog;
  int dim = 0;
  std::vector<std::string> names;
  std::vector<StructureTriple> constants;

  std::vector<std::pair<std::string, std::string>> params;  // insertion order kept

  std::vector<std::string> gamma;  // empty when derive_from_lagrangian
  bool derive_from_lagrangian = false;

  std::optional<std::string> lagrangian;
  std::map<std::pair<int, int>, std::string> multiplier;  // (i,j) i<=j -> expr
  bool has_multiplier = false;

  std::optional<RegionSpec> region;
  std::optional<std::vector<Matrix>> representation;
  std::optional<IntegrateSpec> integrate;

  // Resolved objects (all throw ProblemError on inconsistency).
  LieAlgebra make_algebra() const;
  ParamMap make_params() const;
  std::vector<std::string> param_names() const;
  Expr parse(const std::string& text, const LieAlgebra& alg) const;
  ReducedSODE make_sode(const LieAlgebra& alg) const;
  Region make_region(const LieAlgebra& alg, std::uint64_t default_seed,
                     int default_samples) const;
  std::optional<Multiplier> make_multiplier(const LieAlgebra& alg) const;
  std::optional<Expr> make_lagrangian(const LieAlgebra& alg) const;
  std::optional<MatrixRep> make_representation(const LieAlgebra& alg) const;
};

ProblemFile parse_problem_file(const std::string& text);
ProblemFile load_problem_file(const std::string& path);

}  // namespace invlag
