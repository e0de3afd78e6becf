#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "invlag/expr.hpp"
#include "invlag/poly.hpp"

namespace invlag {

struct SignConstraint {
  Expr expr;
  bool positive;  // true: expr > 0, false: expr < 0
};

/// Open sampling region: a bounding box intersected with strict sign
/// constraints. Sampling is rejection-based and bit-reproducible per seed.
struct Region {
  std::vector<SignConstraint> constraints;
  std::vector<std::pair<double, double>> box;  // per coordinate; empty = default [-2,2]^n
  int samples = 64;
  std::uint64_t seed = 7;
  double margin = 1e-3;  // keep-out distance from each constraint zero-set

  static Region default_box(int dim);
};

struct SamplerExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Draws `region.samples` points inside the region. Throws SamplerExhausted when
/// the acceptance rate is too low. Same seed, same dim, same params: identical output.
std::vector<std::vector<double>> sample_region(const Region& region, int dim,
                                               const ParamMap& params = {});

enum class ZeroKind { ProvedZero, SampledZero, Nonzero };

struct ZeroVerdict {
  ZeroKind kind;
  std::optional<std::vector<double>> witness;  // present iff Nonzero
  double witness_value = 0.0;
  double max_residual = 0.0;  // max |e| / (1+magnitude) over samples
  int samples_used = 0;

  bool is_zero() const { return kind != ZeroKind::Nonzero; }
  std::string kind_str() const;
};

/// Identity test: exact polynomial proof first, seeded sampling otherwise.
/// ProvedZero  — polynomial normalization (after substituting params) is the zero polynomial.
/// SampledZero — |e| <= tol*(1+magnitude) at every sample.
/// Nonzero     — carries a concrete witness point.
ZeroVerdict is_zero(const Expr& e, const Region& region, double tol,
                    const ParamMap& params = {});

/// Deterministic splitmix64 stream; the one PRNG used everywhere.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double next_unit();  // [0,1)
  double next_in(double lo, double hi);
  /// Small nonzero rational in [1, 9] over [1, 4], for generic combinations.
  Rational next_small_rational();

private:
  std::uint64_t state_;
};

}  // namespace invlag
