#include "invlag/region.hpp"

#include <cmath>

namespace invlag {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_in(double lo, double hi) {
  return lo + (hi - lo) * next_unit();
}

Rational SplitMix64::next_small_rational() {
  long num = static_cast<long>(next() % 9) + 1;
  long den = static_cast<long>(next() % 4) + 1;
  return Rational(num, den);
}

Region Region::default_box(int dim) {
  Region r;
  r.box.assign(dim, {-2.0, 2.0});
  return r;
}

std::vector<std::vector<double>> sample_region(const Region& region, int dim,
                                               const ParamMap& params) {
  auto box = region.box;
  if (box.empty()) box.assign(dim, {-2.0, 2.0});
  if (static_cast<int>(box.size()) != dim)
    throw std::invalid_argument("sample_region: box dimension mismatch");

  SplitMix64 rng(region.seed);
  std::vector<std::vector<double>> points;
  points.reserve(region.samples);
  const long max_attempts = static_cast<long>(region.samples) * 20000 + 10000;
  long attempts = 0;
  while (static_cast<int>(points.size()) < region.samples) {
    if (++attempts > max_attempts)
      throw SamplerExhausted("sample_region: cannot find enough points in region");
    std::vector<double> p(dim);
    for (int i = 0; i < dim; ++i) p[i] = rng.next_in(box[i].first, box[i].second);
    bool ok = true;
    for (const auto& c : region.constraints) {
      double v;
      try {
        v = c.expr.eval(p, params);
      } catch (const DomainError&) {
        ok = false;
        break;
      }
      if (c.positive ? v <= region.margin : v >= -region.margin) {
        ok = false;
        break;
      }
    }
    if (ok) points.push_back(std::move(p));
  }
  return points;
}

std::string ZeroVerdict::kind_str() const {
  switch (kind) {
    case ZeroKind::ProvedZero: return "ProvedZero";
    case ZeroKind::SampledZero: return "SampledZero";
    case ZeroKind::Nonzero: return "Nonzero";
  }
  return "?";
}

ZeroVerdict is_zero(const Expr& e, const Region& region, double tol, const ParamMap& params) {
  const int dim = std::max(e.max_var_index(),
                           region.box.empty() ? 0 : static_cast<int>(region.box.size()));
  if (auto p = as_polynomial(e, std::max(dim, 1), params)) {
    if (p->is_zero()) return {ZeroKind::ProvedZero, std::nullopt, 0.0, 0.0, 0};
  }
  ZeroVerdict v{ZeroKind::SampledZero, std::nullopt, 0.0, 0.0, 0};
  auto points = sample_region(region, std::max(dim, 1), params);
  for (const auto& p : points) {
    double value, mag;
    try {
      value = e.eval(p, params);
      mag = e.eval_magnitude(p, params);
    } catch (const DomainError&) {
      continue;  // point too close to a singular locus the constraints do not know about
    }
    ++v.samples_used;
    double rel = std::fabs(value) / (1.0 + std::fabs(mag));
    v.max_residual = std::max(v.max_residual, rel);
    if (std::fabs(value) > tol * (1.0 + std::fabs(mag))) {
      v.kind = ZeroKind::Nonzero;
      v.witness = p;
      v.witness_value = value;
      return v;
    }
  }
  return v;
}

}  // namespace invlag
