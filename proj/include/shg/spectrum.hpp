#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "shg/errors.hpp"

namespace shg {

/// Japanese bracket <x> = (1 + x^2)^{1/2}.
inline double japanese(double x) { return std::sqrt(1.0 + x * x); }

struct HarmonicIndex {
  int degree = 0;
  int order = 0;

  HarmonicIndex() = default;
  HarmonicIndex(int k, int m) : degree(k), order(m) {
    detail::require(k >= 0 && m >= -k && m <= k,
                    "harmonic index requires k >= 0 and |m| <= k");
  }

  /// Position in the (k, m) packing used by SpectralField.
  std::size_t flat() const {
    return static_cast<std::size_t>(degree) * degree + degree + order;
  }
};

/// An eigenvalue written as num / den with small integers, so that resonance
/// windows can be tested without rounding.
struct ExactValue {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Eigenvalue generator for -Laplacian: the round sphere S^d, or the
/// cluster midpoints (k + Z0/4)^2 of a Zoll surface spectrum.
class SpectrumModel {
 public:
  enum class Kind { sphere, zoll };

  static SpectrumModel sphere(int dim = 2) {
    detail::require(dim >= 2, "sphere dimension must be >= 2");
    return SpectrumModel(Kind::sphere, dim, 0, 0.0);
  }

  static SpectrumModel zoll(int z0, double spread) {
    detail::require(z0 >= 0, "Zoll shift Z0 must be a nonnegative integer");
    detail::require(spread > 0.0, "Zoll cluster half-width E must be positive");
    return SpectrumModel(Kind::zoll, 2, z0, spread);
  }

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }
  int zoll_shift() const { return z0_; }
  double zoll_spread() const { return spread_; }

  ExactValue exact(int k) const {
    detail::require(k >= 0, "eigenvalue index must be nonnegative");
    const std::int64_t kk = k;
    if (kind_ == Kind::sphere) return {kk * (kk + dim_ - 1), 1};
    const std::int64_t s = 4 * kk + z0_;
    return {s * s, 16};
  }

  double eigenvalue(int k) const { return exact(k).value(); }

  std::string describe() const {
    if (kind_ == Kind::sphere) return "sphere(d=" + std::to_string(dim_) + ")";
    return "zoll(Z0=" + std::to_string(z0_) + ",E=" + std::to_string(spread_) + ")";
  }

 private:
  SpectrumModel(Kind kind, int dim, int z0, double spread)
      : kind_(kind), dim_(dim), z0_(z0), spread_(spread) {}

  Kind kind_;
  int dim_;
  int z0_;
  double spread_;
};

inline double eigenvalue(const SpectrumModel& model, int k) { return model.eigenvalue(k); }

inline bool is_dyadic(std::int64_t n) { return n >= 1 && (n & (n - 1)) == 0; }

/// Exact test of N <= <mu>^{1/2} < 2N, i.e. N^4 <= 1 + mu^2 < 16 N^4,
/// with mu = num/den cleared of its denominator.
inline bool in_dyadic_block(const ExactValue& mu, std::int64_t n_dyadic) {
  using wide = __int128;
  const wide d2 = static_cast<wide>(mu.den) * mu.den;
  const wide n4 = static_cast<wide>(n_dyadic) * n_dyadic * n_dyadic * n_dyadic;
  const wide lhs = d2 + static_cast<wide>(mu.num) * mu.num;
  return d2 * n4 <= lhs && lhs < 16 * d2 * n4;
}

/// Dyadic label of degree k: the unique power of two N with k in block N.
inline std::int64_t dyadic_label(const SpectrumModel& model, int k) {
  const ExactValue mu = model.exact(k);
  std::int64_t n = 1;
  while (!in_dyadic_block(mu, n)) n *= 2;
  return n;
}

/// Degrees [first, last] (inclusive) of block N, intersected with [0, k_max].
/// Blocks are contiguous because the eigenvalues increase with k.
struct DegreeRange {
  int first = 0;
  int last = -1;

  bool empty() const { return last < first; }
  int size() const { return empty() ? 0 : last - first + 1; }
};

inline DegreeRange dyadic_degrees(const SpectrumModel& model, std::int64_t n_dyadic, int k_max) {
  detail::require(is_dyadic(n_dyadic), "dyadic frequency must be a power of two >= 1");
  DegreeRange r;
  bool found = false;
  for (int k = 0; k <= k_max; ++k) {
    const bool in = in_dyadic_block(model.exact(k), n_dyadic);
    if (in && !found) {
      r.first = k;
      found = true;
    }
    if (in) r.last = k;
    if (!in && found) break;
  }
  if (!found) return DegreeRange{0, -1};
  return r;
}

}  // namespace shg
