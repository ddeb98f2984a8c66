#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "shg/errors.hpp"
#include "shg/spectrum.hpp"

namespace shg {

using cplx = std::complex<double>;

/// Coefficients c_{k,m}, 0 <= k <= K, |m| <= k, of an expansion in the
/// orthonormal harmonics Y_{k,m}. Packed so that (k, m) sits at k*k + k + m.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int band_limit)
      : k_(band_limit), c_(static_cast<std::size_t>(band_limit + 1) * (band_limit + 1)) {
    detail::require(band_limit >= 0, "band limit must be nonnegative");
  }

  static SpectralField unit(int band_limit, int k, int m) {
    SpectralField f(band_limit);
    f(k, m) = 1.0;
    return f;
  }

  int band_limit() const { return k_; }
  std::size_t size() const { return c_.size(); }

  cplx& operator()(int k, int m) { return c_[index(k, m)]; }
  const cplx& operator()(int k, int m) const { return c_[index(k, m)]; }

  cplx& at(int k, int m) {
    check(k, m);
    return c_[index(k, m)];
  }
  const cplx& at(int k, int m) const {
    check(k, m);
    return c_[index(k, m)];
  }

  std::span<cplx> coefficients() { return c_; }
  std::span<const cplx> coefficients() const { return c_; }

  /// Coefficients of degree k, orders -k..k.
  std::span<cplx> degree(int k) { return {c_.data() + static_cast<std::size_t>(k) * k, 2 * static_cast<std::size_t>(k) + 1}; }
  std::span<const cplx> degree(int k) const {
    return {c_.data() + static_cast<std::size_t>(k) * k, 2 * static_cast<std::size_t>(k) + 1};
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& c : c_) s += std::norm(c);
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  /// Same coefficients, zero-padded or truncated to another band limit.
  SpectralField resized(int band_limit) const {
    SpectralField out(band_limit);
    const int kk = std::min(band_limit, k_);
    const std::size_t n = static_cast<std::size_t>(kk + 1) * (kk + 1);
    std::copy(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(n), out.c_.begin());
    return out;
  }

  SpectralField& operator+=(const SpectralField& o) {
    same_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    same_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  SpectralField& operator*=(cplx s) {
    for (auto& c : c_) c *= s;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, cplx s) { return a *= s; }

  bool operator==(const SpectralField&) const = default;

  static std::size_t index(int k, int m) {
    return static_cast<std::size_t>(k) * k + static_cast<std::size_t>(k + m);
  }

 private:
  void check(int k, int m) const {
    detail::require(k >= 0 && k <= k_ && m >= -k && m <= k, "harmonic index outside the band limit");
  }
  void same_shape(const SpectralField& o) const {
    detail::require(o.k_ == k_, "band-limit mismatch");
  }

  int k_ = 0;
  std::vector<cplx> c_;
};

/// Complex samples on a SphereGrid, row-major [theta][phi].
class GridField {
 public:
  GridField() = default;
  GridField(int n_theta, int n_phi)
      : n_theta_(n_theta), n_phi_(n_phi), v_(static_cast<std::size_t>(n_theta) * n_phi) {}

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return v_.size(); }

  cplx& operator()(int j, int p) { return v_[static_cast<std::size_t>(j) * n_phi_ + p]; }
  const cplx& operator()(int j, int p) const { return v_[static_cast<std::size_t>(j) * n_phi_ + p]; }

  std::span<cplx> values() { return v_; }
  std::span<const cplx> values() const { return v_; }
  cplx* data() { return v_.data(); }
  const cplx* data() const { return v_.data(); }

  bool same_shape(const GridField& o) const { return n_theta_ == o.n_theta_ && n_phi_ == o.n_phi_; }

 private:
  int n_theta_ = 0;
  int n_phi_ = 0;
  std::vector<cplx> v_;
};

/// Coefficients of the pointwise complex conjugate: conj(c_{k,-m}).
inline SpectralField conjugate(const SpectralField& f) {
  SpectralField out(f.band_limit());
  for (int k = 0; k <= f.band_limit(); ++k)
    for (int m = -k; m <= k; ++m) out(k, m) = std::conj(f(k, -m));
  return out;
}

/// Highest degree carrying a nonzero coefficient, or -1 for the zero field.
inline int effective_degree(const SpectralField& f) {
  for (int k = f.band_limit(); k >= 0; --k)
    for (const auto& c : f.degree(k))
      if (c != cplx{}) return k;
  return -1;
}

/// Coefficient-space pairing sum conj(f) g.
inline cplx l2_inner(const SpectralField& f, const SpectralField& g) {
  detail::require(f.band_limit() == g.band_limit(), "l2_inner: band-limit mismatch");
  cplx s = 0.0;
  auto a = f.coefficients();
  auto b = g.coefficients();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace shg
