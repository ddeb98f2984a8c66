#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "shg/fields.hpp"
#include "shg/spectrum.hpp"

namespace shg {

/// P_k: keep only degree k.
inline SpectralField project_degree(const SpectralField& f, int k) {
  SpectralField out(f.band_limit());
  if (k < 0 || k > f.band_limit()) return out;
  auto src = f.degree(k);
  auto dst = out.degree(k);
  std::copy(src.begin(), src.end(), dst.begin());
  return out;
}

/// Pi_N: keep the degrees with N <= <mu_k>^{1/2} < 2N.
inline SpectralField dyadic_project(const SpectralField& f, std::int64_t n_dyadic,
                                    const SpectrumModel& model = SpectrumModel::sphere(2)) {
  const DegreeRange r = dyadic_degrees(model, n_dyadic, f.band_limit());
  SpectralField out(f.band_limit());
  for (int k = r.first; k <= r.last; ++k) {
    auto src = f.degree(k);
    auto dst = out.degree(k);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return out;
}

/// Dyadic frequencies whose blocks meet degrees 0..band_limit, ascending.
inline std::vector<std::int64_t> dyadic_cover(int band_limit, const SpectrumModel& model = SpectrumModel::sphere(2)) {
  std::vector<std::int64_t> out;
  for (int k = 0; k <= band_limit; ++k) {
    const std::int64_t n = dyadic_label(model, k);
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

/// (sum_{k,m} <mu_k>^s |c_{k,m}|^2)^{1/2}.
inline double sobolev_norm(const SpectralField& f, double s, const SpectrumModel& model = SpectrumModel::sphere(2)) {
  double total = 0.0;
  for (int k = 0; k <= f.band_limit(); ++k) {
    double block = 0.0;
    for (const auto& c : f.degree(k)) block += std::norm(c);
    if (block == 0.0) continue;
    total += std::pow(japanese(model.eigenvalue(k)), s) * block;
  }
  return std::sqrt(total);
}

/// sum_k mu_k ||P_k f||^2, which equals the integral of |grad f|^2.
inline double gradient_norm_squared(const SpectralField& f, const SpectrumModel& model = SpectrumModel::sphere(2)) {
  double total = 0.0;
  for (int k = 1; k <= f.band_limit(); ++k) {
    double block = 0.0;
    for (const auto& c : f.degree(k)) block += std::norm(c);
    total += model.eigenvalue(k) * block;
  }
  return total;
}

}  // namespace shg
