#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "shg/errors.hpp"
#include "shg/fields.hpp"

namespace shg {

namespace detail {

/// splitmix64 finalizer; derives independent stream seeds from a run seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                                 std::uint64_t d = 0) {
  std::uint64_t h = mix_seed(seed);
  for (std::uint64_t v : {a, b, c, d}) h = mix_seed(h ^ v);
  return h;
}

inline void fill_gaussian(std::span<cplx> out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (auto& c : out) {
    const double re = nd(rng);
    const double im = nd(rng);
    c = cplx(re, im);
  }
}

inline void normalize(SpectralField& f) {
  const double n = f.norm();
  require(n > 0.0, "cannot normalize the zero field");
  f *= 1.0 / n;
}

}  // namespace detail

/// Gaussian coefficients damped by exp(-decay k), rescaled to L^2 norm `amplitude`.
inline SpectralField smooth_random_field(int band_limit, std::uint64_t seed, double amplitude, double decay) {
  detail::require(band_limit >= 0, "smooth_random_field: negative band limit");
  detail::require(amplitude >= 0.0 && std::isfinite(amplitude), "smooth_random_field: amplitude must be >= 0");
  detail::require(decay >= 0.0 && std::isfinite(decay), "smooth_random_field: decay must be >= 0");
  SpectralField f(band_limit);
  detail::fill_gaussian(f.coefficients(), detail::stream_seed(seed, 31));
  for (int k = 0; k <= band_limit; ++k)
    for (auto& c : f.degree(k)) c *= std::exp(-decay * k);
  if (amplitude == 0.0) return SpectralField(band_limit);
  f *= amplitude / f.norm();
  return f;
}

}  // namespace shg
