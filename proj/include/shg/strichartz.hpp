#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <future>
#include <map>
#include <numbers>
#include <span>
#include <thread>
#include <vector>

#include "shg/errors.hpp"
#include "shg/fields.hpp"
#include "shg/random.hpp"
#include "shg/resonance.hpp"
#include "shg/spectrum.hpp"
#include "shg/sphere_grid.hpp"
#include "shg/transform.hpp"

namespace shg {

enum class ConjSign { plus, minus };

/// Unit-norm field with complex Gaussian coefficients on the degrees of block N (k <= K).
inline SpectralField random_localized(std::int64_t n_dyadic, int band_limit, std::uint64_t seed,
                                      const SpectrumModel& model = SpectrumModel::sphere(2)) {
  const DegreeRange r = dyadic_degrees(model, n_dyadic, band_limit);
  detail::require(!r.empty(), "random_localized: dyadic block has no degree <= K");
  SpectralField f(band_limit);
  auto first = f.degree(r.first);
  const std::size_t count = static_cast<std::size_t>(r.last + 1) * (r.last + 1) -
                            static_cast<std::size_t>(r.first) * r.first;
  detail::fill_gaussian(std::span<cplx>(first.data(), count), seed);
  detail::normalize(f);
  return f;
}

/// Unit-norm random harmonic of exact degree k.
inline SpectralField random_degree_harmonic(int band_limit, int k, std::uint64_t seed) {
  detail::require(k >= 0 && k <= band_limit, "random_degree_harmonic: degree outside the band limit");
  SpectralField f(band_limit);
  detail::fill_gaussian(f.degree(k), seed);
  detail::normalize(f);
  return f;
}

namespace detail {

struct Support {
  int lo = 0;
  int hi = -1;
};

inline Support support(const SpectralField& f) {
  Support s;
  s.hi = effective_degree(f);
  if (s.hi < 0) return s;
  for (int k = 0; k <= s.hi; ++k) {
    bool nz = false;
    for (const auto& c : f.degree(k)) nz = nz || c != cplx{};
    if (nz) {
      s.lo = k;
      break;
    }
  }
  return s;
}

/// int |a b|^2 over the sphere for grid values a, b.
inline double product_integral(const GridField& a, const GridField& b, const SphereGrid& g) {
  const int n_phi = g.n_phi();
  double s = 0.0;
  for (int r = 0; r < g.n_theta(); ++r) {
    const cplx* pa = a.data() + static_cast<std::size_t>(r) * n_phi;
    const cplx* pb = b.data() + static_cast<std::size_t>(r) * n_phi;
    double row = 0.0;
    for (int p = 0; p < n_phi; ++p) row += std::norm(pa[p]) * std::norm(pb[p]);
    s += g.area_weight(r) * row;
  }
  return s;
}

inline GaussLegendreRule unit_interval_rule(int n) {
  auto r = gauss_legendre(n);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = 0.5 * (1.0 + r.nodes[i]);
    r.weights[i] *= 0.5;
  }
  return r;
}

}  // namespace detail

/// Smallest admissible time-node count: ceil(W / pi) + 8, W the spread of
/// the time frequencies of |e^{it Lap/sigma} u0 e^{it Lap} v0|^2.
inline int required_time_nodes(const SpectralField& u0, const SpectralField& v0, const SigmaRational& s,
                               const SpectrumModel& model = SpectrumModel::sphere(2)) {
  const auto su = detail::support(u0), sv = detail::support(v0);
  if (su.hi < 0 || sv.hi < 0) return 8;
  const double wu = (model.eigenvalue(su.hi) - model.eigenvalue(su.lo)) / s.value();
  const double wv = model.eigenvalue(sv.hi) - model.eigenvalue(sv.lo);
  return static_cast<int>(std::ceil((wu + wv) / std::numbers::pi)) + 8;
}

/// || e^{+-it Lap/sigma} u0 . e^{it Lap} v0 ||_{L^2((0,1) x S^2)}, Gauss-Legendre in t.
/// The minus sign is evaluated as the plus sign on the conjugate function of u0.
inline double bilinear_product_norm(const SpectralField& u0, const SpectralField& v0, const SigmaRational& s,
                                    ConjSign sign, const SphereGrid& g, int n_t,
                                    const SpectrumModel& model = SpectrumModel::sphere(2)) {
  if (sign == ConjSign::minus) return bilinear_product_norm(conjugate(u0), v0, s, ConjSign::plus, g, n_t, model);
  const auto su = detail::support(u0), sv = detail::support(v0);
  if (su.hi < 0 || sv.hi < 0) return 0.0;
  detail::require(su.hi <= g.band_limit() && sv.hi <= g.band_limit(), "bilinear: field degree exceeds grid band limit");
  detail::require(g.exact_degree() >= 2 * (su.hi + sv.hi), "bilinear: grid not exact for the squared product");
  detail::require(n_t >= required_time_nodes(u0, v0, s, model), "bilinear: insufficient time nodes n_t");

  const auto rule = detail::unit_interval_rule(n_t);
  std::vector<cplx> ph_u(su.hi + 1), ph_v(sv.hi + 1);
  GridField a(g.n_theta(), g.n_phi()), b(g.n_theta(), g.n_phi());
  double total = 0.0;
  for (int j = 0; j < n_t; ++j) {
    const double t = rule.nodes[j];
    for (int k = su.lo; k <= su.hi; ++k) ph_u[k] = std::polar(1.0, -t * model.eigenvalue(k) / s.value());
    for (int k = sv.lo; k <= sv.hi; ++k) ph_v[k] = std::polar(1.0, -t * model.eigenvalue(k));
    std::fill(a.values().begin(), a.values().end(), cplx{});
    std::fill(b.values().begin(), b.values().end(), cplx{});
    detail::legendre_synthesis(u0.coefficients(), su.lo, su.hi, ph_u, g, a.data());
    detail::legendre_synthesis(v0.coefficients(), sv.lo, sv.hi, ph_v, g, b.data());
    g.fft_rows_backward(a.data());
    g.fft_rows_backward(b.data());
    total += rule.weights[j] * detail::product_integral(a, b, g);
  }
  return std::sqrt(total);
}

/// ||f h||_{L^2(S^2)} by quadrature.
inline double product_norm(const SpectralField& f, const SpectralField& h, const SphereGrid& g) {
  return std::sqrt(detail::product_integral(synthesize(f, g), synthesize(h, g), g));
}

/// Max over trials of ||H_k H_l|| / (||H_k|| ||H_l||) for random harmonics of degrees k, l.
inline double projector_bilinear_ratio(int k, int l, int trials, std::uint64_t seed, const SphereGrid& g) {
  detail::require(k >= 1 && l >= 1, "projector_bilinear_ratio needs k, l >= 1");
  detail::require(trials >= 1, "projector_bilinear_ratio needs trials >= 1");
  detail::require(std::max(k, l) <= g.band_limit() && g.exact_degree() >= 2 * (k + l),
                  "projector_bilinear_ratio: grid not exact for degree 2(k+l)");
  const int kk = std::max(k, l);
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto hk = random_degree_harmonic(kk, k, detail::stream_seed(seed, 1, k, l, t));
    const auto hl = random_degree_harmonic(kk, l, detail::stream_seed(seed, 2, k, l, t));
    best = std::max(best, product_norm(hk, hl, g));
  }
  return best;
}

struct ScanCell {
  std::int64_t n_dyadic = 0;
  std::int64_t l_dyadic = 0;
  int trial = 0;
  int time_nodes = 0;
  double ratio = 0.0;
};

struct FitPoint {
  std::int64_t min_nl = 0;
  double log2_min = 0.0;
  double log2_ratio = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // Euclidean norm of the fit residuals
  std::vector<FitPoint> points;
};

/// Least-squares line through (log2 min(N,L), log2 of the max ratio in that bucket).
template <class Cell>
FitResult scaling_fit(std::span<const Cell> cells) {
  std::map<std::int64_t, double> bucket;
  for (const auto& c : cells) {
    detail::require(c.ratio > 0.0 && std::isfinite(c.ratio), "scaling_fit: ratios must be positive");
    const std::int64_t key = std::min(c.n_dyadic, c.l_dyadic);
    detail::require(key >= 1, "scaling_fit: min(N, L) must be >= 1");
    auto [it, fresh] = bucket.emplace(key, c.ratio);
    if (!fresh) it->second = std::max(it->second, c.ratio);
  }
  detail::require(bucket.size() >= 2, "scaling_fit: need at least two distinct values of min(N, L)");
  FitResult r;
  double sx = 0, sy = 0;
  for (const auto& [key, v] : bucket) {
    r.points.push_back({key, std::log2(static_cast<double>(key)), std::log2(v)});
    sx += r.points.back().log2_min;
    sy += r.points.back().log2_ratio;
  }
  const double n = static_cast<double>(r.points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& p : r.points) {
    sxx += (p.log2_min - mx) * (p.log2_min - mx);
    sxy += (p.log2_min - mx) * (p.log2_ratio - my);
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double rr = 0;
  for (const auto& p : r.points) {
    const double e = p.log2_ratio - (r.intercept + r.slope * p.log2_min);
    rr += e * e;
  }
  r.residual = std::sqrt(rr);
  return r;
}

template <class Cell>
FitResult scaling_fit(const std::vector<Cell>& cells) {
  return scaling_fit(std::span<const Cell>(cells));
}

struct ScanConfig {
  std::vector<std::int64_t> n_list;
  std::vector<std::int64_t> l_list;
  int trials = 1;
  std::uint64_t seed = 0;
  SigmaRational sigma;
  ConjSign sign = ConjSign::plus;
  int extra_time_nodes = 0;  // added to the required count
  int workers = 1;
};

/// Band limit holding blocks N and L.
inline int scan_band_limit(std::int64_t n_dyadic, std::int64_t l_dyadic,
                           const SpectrumModel& model = SpectrumModel::sphere(2)) {
  const auto bn = detail::block_degrees(model, n_dyadic);
  const auto bl = detail::block_degrees(model, l_dyadic);
  return std::max({bn.last, bl.last, 1});
}

/// One record per (N, L, trial), in (N, L, trial) order regardless of workers.
inline std::vector<ScanCell> strichartz_scan(const ScanConfig& cfg) {
  detail::require(cfg.trials >= 1, "strichartz_scan: trials must be >= 1");
  detail::require(!cfg.n_list.empty() && !cfg.l_list.empty(), "strichartz_scan: empty N or L list");
  detail::require(cfg.workers >= 1, "strichartz_scan: workers must be >= 1");
  for (auto n : cfg.n_list) detail::require(is_dyadic(n), "strichartz_scan: N must be a power of two");
  for (auto l : cfg.l_list) detail::require(is_dyadic(l), "strichartz_scan: L must be a power of two");

  struct Task {
    std::int64_t n, l;
    int trial;
  };
  std::vector<Task> tasks;
  for (auto n : cfg.n_list)
    for (auto l : cfg.l_list)
      for (int t = 0; t < cfg.trials; ++t) tasks.push_back({n, l, t});

  std::map<int, SphereGrid> grids;
  for (const auto& t : tasks) {
    const int kk = scan_band_limit(t.n, t.l);
    if (!grids.count(kk)) grids.emplace(kk, SphereGrid(kk));
  }

  std::vector<ScanCell> out(tasks.size());
  auto run = [&](std::size_t i) {
    const auto& t = tasks[i];
    const int kk = scan_band_limit(t.n, t.l);
    const auto u0 = random_localized(t.n, kk, detail::stream_seed(cfg.seed, 11, t.n, t.l, t.trial));
    const auto v0 = random_localized(t.l, kk, detail::stream_seed(cfg.seed, 12, t.n, t.l, t.trial));
    const int nt = required_time_nodes(cfg.sign == ConjSign::minus ? conjugate(u0) : u0, v0, cfg.sigma) +
                   cfg.extra_time_nodes;
    out[i] = {t.n, t.l, t.trial, nt, bilinear_product_norm(u0, v0, cfg.sigma, cfg.sign, grids.at(kk), nt)};
  };
  if (cfg.workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    for (int w = 0; w < cfg.workers; ++w)
      pool.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) run(i);
      }));
    for (auto& f : pool) f.get();
  }
  return out;
}

}  // namespace shg
