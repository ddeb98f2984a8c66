#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "shg/errors.hpp"

namespace shg {

using cplx = std::complex<double>;

struct GaussLegendreRule {
  std::vector<double> nodes;    // descending, nodes[n-1-j] == -nodes[j]
  std::vector<double> weights;  // positive, sum to 2
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre(int n) {
  detail::require(n >= 1, "Gauss-Legendre rule needs at least one node");
  GaussLegendreRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = x;
    rule.nodes[n - 1 - i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    if (p) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(p);
    }
  }
};

using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

/// Longitude FFTs over all colatitude rows of a grid, in place.
struct RowFft {
  PlanHandle forward;
  PlanHandle backward;

  RowFft(int rows, int n_phi) {
    std::vector<cplx> scratch(static_cast<std::size_t>(rows) * n_phi);
    auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
    int n[] = {n_phi};
    std::lock_guard lock(fftw_planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward.reset(fftw_plan_many_dft(1, n, rows, data, nullptr, 1, n_phi, data, nullptr, 1, n_phi,
                                     FFTW_FORWARD, flags));
    backward.reset(fftw_plan_many_dft(1, n, rows, data, nullptr, 1, n_phi, data, nullptr, 1, n_phi,
                                      FFTW_BACKWARD, flags));
    if (!forward || !backward) throw ConfigError("FFTW failed to create longitude plans");
  }
};

}  // namespace detail

/// Gauss-Legendre x equispaced-longitude quadrature grid with band limit K and
/// the fully normalized associated Legendre table P_k^m(cos theta_j),
/// normalized so that Y_{k,m} = P_k^m(cos theta) e^{i m phi} is orthonormal on
/// the unit sphere (no Condon-Shortley phase).
///
/// Default sizing n_theta = 2K+2, n_phi >= 4K+2 (rounded up to a 5-smooth
/// length for the FFT) integrates the product of any four band-K harmonics
/// exactly. Immutable after construction; copies share
/// the tables and FFT plans.
class SphereGrid {
 public:
  static constexpr int max_band_limit = 2048;

  explicit SphereGrid(int band_limit) : SphereGrid(band_limit, 2 * band_limit + 2, smooth_length(4 * band_limit + 2)) {}

  /// Smallest even n >= lower with no prime factor above 5.
  static int smooth_length(int lower) {
    for (int n = lower + (lower & 1);; n += 2) {
      int r = n;
      for (int p : {2, 3, 5})
        while (r % p == 0) r /= p;
      if (r == 1) return n;
    }
  }

  SphereGrid(int band_limit, int n_theta, int n_phi) {
    detail::require(band_limit >= 1, "band limit K must be >= 1");
    detail::require(band_limit <= max_band_limit, "band limit exceeds the Legendre table capacity");
    detail::require(n_theta >= band_limit + 1 && n_theta % 2 == 0,
                    "n_theta must be even and >= K+1");
    detail::require(n_phi >= 2 * band_limit + 1, "n_phi must be >= 2K+1");
    auto s = std::make_shared<State>();
    s->k = band_limit;
    s->n_theta = n_theta;
    s->n_phi = n_phi;
    auto rule = gauss_legendre(n_theta);
    s->cos_theta = std::move(rule.nodes);
    s->weights = std::move(rule.weights);
    s->build_legendre();
    s->fft = std::make_unique<detail::RowFft>(n_theta, n_phi);
    state_ = std::move(s);
  }

  int band_limit() const { return state_->k; }
  int n_theta() const { return state_->n_theta; }
  int n_phi() const { return state_->n_phi; }
  int half_rows() const { return state_->n_theta / 2; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta()) * n_phi(); }

  std::span<const double> cos_theta() const { return state_->cos_theta; }
  /// Gauss-Legendre weights in x = cos(theta); they sum to 2.
  std::span<const double> weights() const { return state_->weights; }
  double phi(int p) const { return 2.0 * std::numbers::pi * p / n_phi(); }
  /// Quadrature weight of node (j, p) for integrals over the sphere.
  double area_weight(int j) const { return state_->weights[j] * 2.0 * std::numbers::pi / n_phi(); }

  /// Largest total polynomial degree integrated exactly by the rule.
  int exact_degree() const { return std::min(2 * n_theta() - 1, n_phi() - 1); }

  /// Legendre values P_k^m at the nonnegative-x half rows j < n_theta/2,
  /// stored [k - m][j]. Rows j' = n_theta-1-j follow from parity (-1)^{k+m}.
  std::span<const double> legendre(int m) const {
    const auto& s = *state_;
    const std::size_t h = s.n_theta / 2;
    return std::span<const double>(s.table.data() + s.offset[m], (s.k - m + 1) * h);
  }

  void fft_rows_forward(cplx* data) const {
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(state_->fft->forward.get(), d, d);
  }
  void fft_rows_backward(cplx* data) const {
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(state_->fft->backward.get(), d, d);
  }

 private:
  struct State {
    int k = 0;
    int n_theta = 0;
    int n_phi = 0;
    std::vector<double> cos_theta;
    std::vector<double> weights;
    std::vector<std::size_t> offset;
    std::vector<double> table;
    std::unique_ptr<detail::RowFft> fft;

    void build_legendre() {
      const std::size_t h = n_theta / 2;
      offset.resize(k + 1);
      std::size_t total = 0;
      for (int m = 0; m <= k; ++m) {
        offset[m] = total;
        total += static_cast<std::size_t>(k - m + 1) * h;
      }
      table.assign(total, 0.0);
      std::vector<double> pmm(h);
      for (std::size_t j = 0; j < h; ++j) pmm[j] = 1.0 / std::sqrt(4.0 * std::numbers::pi);
      for (int m = 0; m <= k; ++m) {
        if (m > 0) {
          const double f = std::sqrt((2.0 * m + 1.0) / (2.0 * m));
          for (std::size_t j = 0; j < h; ++j) {
            const double x = cos_theta[j];
            pmm[j] *= f * std::sqrt((1.0 - x) * (1.0 + x));
          }
        }
        double* base = table.data() + offset[m];
        for (std::size_t j = 0; j < h; ++j) base[j] = pmm[j];
        if (m + 1 <= k) {
          const double f = std::sqrt(2.0 * m + 3.0);
          for (std::size_t j = 0; j < h; ++j) base[h + j] = f * cos_theta[j] * pmm[j];
        }
        for (int deg = m + 2; deg <= k; ++deg) {
          const double d2 = static_cast<double>(deg) * deg;
          const double a = std::sqrt((4.0 * d2 - 1.0) / (d2 - static_cast<double>(m) * m));
          const double dm1 = deg - 1.0;
          const double b = std::sqrt((dm1 * dm1 - static_cast<double>(m) * m) / (4.0 * dm1 * dm1 - 1.0));
          double* cur = base + static_cast<std::size_t>(deg - m) * h;
          const double* p1 = cur - h;
          const double* p2 = cur - 2 * h;
          for (std::size_t j = 0; j < h; ++j) cur[j] = a * (cos_theta[j] * p1[j] - b * p2[j]);
        }
      }
    }
  };

  std::shared_ptr<const State> state_;
};

inline SphereGrid build_grid(int band_limit) { return SphereGrid(band_limit); }

}  // namespace shg
