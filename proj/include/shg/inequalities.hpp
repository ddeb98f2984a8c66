#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shg/dynamics.hpp"
#include "shg/errors.hpp"
#include "shg/fields.hpp"
#include "shg/observables.hpp"
#include "shg/projectors.hpp"
#include "shg/random.hpp"
#include "shg/spectrum.hpp"
#include "shg/sphere_grid.hpp"
#include "shg/transform.hpp"

namespace shg {

/// Interpolation exponent dp(r-q) / (r(q(p-d) + dp)).
inline double gn_theta(int d, double p, double q, double r) {
  return d * p * (r - q) / (r * (q * (p - d) + d * p));
}

struct GNParams {
  int d = 2;
  double p = 2.0, q = 2.0, r = 4.0;
  double theta = 0.5;
  double A = 1.0, B = 1.0;

  static GNParams make(int d, double p, double q, double r, double A, double B) {
    detail::require(d >= 1, "GNParams: dimension must be >= 1");
    detail::require(p > 1.0 && p <= 2.0, "GNParams: need 1 < p <= 2");
    detail::require(q >= 1.0 && q < r, "GNParams: need 1 <= q < r");
    if (p < d) detail::require(r < d * p / (d - p), "GNParams: need r < dp/(d-p)");
    detail::require(A > 0.0 && B > 0.0, "GNParams: constants must be positive");
    GNParams g{d, p, q, r, gn_theta(d, p, q, r), A, B};
    detail::require(g.theta > 0.0 && g.theta <= 1.0, "GNParams: theta outside (0, 1]");
    return g;
  }
};

/// theta_r = d/2 - d/r for p = q = 2; r in (2, inf) for d = 2, (2, 2d/(d-2)) otherwise.
inline double theta_r(int d, double r) {
  detail::require(d >= 1, "theta_r: dimension must be >= 1");
  const bool ok = d <= 2 ? (r > 2.0 && std::isfinite(r)) : (r > 2.0 && r < 2.0 * d / (d - 2.0));
  if (!ok) throw ConfigError("gn: exponent r = " + std::to_string(r) + " out of range for d = " + std::to_string(d));
  return 0.5 * d - d / r;
}

/// (sum w |f|^r)^{1/r} over the grid.
inline double lr_norm(const GridField& f, double r, const SphereGrid& g) {
  detail::require(r >= 1.0, "lr_norm: need r >= 1");
  detail::require(f.n_theta() == g.n_theta() && f.n_phi() == g.n_phi(), "lr_norm: grid dimension mismatch");
  double s = 0.0;
  for (int j = 0; j < g.n_theta(); ++j) {
    double row = 0.0;
    for (int p = 0; p < g.n_phi(); ++p) row += std::pow(std::abs(f(j, p)), r);
    s += g.area_weight(j) * row;
  }
  return std::pow(s, 1.0 / r);
}

struct GNRatio {
  double r = 0.0;
  double theta = 0.0;
  double lhs = 0.0;        // ||f||_{L^r}
  double grad_term = 0.0;  // ||grad f||^theta ||f||^{1-theta}
  double mass_term = 0.0;  // ||f||_{L^2}
  double ratio = 0.0;      // lhs / (grad_term + mass_term)
};

inline GNRatio gn_ratio(const SpectralField& f, double r, const SphereGrid& g,
                        const SpectrumModel& model = SpectrumModel::sphere(2)) {
  detail::require(model.dimension() == 2, "gn_ratio: the grid lives on S^2");
  detail::require(f.band_limit() <= g.band_limit(), "gn_ratio: field band limit exceeds grid band limit");
  GNRatio out;
  out.r = r;
  out.theta = theta_r(model.dimension(), r);
  out.lhs = lr_norm(synthesize(f, g), r, g);
  const double grad = std::sqrt(gradient_norm_squared(f, model));
  const double l2 = f.norm();
  out.grad_term = grad > 0.0 ? std::pow(grad, out.theta) * std::pow(l2, 1.0 - out.theta) : 0.0;
  out.mass_term = l2;
  const double den = out.grad_term + out.mass_term;
  out.ratio = den > 0.0 ? out.lhs / den : 0.0;
  return out;
}

/// lhs <= A^{theta/2} grad_term + B^{theta/2} mass_term.
inline bool gn_holds(const GNRatio& x, double A, double B) {
  return x.lhs <= std::pow(A, 0.5 * x.theta) * x.grad_term + std::pow(B, 0.5 * x.theta) * x.mass_term;
}

/// Unit-norm fields with complex Gaussian coefficients on every degree <= K.
inline std::vector<SpectralField> random_corpus(int count, int band_limit, std::uint64_t seed) {
  detail::require(count >= 1, "random_corpus: need count >= 1");
  detail::require(band_limit >= 0, "random_corpus: negative band limit");
  std::vector<SpectralField> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    SpectralField f(band_limit);
    detail::fill_gaussian(f.coefficients(), detail::stream_seed(seed, 21, i));
    detail::normalize(f);
    out.push_back(std::move(f));
  }
  return out;
}

struct GNEnvelope {
  double r = 0.0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  std::size_t argmax = 0;
};

inline GNEnvelope gn_envelope(std::span<const SpectralField> corpus, double r, const SphereGrid& g,
                              const SpectrumModel& model = SpectrumModel::sphere(2)) {
  detail::require(!corpus.empty(), "gn_envelope: empty corpus");
  GNEnvelope e;
  e.r = r;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    e.ratios.push_back(gn_ratio(corpus[i], r, g, model).ratio);
    if (i == 0 || e.ratios.back() > e.max_ratio) {
      e.max_ratio = e.ratios.back();
      e.argmax = i;
    }
  }
  return e;
}

struct GNCalibration {
  double r = 0.0;
  double A = 0.0;  // smallest A (to tol) with the inequality holding on every sample
  double B = 0.0;
  double tol = 0.0;
  int iterations = 0;
  std::size_t samples = 0;
};

/// Bisection for the smallest A with B fixed such that
/// ||f||_r <= A^{theta/2}||grad f||^theta ||f||^{1-theta} + B^{theta/2}||f|| holds on the corpus.
inline GNCalibration calibrate_gn(std::span<const SpectralField> corpus, double r, double B, const SphereGrid& g,
                                  const SpectrumModel& model = SpectrumModel::sphere(2), double tol = 1e-6) {
  detail::require(!corpus.empty(), "calibrate_gn: empty corpus");
  detail::require(B > 0.0, "calibrate_gn: B must be positive");
  detail::require(tol > 0.0, "calibrate_gn: tolerance must be positive");
  std::vector<GNRatio> xs;
  for (const auto& f : corpus) xs.push_back(gn_ratio(f, r, g, model));
  auto all_hold = [&](double A) {
    return std::all_of(xs.begin(), xs.end(), [&](const GNRatio& x) { return gn_holds(x, A, B); });
  };
  GNCalibration c{r, 0.0, B, tol, 0, corpus.size()};
  if (all_hold(0.0)) return c;
  double lo = 0.0, hi = 1.0;
  while (!all_hold(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericalFailure("calibrate_gn: no finite A satisfies the corpus", 0.0, hi);
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (all_hold(mid) ? hi : lo) = mid;
    ++c.iterations;
  }
  c.A = hi;
  return c;
}

/// Right-hand side of the a-priori H^1 bound for the conservative system:
///   |1-alpha| (4/(4-d)) M0/(2 sigma) + C^{4/(4-d)} + (4/(4-d)) (B^{d/4} sqrt(2/sigma) M0^{3/2} + |E0|),
///   C = A^{d/4} sqrt(2/sigma) M0^{(6-d)/4}.
inline double apriori_h1_bound(double sigma, double alpha, int d, double M0, double E0, double A, double B) {
  if (d != 2 && d != 3)
    throw ConfigError("apriori_h1_bound: only d = 2, 3 are in scope (got d = " + std::to_string(d) + ")");
  detail::require(sigma > 0.0, "apriori_h1_bound: sigma must be positive");
  detail::require(M0 >= 0.0, "apriori_h1_bound: mass must be nonnegative");
  detail::require(A >= 0.0 && B >= 0.0, "apriori_h1_bound: constants must be nonnegative");
  const double dd = d;
  const double young = 4.0 / (4.0 - dd);
  const double c = std::pow(A, dd / 4.0) * std::sqrt(2.0 / sigma) * std::pow(M0, (6.0 - dd) / 4.0);
  return std::abs(1.0 - alpha) * young * M0 / (2.0 * sigma) + std::pow(c, young) +
         young * (std::pow(B, dd / 4.0) * std::sqrt(2.0 / sigma) * std::pow(M0, 1.5) + std::abs(E0));
}

/// ||v||_{H^1}^2 + ||u||_{H^1}^2 with ||f||_{H^1}^2 = sum (1 + mu_k)|c_{k,m}|^2.
inline double h1_norm_squared(const SpectralField& v, const SpectralField& u,
                              const SpectrumModel& model = SpectrumModel::sphere(2)) {
  return gradient_norm_squared(v, model) + v.norm_squared() + gradient_norm_squared(u, model) + u.norm_squared();
}

struct ConfinementReport {
  double A = 0.0;
  double B = 0.0;
  double M0 = 0.0;
  double E0 = 0.0;
  double bound = 0.0;
  std::vector<double> times;
  std::vector<double> h1;  // ||v||_{H^1}^2 + ||u||_{H^1}^2 at each sample
  double max_h1 = 0.0;
  bool confined = true;
};

/// Calibrates A at r = 4 on the sampled fields of the trajectory, then
/// compares the measured H^1 norms with apriori_h1_bound(M(0), E(0), A, B).
inline ConfinementReport apriori_confinement(const Trajectory& traj, const EvolutionParams& p, double B,
                                             const SphereGrid& g,
                                             const SpectrumModel& model = SpectrumModel::sphere(2)) {
  detail::require(traj.size() >= 1, "apriori_confinement: empty trajectory");
  detail::require(p.eps1 == p.eps2 && p.eps1.imag() == 0.0 && p.sign_v == 1 && p.sign_u == 1,
                  "apriori_confinement: needs real eps1 = eps2 and (+,+) dispersion");
  std::vector<SpectralField> corpus;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    corpus.push_back(traj.v[i]);
    corpus.push_back(traj.u[i]);
  }
  const auto cal = calibrate_gn(corpus, 4.0, B, g, model);
  ConfinementReport r;
  r.A = cal.A;
  r.B = B;
  r.M0 = mass(traj.v[0], traj.u[0], p.sigma());
  r.E0 = energy(traj.v[0], traj.u[0], p, g, model);
  r.bound = apriori_h1_bound(p.sigma(), p.alpha, model.dimension(), r.M0, r.E0, r.A, r.B);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    r.times.push_back(traj.times[i]);
    r.h1.push_back(h1_norm_squared(traj.v[i], traj.u[i], model));
    r.max_h1 = std::max(r.max_h1, r.h1.back());
    r.confined = r.confined && r.h1.back() <= r.bound;
  }
  return r;
}

}  // namespace shg
