#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "shg/errors.hpp"
#include "shg/fields.hpp"
#include "shg/projectors.hpp"
#include "shg/spectrum.hpp"
#include "shg/transform.hpp"

namespace shg {

/// Physical parameters of
///   i v_t + s_v Lap v - v         = eps1 u conj(v)
///   i u_t + s_u Lap u / sigma - alpha u / sigma = eps2 v^2 / (2 sigma)
/// with sigma = beta / theta and s_v, s_u in {+1, -1}; (+1, +1) by default.
struct EvolutionParams {
  std::int64_t beta = 1;
  std::int64_t theta = 1;
  double alpha = 0.0;
  cplx eps1{0.0, 0.0};
  cplx eps2{0.0, 0.0};
  int sign_v = +1;
  int sign_u = +1;

  double sigma() const { return static_cast<double>(beta) / static_cast<double>(theta); }

  void validate() const {
    detail::require(beta > 0 && theta > 0, "sigma = beta/theta needs positive integers");
    detail::require(sign_v == 1 || sign_v == -1, "dispersion sign must be +1 or -1");
    detail::require(sign_u == 1 || sign_u == -1, "dispersion sign must be +1 or -1");
    detail::require(std::isfinite(alpha), "alpha must be finite");
    detail::require(std::isfinite(eps1.real()) && std::isfinite(eps1.imag()) && std::isfinite(eps2.real()) &&
                        std::isfinite(eps2.imag()),
                    "coupling constants must be finite");
  }

  /// eps1 == conj(eps2): the mass is then a conserved quantity.
  bool mass_conservative() const { return eps1 == std::conj(eps2); }
};

/// e^{it(delta Lap - gamma)}.
struct GroupSpec {
  double delta = 1.0;
  double gamma = 1.0;

  static GroupSpec v_group(const EvolutionParams& p) { return {static_cast<double>(p.sign_v), 1.0}; }
  static GroupSpec u_group(const EvolutionParams& p) {
    const double s = p.sigma();
    return {p.sign_u / s, p.alpha / s};
  }
};

/// c_{k,m} -> exp(it(-delta mu_k - gamma)) c_{k,m}.
inline SpectralField linear_propagate(const SpectralField& f, const GroupSpec& spec, double t,
                                      const SpectrumModel& model = SpectrumModel::sphere(2)) {
  SpectralField out(f);
  if (t == 0.0) return out;
  for (int k = 0; k <= f.band_limit(); ++k) {
    const double w = -spec.delta * model.eigenvalue(k) - spec.gamma;
    const cplx ph = std::polar(1.0, t * w);
    for (auto& c : out.degree(k)) c *= ph;
  }
  return out;
}

namespace detail {

inline void require_product_grid(int band_limit, const SphereGrid& g) {
  require(band_limit <= g.band_limit(), "field band limit exceeds grid band limit");
  require(g.exact_degree() >= 3 * band_limit, "grid too small to integrate cubic products exactly");
}

inline void check_pair(const SpectralField& v, const SpectralField& u) {
  require(v.band_limit() == u.band_limit(), "v and u must share one band limit");
}

}  // namespace detail

/// (P_K(eps1 u conj v), P_K(eps2 v^2 / (2 sigma))) evaluated on the grid.
inline std::pair<SpectralField, SpectralField> nonlinear_terms(const SpectralField& v, const SpectralField& u,
                                                               const EvolutionParams& p, const SphereGrid& g) {
  detail::check_pair(v, u);
  detail::require_product_grid(v.band_limit(), g);
  const int kk = v.band_limit();
  if (p.eps1 == cplx{} && p.eps2 == cplx{}) return {SpectralField(kk), SpectralField(kk)};
  const GridField gv = synthesize(v, g);
  const GridField gu = synthesize(u, g);
  GridField a(g.n_theta(), g.n_phi()), b(g.n_theta(), g.n_phi());
  const cplx c2 = p.eps2 / (2.0 * p.sigma());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx x = gv.data()[i];
    a.data()[i] = p.eps1 * gu.data()[i] * std::conj(x);
    b.data()[i] = c2 * x * x;
  }
  return {analyze(a, g, kk), analyze(b, g, kk)};
}

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> v;
  std::vector<SpectralField> u;
  std::string solver;
  int iterations = 0;     // Picard sweeps
  std::int64_t steps = 0; // split-step steps or Duhamel panels
  double step_size = 0.0;
  double last_residual = 0.0;

  std::size_t size() const { return times.size(); }

  void push(double t, SpectralField vv, SpectralField uu) {
    times.push_back(t);
    v.push_back(std::move(vv));
    u.push_back(std::move(uu));
  }
};

namespace detail {

inline double h1_squared(const SpectralField& f, const SpectrumModel& model) {
  double s = 0.0;
  for (int k = 0; k <= f.band_limit(); ++k) {
    double b = 0.0;
    for (const auto& c : f.degree(k)) b += std::norm(c);
    s += (1.0 + model.eigenvalue(k)) * b;
  }
  return s;
}

inline bool all_finite(const SpectralField& f) {
  for (const auto& c : f.coefficients())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace detail

/// Largest linear frequency |delta mu_K + gamma| of either group.
inline double max_linear_frequency(int band_limit, const EvolutionParams& p,
                                   const SpectrumModel& model = SpectrumModel::sphere(2)) {
  const double mu = model.eigenvalue(band_limit);
  const GroupSpec gv = GroupSpec::v_group(p), gu = GroupSpec::u_group(p);
  return std::max({std::abs(gv.delta * mu + gv.gamma), std::abs(gv.gamma), std::abs(gu.delta * mu + gu.gamma),
                   std::abs(gu.gamma)});
}

/// ceil(64 T f_max): panel count for the Duhamel quadrature.
inline std::int64_t recommended_picard_panels(int band_limit, const EvolutionParams& p, double t_final,
                                              const SpectrumModel& model = SpectrumModel::sphere(2)) {
  return std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(64.0 * t_final * max_linear_frequency(band_limit, p, model))));
}

struct PicardOptions {
  std::int64_t panels = 0;  // 0: recommended_picard_panels
  int max_iter = 50;
  double tol = 1e-12;
  std::int64_t sample_every = 0;  // 0: only t = 0 and t = T
};

/// Fixed point of the discretized Duhamel map. The time integrals are taken
/// in the interaction picture, int V(-t') F(t') dt', by the composite
/// trapezoid rule on uniform panels.
inline Trajectory picard_iterate(const SpectralField& v0, const SpectralField& u0, const EvolutionParams& p,
                                 double t_final, const PicardOptions& opt, const SphereGrid& g,
                                 const SpectrumModel& model = SpectrumModel::sphere(2)) {
  p.validate();
  detail::check_pair(v0, u0);
  detail::require_product_grid(v0.band_limit(), g);
  detail::require(t_final > 0.0 && std::isfinite(t_final), "picard: T must be positive");
  detail::require(opt.tol > 0.0, "picard: tol must be positive");
  detail::require(opt.max_iter >= 1, "picard: max_iter must be >= 1");
  const std::int64_t n = opt.panels > 0 ? opt.panels : recommended_picard_panels(v0.band_limit(), p, t_final, model);
  detail::require(n <= 50'000'000 / std::max<std::int64_t>(1, static_cast<std::int64_t>(v0.size())),
                  "picard: too many panels for the band limit");
  const double h = t_final / static_cast<double>(n);
  const GroupSpec gv = GroupSpec::v_group(p), gu = GroupSpec::u_group(p);
  const int kk = v0.band_limit();

  // Iterates at every node, in the interaction picture: a_j = V(-t_j) v(t_j).
  std::vector<SpectralField> a(n + 1, v0), b(n + 1, u0);
  auto at_time = [&](std::int64_t j, bool is_v) {
    const double t = h * static_cast<double>(j);
    return is_v ? linear_propagate(a[j], gv, t, model) : linear_propagate(b[j], gu, t, model);
  };

  Trajectory traj;
  traj.solver = "picard";
  traj.steps = n;
  traj.step_size = h;
  const bool linear = p.eps1 == cplx{} && p.eps2 == cplx{};
  double residual = 0.0;
  int it = 0;
  if (!linear) {
    std::vector<SpectralField> fa(n + 1), fb(n + 1);
    for (it = 1; it <= opt.max_iter; ++it) {
      for (std::int64_t j = 0; j <= n; ++j) {
        const double t = h * static_cast<double>(j);
        auto [nv, nu] = nonlinear_terms(at_time(j, true), at_time(j, false), p, g);
        fa[j] = linear_propagate(nv, gv, -t, model);
        fb[j] = linear_propagate(nu, gu, -t, model);
      }
      residual = 0.0;
      SpectralField ia(kk), ib(kk);
      for (std::int64_t j = 0; j <= n; ++j) {
        if (j > 0) {
          ia += (0.5 * h) * (fa[j - 1] + fa[j]);
          ib += (0.5 * h) * (fb[j - 1] + fb[j]);
        }
        SpectralField na = v0 - cplx(0.0, 1.0) * ia;
        SpectralField nb = u0 - cplx(0.0, 1.0) * ib;
        // The groups are unitary and diagonal, so H1 differences can be taken
        // in the interaction picture.
        const double d = detail::h1_squared(na - a[j], model) + detail::h1_squared(nb - b[j], model);
        residual = std::max(residual, std::sqrt(d));
        a[j] = std::move(na);
        b[j] = std::move(nb);
      }
      if (!std::isfinite(residual))
        throw NumericalFailure("picard: non-finite iterate", t_final, residual);
      if (residual < opt.tol) break;
    }
    if (it > opt.max_iter)
      throw NumericalFailure("picard: no convergence after " + std::to_string(opt.max_iter) +
                                 " iterations (data too large or T too long)",
                             t_final, residual);
  }
  traj.iterations = linear ? 0 : it;
  traj.last_residual = residual;
  const std::int64_t stride = opt.sample_every > 0 ? opt.sample_every : n;
  for (std::int64_t j = 0; j <= n; j += stride) traj.push(h * static_cast<double>(j), at_time(j, true), at_time(j, false));
  if (traj.times.back() != t_final) traj.push(t_final, at_time(n, true), at_time(n, false));
  traj.times.back() = t_final;
  return traj;
}

enum class NonlinearSubstep {
  galerkin,  // RK4 on the band-limited (projected) ODE; each stage goes through the grid
  pointwise  // RK4 on grid values, one analysis at the end of the substep
};

struct SplitStepOptions {
  NonlinearSubstep substep = NonlinearSubstep::galerkin;
  std::int64_t sample_every = 1;  // record every n-th step; the final time is always recorded
  double blowup_mass_factor = 10.0;
};

namespace detail {

inline void nonlinear_substep_galerkin(SpectralField& v, SpectralField& u, const EvolutionParams& p,
                                       const SphereGrid& g, double h) {
  const cplx mi(0.0, -1.0);
  auto rhs = [&](const SpectralField& a, const SpectralField& b) {
    auto [nv, nu] = nonlinear_terms(a, b, p, g);
    return std::pair{mi * nv, mi * nu};
  };
  auto [k1v, k1u] = rhs(v, u);
  auto [k2v, k2u] = rhs(v + (0.5 * h) * k1v, u + (0.5 * h) * k1u);
  auto [k3v, k3u] = rhs(v + (0.5 * h) * k2v, u + (0.5 * h) * k2u);
  auto [k4v, k4u] = rhs(v + h * k3v, u + h * k3u);
  v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
}

inline void nonlinear_substep_pointwise(SpectralField& v, SpectralField& u, const EvolutionParams& p,
                                        const SphereGrid& g, double h) {
  const int kk = v.band_limit();
  GridField gv = synthesize(v, g), gu = synthesize(u, g);
  const cplx c1 = cplx(0.0, -1.0) * p.eps1;
  const cplx c2 = cplx(0.0, -1.0) * p.eps2 / (2.0 * p.sigma());
  for (std::size_t i = 0; i < gv.size(); ++i) {
    const cplx x = gv.data()[i], y = gu.data()[i];
    auto fv = [&](cplx a, cplx b) { return c1 * b * std::conj(a); };
    auto fu = [&](cplx a) { return c2 * a * a; };
    const cplx k1v = fv(x, y), k1u = fu(x);
    const cplx x2 = x + 0.5 * h * k1v, y2 = y + 0.5 * h * k1u;
    const cplx k2v = fv(x2, y2), k2u = fu(x2);
    const cplx x3 = x + 0.5 * h * k2v, y3 = y + 0.5 * h * k2u;
    const cplx k3v = fv(x3, y3), k3u = fu(x3);
    const cplx x4 = x + h * k3v, y4 = y + h * k3u;
    const cplx k4v = fv(x4, y4), k4u = fu(x4);
    gv.data()[i] = x + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    gu.data()[i] = y + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  }
  v = analyze(gv, g, kk);
  u = analyze(gu, g, kk);
}

}  // namespace detail

/// Strang splitting: half nonlinear substep, exact linear step, half
/// nonlinear substep. Throws NumericalFailure on non-finite coefficients or
/// runaway mass.
inline Trajectory splitstep_evolve(const SpectralField& v0, const SpectralField& u0, const EvolutionParams& p,
                                   double t_final, double dt, const SphereGrid& g,
                                   const SpectrumModel& model = SpectrumModel::sphere(2),
                                   const SplitStepOptions& opt = {}) {
  p.validate();
  detail::check_pair(v0, u0);
  detail::require_product_grid(v0.band_limit(), g);
  detail::require(t_final > 0.0 && std::isfinite(t_final), "splitstep: T must be positive");
  detail::require(dt > 0.0 && dt <= t_final, "splitstep: need 0 < dt <= T");
  detail::require(opt.sample_every >= 1, "splitstep: sample_every must be >= 1");
  const std::int64_t n = static_cast<std::int64_t>(std::llround(t_final / dt));
  detail::require(std::abs(static_cast<double>(n) * dt - t_final) <= 1e-9 * t_final,
                  "splitstep: T must be an integer multiple of dt");
  const double h = t_final / static_cast<double>(n);
  const GroupSpec gv = GroupSpec::v_group(p), gu = GroupSpec::u_group(p);
  const bool linear = p.eps1 == cplx{} && p.eps2 == cplx{};
  const double sigma = p.sigma();
  const double mass0 = v0.norm_squared() + 2.0 * sigma * u0.norm_squared();

  auto half = [&](SpectralField& v, SpectralField& u) {
    if (linear) return;
    if (opt.substep == NonlinearSubstep::galerkin)
      detail::nonlinear_substep_galerkin(v, u, p, g, 0.5 * h);
    else
      detail::nonlinear_substep_pointwise(v, u, p, g, 0.5 * h);
  };

  Trajectory traj;
  traj.solver = opt.substep == NonlinearSubstep::galerkin ? "splitstep-galerkin" : "splitstep-pointwise";
  traj.step_size = h;
  traj.steps = n;
  traj.push(0.0, v0, u0);
  SpectralField v = v0, u = u0;
  for (std::int64_t s = 1; s <= n; ++s) {
    half(v, u);
    v = linear_propagate(v, gv, h, model);
    u = linear_propagate(u, gu, h, model);
    half(v, u);
    const double t = h * static_cast<double>(s);
    if (!detail::all_finite(v) || !detail::all_finite(u))
      throw NumericalFailure("splitstep: non-finite coefficients (blow-up before t = " + std::to_string(t) + ")",
                             t, std::numeric_limits<double>::infinity());
    const double mass = v.norm_squared() + 2.0 * sigma * u.norm_squared();
    if (mass > opt.blowup_mass_factor * std::max(mass0, 1e-300))
      throw NumericalFailure("splitstep: mass grew past " + std::to_string(opt.blowup_mass_factor) +
                                 "x its initial value near t = " + std::to_string(t),
                             t, mass / std::max(mass0, 1e-300));
    if (s % opt.sample_every == 0 || s == n) traj.push(s == n ? t_final : t, v, u);
  }
  return traj;
}

}  // namespace shg
