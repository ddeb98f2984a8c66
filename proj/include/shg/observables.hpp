#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "shg/dynamics.hpp"
#include "shg/errors.hpp"
#include "shg/fields.hpp"
#include "shg/projectors.hpp"
#include "shg/transform.hpp"

namespace shg {

/// ||v||^2 + 2 sigma ||u||^2.
inline double mass(const SpectralField& v, const SpectralField& u, double sigma) {
  detail::require(v.band_limit() == u.band_limit(), "mass: band-limit mismatch");
  return v.norm_squared() + 2.0 * sigma * u.norm_squared();
}

/// int v^2 conj(u) by quadrature.
inline cplx cubic_coupling(const SpectralField& v, const SpectralField& u, const SphereGrid& g) {
  detail::check_pair(v, u);
  detail::require_product_grid(v.band_limit(), g);
  const GridField gv = synthesize(v, g), gu = synthesize(u, g);
  cplx total{};
  for (int j = 0; j < g.n_theta(); ++j) {
    cplx row{};
    for (int p = 0; p < g.n_phi(); ++p) row += gv(j, p) * gv(j, p) * std::conj(gu(j, p));
    total += g.area_weight(j) * row;
  }
  return total;
}

/// |grad v|^2 + |grad u|^2 + |v|^2 + alpha |u|^2 integrated, plus Re(eps1 int v^2 conj(u)).
inline double energy(const SpectralField& v, const SpectralField& u, const EvolutionParams& p, const SphereGrid& g,
                     const SpectrumModel& model = SpectrumModel::sphere(2)) {
  detail::check_pair(v, u);
  double e = gradient_norm_squared(v, model) + gradient_norm_squared(u, model) + v.norm_squared() +
             p.alpha * u.norm_squared();
  if (p.eps1 != cplx{}) e += std::real(p.eps1 * cubic_coupling(v, u, g));
  return e;
}

struct ConservationReport {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  double mass_drift = 0.0;
  double energy_drift = 0.0;
  bool mass_conservative = false;    // eps1 == conj(eps2)
  bool energy_conservative = false;  // eps1 == eps2 real, signs (+,+)

  std::size_t size() const { return times.size(); }
};

inline double relative_drift(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double worst = 0.0;
  for (double x : xs) worst = std::max(worst, std::abs(x - xs.front()));
  return worst / std::max(std::abs(xs.front()), 1e-30);
}

inline ConservationReport conservation_report(const Trajectory& traj, const EvolutionParams& p, const SphereGrid& g,
                                              const SpectrumModel& model = SpectrumModel::sphere(2)) {
  ConservationReport r;
  r.mass_conservative = p.mass_conservative();
  r.energy_conservative = p.eps1 == p.eps2 && p.eps1.imag() == 0.0 && p.sign_v == 1 && p.sign_u == 1;
  const double sigma = p.sigma();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    r.times.push_back(traj.times[i]);
    r.mass.push_back(mass(traj.v[i], traj.u[i], sigma));
    r.energy.push_back(energy(traj.v[i], traj.u[i], p, g, model));
  }
  r.mass_drift = relative_drift(r.mass);
  r.energy_drift = relative_drift(r.energy);
  return r;
}

}  // namespace shg
