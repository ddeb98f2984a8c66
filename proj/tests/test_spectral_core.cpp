#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "shg/projectors.hpp"
#include "shg/spectrum.hpp"
#include "shg/transform.hpp"
#include "test_util.hpp"

using namespace shg;
using shg::testing::random_field;

namespace {

constexpr double pi = std::numbers::pi;

// Orthonormal Y_{k,m} from the standard library's associated Legendre
// function (which carries no Condon-Shortley phase), for |m| <= k <= ~60.
cplx reference_harmonic(int k, int m, double theta, double phi) {
  const int am = std::abs(m);
  const double lognorm = 0.5 * (std::log((2.0 * k + 1.0) / (4.0 * pi)) + std::lgamma(k - am + 1.0) -
                                std::lgamma(k + am + 1.0));
  const double p = std::assoc_legendre(k, am, std::cos(theta)) * std::exp(lognorm);
  return p * std::exp(cplx(0.0, m * phi));
}

}  // namespace

TEST(Eigenvalue, SphereAndZollValues) {
  EXPECT_EQ(eigenvalue(SpectrumModel::sphere(2), 1), 2.0);
  EXPECT_EQ(eigenvalue(SpectrumModel::sphere(3), 0), 0.0);
  EXPECT_EQ(eigenvalue(SpectrumModel::zoll(2, 0.5), 1), 2.25);
  EXPECT_EQ(eigenvalue(SpectrumModel::sphere(3), 2), 8.0);
}

TEST(Eigenvalue, StrictlyIncreasing) {
  for (auto model : {SpectrumModel::sphere(2), SpectrumModel::sphere(5), SpectrumModel::zoll(0, 1.0),
                     SpectrumModel::zoll(3, 2.0)}) {
    for (int k = 0; k < 500; ++k) EXPECT_LT(model.eigenvalue(k), model.eigenvalue(k + 1)) << model.describe();
  }
}

TEST(Eigenvalue, InvalidModelsRejected) {
  EXPECT_THROW(SpectrumModel::sphere(1), ConfigError);
  EXPECT_THROW(SpectrumModel::zoll(-1, 1.0), ConfigError);
  EXPECT_THROW(SpectrumModel::zoll(1, 0.0), ConfigError);
  EXPECT_THROW(HarmonicIndex(2, 3), ConfigError);
}

TEST(Grid, SizesAndWeights) {
  const SphereGrid g = build_grid(4);
  EXPECT_GE(g.n_theta(), 9);
  EXPECT_GE(g.n_phi(), 17);
  double sum = 0.0;
  for (double w : g.weights()) {
    EXPECT_GT(w, 0.0);
    sum += w;
  }
  EXPECT_NEAR(sum, 2.0, 1e-14);
  EXPECT_GE(g.exact_degree(), 4 * 4);
}

TEST(Grid, IntegratesLowDegreePolynomialExactly) {
  const SphereGrid g = build_grid(1);
  EXPECT_GE(g.n_theta(), 3);
  double s = 0.0;
  for (int j = 0; j < g.n_theta(); ++j) s += g.weights()[j] * g.cos_theta()[j] * g.cos_theta()[j];
  EXPECT_NEAR(s, 2.0 / 3.0, 1e-15);
}

TEST(Grid, RejectsZeroBandLimit) {
  EXPECT_THROW(build_grid(0), ConfigError);
  EXPECT_THROW(build_grid(SphereGrid::max_band_limit + 1), ConfigError);
}

TEST(Grid, LegendreTableMatchesStandardLibrary) {
  const SphereGrid g = build_grid(40);
  const int h = g.half_rows();
  double worst = 0.0;
  for (int m = 0; m <= 40; m += 3) {
    const auto t = g.legendre(m);
    for (int k = m; k <= 40; ++k) {
      for (int j = 0; j < h; j += 5) {
        const double theta = std::acos(g.cos_theta()[j]);
        const double ref = std::abs(reference_harmonic(k, m, theta, 0.0));
        worst = std::max(worst, std::abs(std::abs(t[(k - m) * h + j]) - ref));
      }
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Synthesize, ZeroModeIsConstant) {
  const SphereGrid g = build_grid(6);
  const auto v = synthesize(SpectralField::unit(6, 0, 0), g);
  for (const auto& x : v.values()) EXPECT_NEAR(std::abs(x - 1.0 / std::sqrt(4.0 * pi)), 0.0, 1e-15);
}

TEST(Synthesize, ZeroFieldIsZero) {
  const SphereGrid g = build_grid(5);
  const auto v = synthesize(SpectralField(5), g);
  for (const auto& x : v.values()) EXPECT_EQ(x, cplx{});
}

TEST(Synthesize, DegreeOneZonalClosedForm) {
  const SphereGrid g = build_grid(8);
  const auto v = synthesize(SpectralField::unit(8, 1, 0), g);
  for (int j = 0; j < g.n_theta(); ++j)
    for (int p = 0; p < g.n_phi(); ++p)
      EXPECT_NEAR(std::abs(v(j, p) - std::sqrt(3.0 / (4.0 * pi)) * g.cos_theta()[j]), 0.0, 1e-14);
}

TEST(Synthesize, MatchesReferenceHarmonics) {
  const SphereGrid g = build_grid(12);
  for (auto [k, m] : {std::pair{3, 2}, {3, -2}, {7, -7}, {12, 5}, {9, 0}}) {
    const auto v = synthesize(SpectralField::unit(12, k, m), g);
    double worst = 0.0;
    for (int j = 0; j < g.n_theta(); ++j)
      for (int p = 0; p < g.n_phi(); ++p)
        worst = std::max(worst, std::abs(v(j, p) - reference_harmonic(k, m, std::acos(g.cos_theta()[j]), g.phi(p))));
    EXPECT_LT(worst, 1e-13) << k << "," << m;
  }
}

TEST(Synthesize, Y32ClosedForm) {
  const SphereGrid g = build_grid(5);
  const auto v = synthesize(SpectralField::unit(5, 3, 2), g);
  for (int j = 0; j < g.n_theta(); ++j) {
    const double x = g.cos_theta()[j];
    for (int p = 0; p < g.n_phi(); ++p) {
      const cplx ref = 0.25 * std::sqrt(105.0 / (2.0 * pi)) * (1 - x * x) * x * std::exp(cplx(0, 2 * g.phi(p)));
      EXPECT_NEAR(std::abs(v(j, p) - ref), 0.0, 1e-14);
    }
  }
}

TEST(Synthesize, BandLimitMismatchRejected) {
  const SphereGrid g = build_grid(4);
  EXPECT_THROW(synthesize(SpectralField(5), g), ConfigError);
}

TEST(Analyze, RoundTripEveryBasisHarmonicK32) {
  const int kk = 32;
  const SphereGrid g = build_grid(kk);
  double worst = 0.0;
  for (int k = 0; k <= kk; ++k) {
    for (int m = -k; m <= k; ++m) {
      const auto e = SpectralField::unit(kk, k, m);
      const auto back = analyze(synthesize(e, g), g);
      for (const auto& c : (back - e).coefficients()) worst = std::max(worst, std::abs(c));
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Analyze, RandomRoundTripK16) {
  const SphereGrid g = build_grid(16);
  const auto f = random_field(16, 7);
  const auto back = analyze(synthesize(f, g), g);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    worst = std::max(worst, std::abs(back.coefficients()[i] - f.coefficients()[i]));
  EXPECT_LE(worst, 1e-10);
}

TEST(Analyze, ConstantField) {
  const SphereGrid g = build_grid(6);
  GridField v(g.n_theta(), g.n_phi());
  for (auto& x : v.values()) x = 1.0 / std::sqrt(4.0 * pi);
  const auto c = analyze(v, g);
  EXPECT_NEAR(std::abs(c(0, 0) - 1.0), 0.0, 1e-14);
  for (int k = 1; k <= 6; ++k)
    for (int m = -k; m <= k; ++m) EXPECT_LE(std::abs(c(k, m)), 1e-12);
}

TEST(Analyze, Y32ValuesRecoverUnitCoefficient) {
  const SphereGrid g = build_grid(6);
  GridField v(g.n_theta(), g.n_phi());
  for (int j = 0; j < g.n_theta(); ++j)
    for (int p = 0; p < g.n_phi(); ++p)
      v(j, p) = reference_harmonic(3, 2, std::acos(g.cos_theta()[j]), g.phi(p));
  const auto c = analyze(v, g);
  EXPECT_NEAR(std::abs(c(3, 2) - 1.0), 0.0, 1e-13);
  EXPECT_NEAR(c.norm_squared(), 1.0, 1e-13);
}

TEST(Analyze, DimensionMismatchRejected) {
  const SphereGrid g = build_grid(4);
  EXPECT_THROW(analyze(GridField(3, 3), g), ConfigError);
  const GridField v(g.n_theta(), g.n_phi());
  EXPECT_THROW(analyze(v, g, 5), ConfigError);
}

TEST(Analyze, ProductOfTwoBandLimitedFieldsIsExact) {
  // A product of degree-K fields has degree 2K; its low-degree projection is
  // recovered exactly, which the nonlinear solvers rely on.
  const int kk = 6;
  const SphereGrid g = build_grid(kk);
  const SphereGrid big = build_grid(2 * kk);
  const auto a = random_field(kk, 1), b = random_field(kk, 2);
  const auto va = synthesize(a, g), vb = synthesize(b, g);
  GridField prod(g.n_theta(), g.n_phi());
  for (std::size_t i = 0; i < prod.size(); ++i) prod.values()[i] = va.values()[i] * vb.values()[i];
  const auto low = analyze(prod, g);
  const auto wa = synthesize(a.resized(2 * kk), big), wb = synthesize(b.resized(2 * kk), big);
  GridField prod2(big.n_theta(), big.n_phi());
  for (std::size_t i = 0; i < prod2.size(); ++i) prod2.values()[i] = wa.values()[i] * wb.values()[i];
  const auto full = analyze(prod2, big).resized(kk);
  double worst = 0.0;
  for (std::size_t i = 0; i < low.size(); ++i)
    worst = std::max(worst, std::abs(low.coefficients()[i] - full.coefficients()[i]));
  EXPECT_LT(worst, 1e-12);
}

TEST(L2Inner, UnitAndOrthogonalModes) {
  const auto e = SpectralField::unit(4, 2, 1);
  EXPECT_EQ(l2_inner(e, e), cplx(1.0));
  EXPECT_EQ(l2_inner(e, SpectralField::unit(4, 2, -1)), cplx(0.0));
  EXPECT_THROW(l2_inner(e, SpectralField(3)), ConfigError);
}

TEST(L2Inner, ParsevalAgainstGridQuadrature) {
  const SphereGrid g = build_grid(8);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto f = random_field(8, 10 + s), h = random_field(8, 20 + s);
    const cplx spectral = l2_inner(f, h);
    const cplx quad = grid_inner(synthesize(f, g), synthesize(h, g), g);
    EXPECT_LE(std::abs(spectral - quad) / std::abs(spectral), 1e-10);
  }
}

TEST(Dyadic, BlockOneHoldsDegreesZeroAndOne) {
  const auto r = dyadic_degrees(SpectrumModel::sphere(2), 1, 50);
  EXPECT_EQ(r.first, 0);
  EXPECT_EQ(r.last, 1);
}

TEST(Dyadic, BlocksMatchFloatingPointEnumeration) {
  const auto model = SpectrumModel::sphere(2);
  for (int k = 0; k <= 400; ++k) {
    const double mu = model.eigenvalue(k);
    const double scale = std::pow(1.0 + mu * mu, 0.25);
    const auto n = dyadic_label(model, k);
    EXPECT_LE(static_cast<double>(n), scale + 1e-12);
    EXPECT_LT(scale, 2.0 * n);
  }
}

TEST(Dyadic, ProjectorAlgebra) {
  const int kk = 40;
  const auto f = random_field(kk, 3);
  const auto cover = dyadic_cover(kk);
  SpectralField sum(kk);
  for (auto n : cover) {
    const auto pf = dyadic_project(f, n);
    EXPECT_EQ(dyadic_project(pf, n), pf);
    for (auto n2 : cover)
      if (n2 != n) {
        EXPECT_EQ(dyadic_project(pf, n2).norm_squared(), 0.0);
      }
    sum += pf;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    worst = std::max(worst, std::abs(sum.coefficients()[i] - f.coefficients()[i]));
  EXPECT_LE(worst, 1e-14);
  EXPECT_THROW(dyadic_project(f, 3), ConfigError);
}

TEST(Dyadic, ProjectDegreeKeepsOneShell) {
  const auto f = random_field(5, 4);
  const auto p = project_degree(f, 3);
  for (int k = 0; k <= 5; ++k)
    for (int m = -k; m <= k; ++m) EXPECT_EQ(p(k, m), k == 3 ? f(k, m) : cplx{});
}

TEST(Sobolev, ClosedForms) {
  const auto f = random_field(6, 5);
  EXPECT_NEAR(sobolev_norm(f, 0.0), f.norm(), 1e-13);
  EXPECT_NEAR(sobolev_norm(SpectralField::unit(4, 2, 0), 2.0), std::sqrt(37.0), 1e-13);
  EXPECT_EQ(sobolev_norm(SpectralField(4), 1.3), 0.0);
}
