#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shg/inequalities.hpp"
#include "test_util.hpp"

using namespace shg;
using shg::testing::random_field;

namespace {

constexpr double pi = std::numbers::pi;
using Q = boost::rational<long long>;

double zonal(int k, double x) { return std::sqrt((2.0 * k + 1.0) / (4.0 * pi)) * boost::math::legendre_p(k, x); }

double to_double(Q q) { return boost::rational_cast<double>(q); }

}  // namespace

TEST(Theta, Values) {
  EXPECT_DOUBLE_EQ(theta_r(2, 4.0), 0.5);
  EXPECT_DOUBLE_EQ(theta_r(3, 3.0), 0.5);
  EXPECT_DOUBLE_EQ(gn_theta(2, 2.0, 2.0, 4.0), 0.5);
  EXPECT_THROW(theta_r(2, 2.0), ConfigError);
  EXPECT_THROW(theta_r(3, 6.0), ConfigError);
  EXPECT_THROW(theta_r(2, INFINITY), ConfigError);
  EXPECT_NO_THROW(GNParams::make(2, 2.0, 2.0, 6.0, 1.0, 1.0));
  EXPECT_THROW(GNParams::make(3, 2.0, 2.0, 6.0, 1.0, 1.0), ConfigError);
  EXPECT_THROW(GNParams::make(2, 2.0, 2.0, 6.0, 0.0, 1.0), ConfigError);
}

TEST(LrNorm, ConstantField) {
  SphereGrid g(4);
  const cplx c(1.5, -2.0);
  const auto f = synthesize((c * std::sqrt(4.0 * pi)) * SpectralField::unit(4, 0, 0), g);
  for (double r : {1.0, 2.0, 3.5, 8.0}) EXPECT_NEAR(lr_norm(f, r, g), std::abs(c) * std::pow(4.0 * pi, 1.0 / r), 1e-12);
  EXPECT_EQ(lr_norm(GridField(g.n_theta(), g.n_phi()), 4.0, g), 0.0);
}

TEST(LrNorm, ParsevalAtTwo) {
  SphereGrid g(9);
  const auto f = random_field(9, 5);
  EXPECT_NEAR(lr_norm(synthesize(f, g), 2.0, g), f.norm(), 1e-12 * f.norm());
}

TEST(LrNorm, ZonalFourthPower) {
  for (int k : {2, 5}) {
    SphereGrid g(2 * k);
    const auto f = synthesize(SpectralField::unit(2 * k, k, 0), g);
    auto q = [&](double x) { return std::pow(zonal(k, x), 4); };
    const double expect = std::pow(2.0 * pi * boost::math::quadrature::gauss<double, 30>::integrate(q, -1.0, 1.0), 0.25);
    EXPECT_NEAR(lr_norm(f, 4.0, g), expect, 1e-13);
  }
}

TEST(GNRatio, ConstantField) {
  SphereGrid g(3);
  const auto f = SpectralField::unit(3, 0, 0);
  for (double r : {3.0, 4.0, 10.0}) {
    const auto x = gn_ratio(f, r, g);
    EXPECT_EQ(x.grad_term, 0.0);
    EXPECT_NEAR(x.ratio, std::pow(4.0 * pi, 1.0 / r - 0.5), 1e-13);
  }
}

TEST(GNRatio, ScaleInvariant) {
  SphereGrid g(8);
  const auto f = random_field(8, 3);
  const auto a = gn_ratio(f, 4.0, g), b = gn_ratio(cplx(0.0, -7.5) * f, 4.0, g);
  EXPECT_NEAR(a.ratio, b.ratio, 1e-13 * a.ratio);
  EXPECT_NEAR(b.lhs, 7.5 * a.lhs, 1e-12 * b.lhs);
  EXPECT_THROW(gn_ratio(f, 4.0, g, SpectrumModel::sphere(3)), ConfigError);
}

TEST(GNHolds, Monotone) {
  GNRatio x{4.0, 0.5, 2.5, 1.0, 1.0, 1.0};
  EXPECT_FALSE(gn_holds(x, 1.0, 1.0));
  EXPECT_TRUE(gn_holds(x, 1.0, 16.0));
  EXPECT_TRUE(gn_holds(x, 39.0625, 0.0));
  EXPECT_FALSE(gn_holds(x, 39.0, 0.0));
}

TEST(Corpus, ReproducibleUnitFields) {
  const auto a = random_corpus(200, 32, 2024), b = random_corpus(200, 32, 2024);
  ASSERT_EQ(a.size(), 200u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_NEAR(a[i].norm(), 1.0, 1e-14);
  }
  EXPECT_NE(a[0], a[1]);
  SphereGrid g(32);
  const auto e1 = gn_envelope(a, 4.0, g), e2 = gn_envelope(b, 4.0, g);
  EXPECT_EQ(e1.max_ratio, e2.max_ratio);
  EXPECT_EQ(e1.argmax, e2.argmax);
  EXPECT_EQ(*std::max_element(e1.ratios.begin(), e1.ratios.end()), e1.max_ratio);
}

TEST(Calibration, MatchesClosedFormThreshold) {
  SphereGrid g(12);
  const auto corpus = random_corpus(40, 12, 5);
  const double r = 6.0, bb = 1e-3;
  // smallest A: max over samples of ((lhs - B^{theta/2} mass) / grad)^{2/theta}
  double a_star = 0.0;
  for (const auto& f : corpus) {
    const auto x = gn_ratio(f, r, g);
    const double need = x.lhs - std::pow(bb, 0.5 * x.theta) * x.mass_term;
    if (need > 0.0) a_star = std::max(a_star, std::pow(need / x.grad_term, 2.0 / x.theta));
  }
  ASSERT_GT(a_star, 0.0);
  const auto c = calibrate_gn(corpus, r, bb, g);
  EXPECT_NEAR(c.A, a_star, 2e-6);
  EXPECT_GE(c.A, a_star * (1.0 - 1e-12));
  for (const auto& f : corpus) EXPECT_TRUE(gn_holds(gn_ratio(f, r, g), c.A, bb));
  EXPECT_EQ(c.samples, 40u);
}

TEST(Calibration, LargeBNeedsNoGradientTerm) {
  SphereGrid g(6);
  const auto corpus = random_corpus(10, 6, 9);
  EXPECT_EQ(calibrate_gn(corpus, 4.0, 1e6, g).A, 0.0);
}

TEST(AprioriBound, TwoDimensionalRationalOracle) {
  // sigma = 1/2, alpha = 3/2, A = 9/4, B = 4, M0 = 4, E0 = -5/3
  const Q sigma(1, 2), alpha(3, 2), a(9, 4), e0(-5, 3);
  const Q m0(4), sqrt_two_over_sigma(2), sqrt_b(2), m0_32(8);
  const Q c = Q(3, 2) * sqrt_two_over_sigma * m0;  // A^{1/2} sqrt(2/sigma) M0
  const Q expect = (alpha - 1) * 2 * m0 / (2 * sigma) + c * c + 2 * (sqrt_b * sqrt_two_over_sigma * m0_32 - e0);
  EXPECT_NEAR(apriori_h1_bound(0.5, 1.5, 2, 4.0, -5.0 / 3.0, to_double(a), 4.0), to_double(expect), 1e-12);
}

TEST(AprioriBound, ThreeDimensionalRationalOracle) {
  // sigma = 2, alpha = 0, A = 16, B = 16, M0 = 16, E0 = 3
  const Q m0(16);
  const Q c = Q(8) * Q(1) * Q(8);  // A^{3/4} sqrt(2/sigma) M0^{3/4}
  const Q expect = Q(4) * m0 / 4 + c * c * c * c + 4 * (Q(8) * Q(64) + Q(3));
  EXPECT_NEAR(apriori_h1_bound(2.0, 0.0, 3, 16.0, 3.0, 16.0, 16.0), to_double(expect), 1e-6);
}

TEST(AprioriBound, Basics) {
  EXPECT_EQ(apriori_h1_bound(0.25, 1.0, 2, 0.0, 0.0, 3.0, 2.0), 0.0);
  double prev = -1.0;
  for (double e : {0.0, 0.5, 2.0, 10.0}) {
    const double b = apriori_h1_bound(1.0, 1.0, 2, 1.0, -e, 1.0, 1.0);
    EXPECT_GT(b, prev);
    prev = b;
  }
  EXPECT_THROW(apriori_h1_bound(1.0, 1.0, 4, 1.0, 1.0, 1.0, 1.0), ConfigError);
  EXPECT_THROW(apriori_h1_bound(1.0, 1.0, 1, 1.0, 1.0, 1.0, 1.0), ConfigError);
  EXPECT_THROW(apriori_h1_bound(-1.0, 1.0, 2, 1.0, 1.0, 1.0, 1.0), ConfigError);
}

TEST(H1Norm, Weights) {
  const auto v = SpectralField::unit(3, 2, -1), u = 2.0 * SpectralField::unit(3, 1, 1);
  // (1 + 6) + 4 (1 + 2)
  EXPECT_DOUBLE_EQ(h1_norm_squared(v, u), 19.0);
}
