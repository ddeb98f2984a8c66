#include <gtest/gtest.h>

#include <boost/rational.hpp>

#include <cmath>
#include <vector>

#include "shg/resonance.hpp"

using namespace shg;

namespace {

using Q = boost::rational<long long>;

// Degrees of block N on S^2 by direct comparison N^4 <= 1 + mu^2 < 16 N^4.
std::vector<long long> oracle_block(long long n) {
  std::vector<long long> ks;
  for (long long k = 0; k <= 4 * n + 8; ++k) {
    const long long mu = k * (k + 1);
    const long long x = 1 + mu * mu, n4 = n * n * n * n;
    if (n4 <= x && x < 16 * n4) ks.push_back(k);
  }
  return ks;
}

long long oracle_count(long long n, long long l, long long beta, long long theta, long long m) {
  const Q sigma(beta, theta), half(1, 2);
  long long c = 0;
  for (long long k : oracle_block(n))
    for (long long ll : oracle_block(l)) {
      const Q x = Q(k * (k + 1)) / sigma - Q(ll * (ll + 1));
      const Q d = Q(m) - x;
      if (d <= half && -d <= half) ++c;
    }
  return c;
}

long long trial_divisors(long long n) {
  long long c = 0;
  for (long long d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

}  // namespace

TEST(Sigma, Construction) {
  EXPECT_THROW(SigmaRational(0, 1), ConfigError);
  EXPECT_THROW(SigmaRational(1, -4), ConfigError);
  EXPECT_TRUE(SigmaRational(9, 4).is_perfect_square_pair());
  EXPECT_FALSE(SigmaRational(2, 1).is_perfect_square_pair());
  EXPECT_EQ(SigmaRational(1, 4).str(), "1/4");
}

TEST(CountLambda, SmallestBlock) {
  const auto s2 = SpectrumModel::sphere(2);
  EXPECT_EQ(count_lambda(1, 1, SigmaRational(1, 1), s2, 0), 2);
  const auto [lo, hi] = admissible_m_range(1, 1, SigmaRational(1, 1));
  EXPECT_EQ(lo, -5);
  EXPECT_EQ(hi, 5);
  EXPECT_EQ(count_lambda(1, 1, SigmaRational(1, 1), s2, lo - 1), 0);
  EXPECT_EQ(count_lambda(4, 2, SigmaRational(1, 4), s2, -4 * 4 - 2), 0);
}

TEST(CountLambda, MatchesRationalOracle) {
  const auto s2 = SpectrumModel::sphere(2);
  for (auto [b, t] : {std::pair{1LL, 1LL}, {1LL, 4LL}, {9LL, 4LL}, {2LL, 3LL}})
    for (long long n : {1, 2, 4, 8})
      for (long long l : {1, 2, 4, 8}) {
        const SigmaRational s(b, t);
        const auto [lo, hi] = admissible_m_range(n, l, s);
        for (long long m = lo - 2; m <= hi + 2; ++m)
          ASSERT_EQ(count_lambda(n, l, s, s2, m), oracle_count(n, l, b, t, m))
              << "sigma " << b << "/" << t << " N " << n << " L " << l << " m " << m;
      }
}

TEST(CountingTable, ConsistentWithPointCounts) {
  const auto s2 = SpectrumModel::sphere(2);
  const SigmaRational s(1, 4);
  const auto r = counting_table(4, 2, s, s2);
  std::int64_t best = 0, total = 0;
  for (std::int64_t m = r.m_lo; m <= r.m_hi; ++m) {
    EXPECT_EQ(r.at(m), count_lambda(4, 2, s, s2, m));
    best = std::max(best, r.at(m));
    total += r.at(m);
  }
  EXPECT_EQ(r.sup, best);
  EXPECT_EQ(r.total, total);
  EXPECT_EQ(r.at(r.argmax), r.sup);
  for (std::int64_t m = r.m_lo; m < r.argmax; ++m) EXPECT_LT(r.at(m), r.sup);
  // each pair lands in one or two windows
  const auto bk = oracle_block(4), bl = oracle_block(2);
  const auto pairs = static_cast<std::int64_t>(bk.size() * bl.size());
  EXPECT_GE(total, pairs);
  EXPECT_LE(total, 2 * pairs);
}

TEST(SupCount, SmallestBlock) {
  const auto [m, sup] = sup_count(1, 1, SigmaRational(1, 1), SpectrumModel::sphere(2));
  EXPECT_GE(sup, 2);
  EXPECT_EQ(count_lambda(1, 1, SigmaRational(1, 1), SpectrumModel::sphere(2), m), sup);
}

TEST(SupCount, SymmetricUnderSwapWhenSigmaIsOne) {
  // N = L, sigma = 1: (k, l) in window m iff (l, k) in window -m
  const auto s2 = SpectrumModel::sphere(2);
  const SigmaRational s(1, 1);
  for (std::int64_t n : {2, 4, 8}) {
    const auto r = counting_table(n, n, s, s2);
    for (std::int64_t m = 1; m <= r.m_hi; ++m)
      if (-m >= r.m_lo) {
        EXPECT_EQ(r.at(m), r.at(-m));
      }
  }
}

TEST(TransformedEquation, HoldsForSquareSigma) {
  for (std::int64_t n : {2, 4, 8}) {
    const auto c = verify_transformed_equation(n, n, SigmaRational(1, 1));
    EXPECT_TRUE(c.ok);
    EXPECT_GT(c.checked, 0);
  }
  EXPECT_TRUE(verify_transformed_equation(8, 4, SigmaRational(1, 4)).ok);
  EXPECT_TRUE(verify_transformed_equation(8, 8, SigmaRational(9, 4)).ok);
  EXPECT_TRUE(verify_transformed_equation(4, 4, SigmaRational(1, 1), 3).ok);
}

TEST(TransformedEquation, RejectsNonSquareSigma) {
  EXPECT_THROW(verify_transformed_equation(4, 4, SigmaRational(2, 1)), ConfigError);
}

TEST(TransformedEquation, FabricatedViolationHasWitness) {
  const std::vector<ResonanceTriple> members{{3, 2, 6}, {10, 1, 0}};
  const SigmaRational s(1, 1);
  EXPECT_TRUE(transformed_inequality_holds(members[0], s, 2));
  EXPECT_FALSE(transformed_inequality_holds(members[1], s, 2));
  const auto c = verify_members(members, s, 2);
  EXPECT_FALSE(c.ok);
  ASSERT_EQ(c.witnesses.size(), 1u);
  EXPECT_EQ(c.witnesses[0].k, 10);
}

TEST(TransformedEquation, MembersAreExactlyTheWindows) {
  const auto s2 = SpectrumModel::sphere(2);
  const SigmaRational s(9, 4);
  const auto members = lambda_members(4, 4, s, s2);
  const auto r = counting_table(4, 4, s, s2);
  EXPECT_EQ(static_cast<std::int64_t>(members.size()), r.total);
}

TEST(Divisors, Examples) {
  EXPECT_EQ(divisor_count(1), 1);
  EXPECT_EQ(divisor_count(12), 6);
  EXPECT_EQ(divisor_count(36), 9);
  EXPECT_EQ(divisor_count(97), 2);
  EXPECT_THROW(divisor_count(0), ConfigError);
}

TEST(Divisors, MatchTrialDivision) {
  for (long long n = 1; n <= 3000; ++n) ASSERT_EQ(divisor_count(n), trial_divisors(n)) << n;
  EXPECT_EQ(divisor_count(999983LL * 2), 4);
}

TEST(DivisorCount, Examples) {
  EXPECT_EQ(ntlemma_count(0, 4, SquareSign::minus), 5);
  EXPECT_EQ(ntlemma_count(1, 1, SquareSign::plus), 1);
  EXPECT_EQ(ntlemma_count(-3, 5, SquareSign::plus), 0);
  EXPECT_THROW(ntlemma_count(1, 0, SquareSign::plus), ConfigError);
}

TEST(DivisorCount, MatchesDoubleLoop) {
  for (long long kk : {3, 8, 13})
    for (long long m = -200; m <= 700; ++m)
      for (auto sign : {SquareSign::plus, SquareSign::minus}) {
        long long c = 0;
        for (long long x = kk; x <= 2 * kk; ++x)
          for (long long y = 0; y <= 4 * kk + 30; ++y) c += (sign == SquareSign::plus ? x * x + y * y : x * x - y * y) == m;
        ASSERT_EQ(ntlemma_count(m, kk, sign), c) << m << " " << kk;
      }
}

TEST(DivisorCount, DifferenceOfSquaresBoundedByDivisors) {
  for (long long kk : {8, 32})
    for (long long m = 1; m <= 2000; ++m)
      EXPECT_LE(ntlemma_count(m, kk, SquareSign::minus), 2 * divisor_count(m)) << m;
}

TEST(Zoll, SpectrumValues) {
  const auto z = zoll_spectrum(2, 0.1, 5);
  EXPECT_DOUBLE_EQ(z.values[0], 2.25);
  EXPECT_DOUBLE_EQ(zoll_spectrum(0, 0.1, 3).values[2], 9.0);
  EXPECT_EQ(z.intervals.size(), 5u);
  EXPECT_DOUBLE_EQ(z.intervals[0].first, 2.15);
}

TEST(Zoll, DisjointBeyondK0) {
  for (double e : {0.3, 2.0, 7.5}) {
    const auto z = zoll_spectrum(1, e, 60);
    // K0 = min{k : k > E - Z0/4 - 1/2}
    int k0 = 0;
    while (!(k0 > e - 0.25 - 0.5)) ++k0;
    EXPECT_EQ(z.k0, k0);
    for (std::size_t i = std::max(k0, 1) - 1; i + 1 < z.intervals.size(); ++i)
      EXPECT_LT(z.intervals[i].second, z.intervals[i + 1].first) << e << " " << i;
    EXPECT_TRUE(z.disjoint_from(z.k0));
  }
  // large E: the first clusters overlap
  EXPECT_FALSE(zoll_spectrum(0, 7.5, 20).disjoint_from(1));
}

TEST(Weyl, Ratios) {
  EXPECT_DOUBLE_EQ(weyl_ratio(2, 12.0), 16.0 / 12.0);
  EXPECT_DOUBLE_EQ(weyl_ratio(2, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(weyl_ratio(2, 1e4), 1.0);
  EXPECT_DOUBLE_EQ(sphere_multiplicity(3, 4), 25.0);
  EXPECT_DOUBLE_EQ(sphere_multiplicity(2, 7), 15.0);
}
