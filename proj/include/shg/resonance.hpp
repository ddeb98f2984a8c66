#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shg/errors.hpp"
#include "shg/spectrum.hpp"

namespace shg {

using wide = __int128;

/// sigma = beta / theta, kept exactly as entered.
struct SigmaRational {
  std::int64_t beta = 1;
  std::int64_t theta = 1;

  SigmaRational() = default;
  SigmaRational(std::int64_t b, std::int64_t t) : beta(b), theta(t) {
    detail::require(b > 0 && t > 0, "sigma = beta/theta needs positive integers");
  }

  double value() const { return static_cast<double>(beta) / static_cast<double>(theta); }
  bool is_perfect_square_pair() const;
  std::string str() const { return std::to_string(beta) + "/" + std::to_string(theta); }
};

inline bool is_perfect_square(std::int64_t n) {
  if (n < 0) return false;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

inline bool SigmaRational::is_perfect_square_pair() const { return is_perfect_square(beta) && is_perfect_square(theta); }

namespace detail {

inline wide floor_div(wide a, wide b) {
  wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline wide ceil_div(wide a, wide b) { return -floor_div(-a, b); }

/// mu_k / sigma - mu_l = P / Q with Q = beta * den > 0.
struct Offset {
  wide p;
  wide q;
};

inline Offset offset(const ExactValue& mk, const ExactValue& ml, const SigmaRational& s) {
  // Both eigenvalues of one model share a denominator.
  return {static_cast<wide>(s.theta) * mk.num - static_cast<wide>(s.beta) * ml.num,
          static_cast<wide>(s.beta) * mk.den};
}

/// |m - P/Q| <= 1/2, i.e. |2Qm - 2P| <= Q.
inline bool in_window(std::int64_t m, const Offset& o) {
  const wide d = 2 * o.q * m - 2 * o.p;
  return d <= o.q && -d <= o.q;
}

}  // namespace detail

/// Admissible m-range [-4L^2 - 1, floor(4N^2/sigma) + 1]; Lambda^{NL}(m) is empty outside.
inline std::pair<std::int64_t, std::int64_t> admissible_m_range(std::int64_t n_dyadic, std::int64_t l_dyadic,
                                                                const SigmaRational& s) {
  const std::int64_t lo = -4 * l_dyadic * l_dyadic - 1;
  const auto hi = static_cast<std::int64_t>(
      detail::floor_div(static_cast<wide>(4) * n_dyadic * n_dyadic * s.theta, s.beta) + 1);
  return {lo, hi};
}

namespace detail {

/// All degrees of block N, without an upper cap on k.
inline DegreeRange block_degrees(const SpectrumModel& model, std::int64_t n_dyadic) {
  require(is_dyadic(n_dyadic), "dyadic frequency must be a power of two >= 1");
  // <mu_k>^{1/2} >= sqrt(mu_k) >= k - 1, so block N lies in k <= 2N + 1.
  require(n_dyadic <= (std::int64_t{1} << 24), "dyadic frequency too large for exact counting");
  return dyadic_degrees(model, n_dyadic, static_cast<int>(2 * n_dyadic + 2));
}

}  // namespace detail

/// #{(k, l): |m - (mu_k/sigma - mu_l)| <= 1/2, k in block N, l in block L}.
inline std::int64_t count_lambda(std::int64_t n_dyadic, std::int64_t l_dyadic, const SigmaRational& s,
                                 const SpectrumModel& model, std::int64_t m) {
  const DegreeRange bk = detail::block_degrees(model, n_dyadic);
  const DegreeRange bl = detail::block_degrees(model, l_dyadic);
  if (bk.empty() || bl.empty()) return 0;
  std::int64_t count = 0;
  for (int k = bk.first; k <= bk.last; ++k) {
    const ExactValue mk = model.exact(k);
    // The offset decreases in l; the window is an interval of l.
    auto below_upper = [&](int l) {  // P/Q >= m - 1/2
      const auto o = detail::offset(mk, model.exact(l), s);
      return 2 * o.p >= 2 * o.q * m - o.q;
    };
    auto above_lower = [&](int l) {  // P/Q > m + 1/2
      const auto o = detail::offset(mk, model.exact(l), s);
      return 2 * o.p > 2 * o.q * m + o.q;
    };
    // first l with P/Q <= m + 1/2
    int lo = bl.first, hi = bl.last + 1;
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (above_lower(mid)) lo = mid + 1; else hi = mid;
    }
    const int first = lo;
    // first l with P/Q < m - 1/2
    lo = first;
    hi = bl.last + 1;
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (below_upper(mid)) lo = mid + 1; else hi = mid;
    }
    count += lo - first;
  }
  return count;
}

struct CountingResult {
  std::int64_t n_dyadic = 0;
  std::int64_t l_dyadic = 0;
  SigmaRational sigma;
  std::string model;
  std::int64_t m_lo = 0;
  std::int64_t m_hi = -1;
  std::vector<std::int64_t> counts;  // counts[i] is the cardinality at m = m_lo + i
  std::int64_t sup = 0;
  std::int64_t argmax = 0;  // smallest maximizer
  std::int64_t total = 0;   // sum over m (pairs on a half-integer boundary count twice)

  std::int64_t at(std::int64_t m) const {
    if (m < m_lo || m > m_hi) return 0;
    return counts[static_cast<std::size_t>(m - m_lo)];
  }
};

/// Per-m cardinalities over the admissible range by one pass over the pairs.
inline CountingResult counting_table(std::int64_t n_dyadic, std::int64_t l_dyadic, const SigmaRational& s,
                                     const SpectrumModel& model) {
  CountingResult r;
  r.n_dyadic = n_dyadic;
  r.l_dyadic = l_dyadic;
  r.sigma = s;
  r.model = model.describe();
  std::tie(r.m_lo, r.m_hi) = admissible_m_range(n_dyadic, l_dyadic, s);
  r.counts.assign(static_cast<std::size_t>(r.m_hi - r.m_lo + 1), 0);
  const DegreeRange bk = detail::block_degrees(model, n_dyadic);
  const DegreeRange bl = detail::block_degrees(model, l_dyadic);
  for (int k = bk.first; k <= bk.last; ++k) {
    const ExactValue mk = model.exact(k);
    for (int l = bl.first; l <= bl.last; ++l) {
      const auto o = detail::offset(mk, model.exact(l), s);
      // m in [(2P - Q) / 2Q, (2P + Q) / 2Q]
      const wide lo = detail::ceil_div(2 * o.p - o.q, 2 * o.q);
      const wide hi = detail::floor_div(2 * o.p + o.q, 2 * o.q);
      for (wide m = lo; m <= hi; ++m) {
        if (m < r.m_lo || m > r.m_hi) throw NumericalFailure("resonance: pair outside admissible m-range", 0.0, 0.0);
        ++r.counts[static_cast<std::size_t>(m - r.m_lo)];
      }
    }
  }
  r.argmax = r.m_lo;
  for (std::size_t i = 0; i < r.counts.size(); ++i) {
    r.total += r.counts[i];
    if (r.counts[i] > r.sup) {
      r.sup = r.counts[i];
      r.argmax = r.m_lo + static_cast<std::int64_t>(i);
    }
  }
  return r;
}

inline std::pair<std::int64_t, std::int64_t> sup_count(std::int64_t n_dyadic, std::int64_t l_dyadic,
                                                       const SigmaRational& s, const SpectrumModel& model) {
  const auto r = counting_table(n_dyadic, l_dyadic, s, model);
  return {r.argmax, r.sup};
}

struct ResonanceTriple {
  std::int64_t k = 0;
  std::int64_t l = 0;
  std::int64_t m = 0;
};

/// |theta (2k+d-1)^2 - beta (2l+d-1)^2 - (4 beta m + (theta - beta)(d-1)^2)| <= 2 beta.
inline bool transformed_inequality_holds(const ResonanceTriple& t, const SigmaRational& s, int dim) {
  const wide a = 2 * static_cast<wide>(t.k) + dim - 1;
  const wide b = 2 * static_cast<wide>(t.l) + dim - 1;
  const wide shift = static_cast<wide>(s.theta - s.beta) * (dim - 1) * (dim - 1);
  const wide lhs = s.theta * a * a - s.beta * b * b - (4 * static_cast<wide>(s.beta) * t.m + shift);
  const wide bound = 2 * static_cast<wide>(s.beta);
  return lhs <= bound && -lhs <= bound;
}

struct TransformedCheck {
  bool ok = true;
  std::int64_t checked = 0;
  std::vector<ResonanceTriple> witnesses;  // violations, at most 16 kept
};

inline TransformedCheck verify_members(std::span<const ResonanceTriple> members, const SigmaRational& s, int dim) {
  detail::require(s.is_perfect_square_pair(), "transformed equation needs beta and theta perfect squares");
  TransformedCheck out;
  for (const auto& t : members) {
    ++out.checked;
    if (!transformed_inequality_holds(t, s, dim)) {
      out.ok = false;
      if (out.witnesses.size() < 16) out.witnesses.push_back(t);
    }
  }
  return out;
}

/// Every (k, l, m) with (k, l) in Lambda^{NL}(m) on S^d, over the admissible m-range.
inline std::vector<ResonanceTriple> lambda_members(std::int64_t n_dyadic, std::int64_t l_dyadic,
                                                   const SigmaRational& s, const SpectrumModel& model) {
  std::vector<ResonanceTriple> out;
  const DegreeRange bk = detail::block_degrees(model, n_dyadic);
  const DegreeRange bl = detail::block_degrees(model, l_dyadic);
  for (int k = bk.first; k <= bk.last; ++k)
    for (int l = bl.first; l <= bl.last; ++l) {
      const auto o = detail::offset(model.exact(k), model.exact(l), s);
      const wide lo = detail::ceil_div(2 * o.p - o.q, 2 * o.q);
      const wide hi = detail::floor_div(2 * o.p + o.q, 2 * o.q);
      for (wide m = lo; m <= hi; ++m) out.push_back({k, l, static_cast<std::int64_t>(m)});
    }
  return out;
}

inline TransformedCheck verify_transformed_equation(std::int64_t n_dyadic, std::int64_t l_dyadic, const SigmaRational& s,
                                               int dim = 2) {
  detail::require(s.is_perfect_square_pair(), "transformed equation needs beta and theta perfect squares");
  const auto model = SpectrumModel::sphere(dim);
  const auto members = lambda_members(n_dyadic, l_dyadic, s, model);
  return verify_members(members, s, dim);
}

/// Number of positive divisors, from the prime factorization.
inline std::int64_t divisor_count(std::int64_t n) {
  detail::require(n >= 1, "divisor_count needs n >= 1");
  std::int64_t count = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    count *= e + 1;
  }
  if (n > 1) count *= 2;
  return count;
}

enum class SquareSign { plus, minus };

/// #{(x, y) in N^2 (0 included): K <= x <= 2K, x^2 +- y^2 = m}.
inline std::int64_t ntlemma_count(std::int64_t m, std::int64_t kk, SquareSign sign) {
  detail::require(kk >= 1, "ntlemma_count needs K >= 1");
  detail::require(kk <= (std::int64_t{1} << 30), "ntlemma_count: K too large");
  std::int64_t count = 0;
  for (std::int64_t x = kk; x <= 2 * kk; ++x) {
    const wide y2 = sign == SquareSign::minus ? static_cast<wide>(x) * x - m : static_cast<wide>(m) - static_cast<wide>(x) * x;
    if (y2 < 0 || y2 > static_cast<wide>(INT64_MAX)) continue;
    if (is_perfect_square(static_cast<std::int64_t>(y2))) ++count;
  }
  return count;
}

struct ZollSpectrum {
  std::vector<double> values;                       // (k + Z0/4)^2, k = 1..count
  std::vector<std::pair<double, double>> intervals;  // [value - E, value + E]
  int k0 = 0;                                       // min{k : k > E - Z0/4 - 1/2}

  bool disjoint_from(int k) const {
    for (std::size_t i = static_cast<std::size_t>(std::max(k, 1) - 1); i + 1 < intervals.size(); ++i)
      if (intervals[i].second >= intervals[i + 1].first) return false;
    return true;
  }
};

inline int zoll_k0(int z0, double spread) {
  const double t = spread - z0 / 4.0 - 0.5;
  int k = 0;
  while (!(k > t)) ++k;
  return k;
}

inline ZollSpectrum zoll_spectrum(int z0, double spread, int count) {
  detail::require(count >= 1, "zoll_spectrum needs count >= 1");
  const auto model = SpectrumModel::zoll(z0, spread);
  ZollSpectrum z;
  for (int k = 1; k <= count; ++k) {
    const double mu = model.eigenvalue(k);
    z.values.push_back(mu);
    z.intervals.emplace_back(mu - spread, mu + spread);
  }
  z.k0 = zoll_k0(z0, spread);
  return z;
}

/// Multiplicity of degree k on S^d: C(k+d, d) - C(k+d-2, d).
inline double sphere_multiplicity(int dim, std::int64_t k) {
  auto binom = [](std::int64_t n, int r) {
    if (n < r) return 0.0;
    double b = 1.0;
    for (int i = 1; i <= r; ++i) b = b * static_cast<double>(n - r + i) / i;
    return std::round(b);
  };
  return binom(k + dim, dim) - binom(k + dim - 2, dim);
}

/// #{eigenvalues <= A, with multiplicity} / max(A, 1)^{d/2} on S^d.
inline double weyl_ratio(int dim, double a) {
  detail::require(dim >= 2, "weyl_ratio needs d >= 2");
  detail::require(std::isfinite(a) && a <= 1e12, "weyl_ratio needs finite A <= 1e12");
  const auto model = SpectrumModel::sphere(dim);
  double count = 0.0;
  for (int k = 0; model.eigenvalue(k) <= a; ++k) count += sphere_multiplicity(dim, k);
  return count / std::pow(std::max(a, 1.0), dim / 2.0);
}

}  // namespace shg
