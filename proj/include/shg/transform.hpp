#pragma once

#include <algorithm>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "shg/errors.hpp"
#include "shg/fields.hpp"
#include "shg/sphere_grid.hpp"

namespace shg {

namespace detail {

/// a_i += sum_r c[4r + i] p_r, four table rows at a time.
inline void accumulate_rows4(double* __restrict a0, double* __restrict a1, double* __restrict a2,
                             double* __restrict a3, const double* __restrict p0, const double* __restrict p1,
                             const double* __restrict p2, const double* __restrict p3, const double* cf, int h) {
  double c[16];
  std::copy_n(cf, 16, c);
  for (int j = 0; j < h; ++j) {
    const double x0 = p0[j], x1 = p1[j], x2 = p2[j], x3 = p3[j];
    a0[j] += c[0] * x0 + c[4] * x1 + c[8] * x2 + c[12] * x3;
    a1[j] += c[1] * x0 + c[5] * x1 + c[9] * x2 + c[13] * x3;
    a2[j] += c[2] * x0 + c[6] * x1 + c[10] * x2 + c[14] * x3;
    a3[j] += c[3] * x0 + c[7] * x1 + c[11] * x2 + c[15] * x3;
  }
}

/// Legendre stage of synthesis for degrees [k_lo, k_hi] of a packed
/// coefficient vector, for `planes` phase vectors at once: plane b gets
/// degree k multiplied by phases[b * stride + k] (no phases: all ones, one
/// plane). Writes the order-m Fourier coefficients of every row into rows[b]
/// (n_theta x n_phi, zero-filled by the caller); the longitude FFT is left to
/// the caller.
inline void legendre_synthesis_planes(std::span<const cplx> coeffs, int k_lo, int k_hi, std::span<const cplx> phases,
                                      std::size_t stride, int planes, const SphereGrid& g, cplx* const* rows) {
  const int h = g.half_rows();
  const int n = g.n_theta();
  const int n_phi = g.n_phi();
  const bool phased = !phases.empty();
  if (!phased) planes = 1;
  // per plane: [parity][+m re, +m im, -m re, -m im][row]
  const std::size_t block = 8 * static_cast<std::size_t>(h);
  std::vector<double> acc(block * planes);
  std::vector<double> cf;
  std::vector<const double*> rows_used;
  std::vector<int> degrees;
  // order-m coefficients per column: m >= 0 at m, m < 0 at k_hi - m
  const std::size_t col_stride = static_cast<std::size_t>(2 * k_hi + 1) * n;
  std::vector<cplx> cols(col_stride * planes);
  for (int m = 0; m <= k_hi; ++m) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const auto table = g.legendre(m);
    const int k0 = std::max(m, k_lo);
    bool any = false;
    for (int par = 0; par < 2; ++par) {
      rows_used.clear();
      degrees.clear();
      for (int k = k0 + (((k0 + m) & 1) != par ? 1 : 0); k <= k_hi; k += 2) {
        if (coeffs[SpectralField::index(k, m)] == cplx{} && coeffs[SpectralField::index(k, -m)] == cplx{}) continue;
        degrees.push_back(k);
        rows_used.push_back(table.data() + static_cast<std::size_t>(k - m) * h);
      }
      if (rows_used.empty()) continue;
      any = true;
      const std::size_t cnt = rows_used.size();
      // coefficients padded to a multiple of four rows; padding rows repeat the last row with zero weight
      const std::size_t padded = (cnt + 3) / 4 * 4;
      while (rows_used.size() < padded) rows_used.push_back(rows_used.back());
      cf.assign(4 * padded * planes, 0.0);
      for (int b = 0; b < planes; ++b) {
        double* c = cf.data() + 4 * padded * b;
        for (std::size_t r = 0; r < cnt; ++r) {
          const int k = degrees[r];
          cplx cp = coeffs[SpectralField::index(k, m)];
          cplx cn = coeffs[SpectralField::index(k, -m)];
          if (phased) {
            cp *= phases[b * stride + k];
            cn *= phases[b * stride + k];
          }
          c[4 * r] = cp.real();
          c[4 * r + 1] = cp.imag();
          c[4 * r + 2] = cn.real();
          c[4 * r + 3] = cn.imag();
        }
      }
      for (std::size_t r = 0; r < padded; r += 4) {
        for (int b = 0; b < planes; ++b) {
          double* a0 = acc.data() + b * block + static_cast<std::size_t>(par) * 4 * h;
          accumulate_rows4(a0, a0 + h, a0 + 2 * h, a0 + 3 * h, rows_used[r], rows_used[r + 1], rows_used[r + 2],
                           rows_used[r + 3], cf.data() + 4 * padded * b + 4 * r, h);
        }
      }
    }
    if (!any) continue;
    for (int b = 0; b < planes; ++b) {
      const double* ev = acc.data() + b * block;
      const double* od = ev + 4 * static_cast<std::size_t>(h);
      cplx* cp = cols.data() + col_stride * b + static_cast<std::size_t>(m) * n;
      cplx* cn = cols.data() + col_stride * b + static_cast<std::size_t>(k_hi + m) * n;
      for (int j = 0; j < h; ++j) {
        cp[j] = cplx(ev[j] + od[j], ev[h + j] + od[h + j]);
        cp[n - 1 - j] = cplx(ev[j] - od[j], ev[h + j] - od[h + j]);
        if (m > 0) {
          cn[j] = cplx(ev[2 * h + j] + od[2 * h + j], ev[3 * h + j] + od[3 * h + j]);
          cn[n - 1 - j] = cplx(ev[2 * h + j] - od[2 * h + j], ev[3 * h + j] - od[3 * h + j]);
        }
      }
    }
  }
  // column-major -> row-major in row tiles; strided column writes thrash the cache
  constexpr int tile = 16;
  for (int b = 0; b < planes; ++b) {
    const cplx* src = cols.data() + col_stride * b;
    cplx* dst = rows[b];
    for (int j0 = 0; j0 < n; j0 += tile) {
      const int j1 = std::min(n, j0 + tile);
      for (int m = 0; m <= k_hi; ++m) {
        const cplx* cp = src + static_cast<std::size_t>(m) * n;
        for (int j = j0; j < j1; ++j) dst[static_cast<std::size_t>(j) * n_phi + m] += cp[j];
        if (m == 0) continue;
        const cplx* cn = src + static_cast<std::size_t>(k_hi + m) * n;
        const int col_n = n_phi - m;
        for (int j = j0; j < j1; ++j) dst[static_cast<std::size_t>(j) * n_phi + col_n] += cn[j];
      }
    }
  }
}

/// Single-plane form of legendre_synthesis_planes with phase[k] (or none).
inline void legendre_synthesis(std::span<const cplx> coeffs, int k_lo, int k_hi, std::span<const cplx> phase,
                               const SphereGrid& g, cplx* rows) {
  cplx* out[1] = {rows};
  legendre_synthesis_planes(coeffs, k_lo, k_hi, phase, 0, 1, g, out);
}

}  // namespace detail

/// Pointwise values of sum c_{k,m} Y_{k,m} on the grid nodes.
inline GridField synthesize(const SpectralField& f, const SphereGrid& g) {
  detail::require(f.band_limit() <= g.band_limit(), "synthesize: field band limit exceeds grid band limit");
  GridField out(g.n_theta(), g.n_phi());
  detail::legendre_synthesis(f.coefficients(), 0, f.band_limit(), {}, g, out.data());
  g.fft_rows_backward(out.data());
  return out;
}

/// Quadrature projection onto Y_{k,m}, k <= band_limit (defaults to the grid's).
inline SpectralField analyze(const GridField& v, const SphereGrid& g, int band_limit = -1) {
  detail::require(v.n_theta() == g.n_theta() && v.n_phi() == g.n_phi(), "analyze: grid dimension mismatch");
  const int kk = band_limit < 0 ? g.band_limit() : band_limit;
  detail::require(kk <= g.band_limit(), "analyze: requested band limit exceeds grid band limit");
  const int h = g.half_rows();
  const int n = g.n_theta();
  const int n_phi = g.n_phi();
  std::vector<cplx> buf(v.values().begin(), v.values().end());
  g.fft_rows_forward(buf.data());
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  const auto w = g.weights();

  SpectralField out(kk);
  std::vector<cplx> sum_p(h), dif_p(h), sum_n(h), dif_n(h);
  for (int m = 0; m <= kk; ++m) {
    const int col_p = m;
    const int col_n = (n_phi - m) % n_phi;
    for (int j = 0; j < h; ++j) {
      const cplx* north = buf.data() + static_cast<std::size_t>(j) * n_phi;
      const cplx* south = buf.data() + static_cast<std::size_t>(n - 1 - j) * n_phi;
      const double s = w[j] * dphi;
      sum_p[j] = s * (north[col_p] + south[col_p]);
      dif_p[j] = s * (north[col_p] - south[col_p]);
      sum_n[j] = s * (north[col_n] + south[col_n]);
      dif_n[j] = s * (north[col_n] - south[col_n]);
    }
    const auto table = g.legendre(m);
    for (int k = m; k <= kk; ++k) {
      const double* p = table.data() + static_cast<std::size_t>(k - m) * h;
      const bool odd = ((k + m) & 1) != 0;
      const cplx* sp = odd ? dif_p.data() : sum_p.data();
      const cplx* sn = odd ? dif_n.data() : sum_n.data();
      cplx acc_p{}, acc_n{};
      for (int j = 0; j < h; ++j) {
        acc_p += p[j] * sp[j];
        acc_n += p[j] * sn[j];
      }
      out(k, m) = acc_p;
      if (m > 0) out(k, -m) = acc_n;
    }
  }
  return out;
}

/// Quadrature of a grid field over the sphere.
inline cplx grid_integral(const GridField& v, const SphereGrid& g) {
  detail::require(v.n_theta() == g.n_theta() && v.n_phi() == g.n_phi(), "grid_integral: dimension mismatch");
  cplx total{};
  for (int j = 0; j < g.n_theta(); ++j) {
    cplx row{};
    for (int p = 0; p < g.n_phi(); ++p) row += v(j, p);
    total += g.area_weight(j) * row;
  }
  return total;
}

/// Quadrature of conj(f) g over the sphere.
inline cplx grid_inner(const GridField& f, const GridField& h, const SphereGrid& g) {
  detail::require(f.same_shape(h), "grid_inner: dimension mismatch");
  cplx total{};
  for (int j = 0; j < g.n_theta(); ++j) {
    cplx row{};
    for (int p = 0; p < g.n_phi(); ++p) row += std::conj(f(j, p)) * h(j, p);
    total += g.area_weight(j) * row;
  }
  return total;
}

}  // namespace shg
