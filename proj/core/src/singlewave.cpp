#include "elastoshock/singlewave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace elastoshock {

namespace {

// 1 + (3/2)(w2 - w1), the cube of the right-family speed.
double speed_cubed(double w1, double w2) { return 1.0 + 1.5 * (w2 - w1); }

double speed_from(double w1, double w2) {
  const double p = speed_cubed(w1, w2);
  if (p <= 0.0)
    throw std::invalid_argument(
        "single-wave state leaves the hyperbolic regime: 1 + (3/2)(w2 - w1) = " +
        std::to_string(p));
  return std::cbrt(p);
}

// Cubic Hermite value and u-derivative on [u0, u0 + h] with endpoint values
// f0, f1 and endpoint u-derivatives d0, d1, evaluated at parameter s in [0, 1].
double hermite(double s, double h, double f0, double d0, double f1, double d1) {
  const double s2 = s * s, s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * f0 + (s3 - 2.0 * s2 + s) * h * d0 +
         (-2.0 * s3 + 3.0 * s2) * f1 + (s3 - s2) * h * d1;
}

double hermite_deriv(double s, double h, double f0, double d0, double f1, double d1) {
  const double s2 = s * s;
  return ((6.0 * s2 - 6.0 * s) * (f0 - f1)) / h + (3.0 * s2 - 4.0 * s + 1.0) * d0 +
         (3.0 * s2 - 2.0 * s) * d1;
}

// Inverts the monotone Hermite time map t(s) for s given tt.
double hermite_invert(double tt, double h, double t0, double d0, double t1, double d1) {
  double s = (tt - t0) / (t1 - t0);
  for (int it = 0; it < 40; ++it) {
    const double f = hermite(s, h, t0, d0, t1, d1) - tt;
    const double fp = h * hermite_deriv(s, h, t0, d0, t1, d1);
    if (fp == 0.0) break;
    const double step = f / fp;
    s -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return s;
}

// 4th-order derivative of samples on a uniform grid of spacing h.
std::vector<double> derivative_4th(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  const double s = 1.0 / (12.0 * h);
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
  for (std::size_t j = 2; j + 2 < n; ++j)
    d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) * s;
  d[n - 2] = -(-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] +
               f[n - 5]) *
             s;
  d[n - 1] = -(-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] -
               3.0 * f[n - 5]) *
             s;
  return d;
}

// Integrand of I in the seed variable: dW2/du / (4 lambda^3).
double i_form(const CharacteristicPath& p, double u) {
  return p.dw20(u) / (4.0 * speed_cubed(p.w1, p.w20(u)));
}

// I on the partial segment [a, u] by Simpson, on top of the accumulated base.
double i_partial(const CharacteristicPath& p, double base, double a, double u) {
  const double d = u - a;
  if (d == 0.0) return base;
  return base + d / 6.0 * (i_form(p, a) + 4.0 * i_form(p, a + 0.5 * d) + i_form(p, u));
}

struct Segment {
  double a = 0.0;   // left seed value y1[j]
  double h = 0.0;   // u-extent of the segment piece integrated
  double t0 = 0.0, t1 = 0.0;
  double d0 = 0.0, d1 = 0.0;  // dt/du at the segment endpoints
  double i0 = 0.0;            // accumulated I at the left endpoint
};

// int e^{-I(u)} (dlambda/dw1)(u) (dt/du)(u) du over [seg.a, seg.a + seg.h]
// by two-point Gauss; the Hermite pair (t0, d0, t1, d1) always describes the
// FULL lattice segment of width hseg so partial pieces stay consistent.
double d_piece(const CharacteristicPath& p, const Segment& seg, double hseg) {
  static const double r = 0.5 / std::sqrt(3.0);
  const double un[2] = {seg.a + seg.h * (0.5 - r), seg.a + seg.h * (0.5 + r)};
  double acc = 0.0;
  for (double u : un) {
    const double lam = speed_from(p.w1, p.w20(u));
    const double i_u = i_partial(p, seg.i0, seg.a, u);
    const double s = (u - seg.a) / hseg;
    const double tp = hermite_deriv(s, hseg, seg.t0, seg.d0, seg.t1, seg.d1);
    acc += std::exp(-i_u) * single_wave_dspeed_dw1(lam) * tp;
  }
  return acc * 0.5 * seg.h;
}

double lagrange4(const double xs[4], const double fs[4], double x) {
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    double w = fs[i];
    for (int j = 0; j < 4; ++j)
      if (j != i) w *= (x - xs[j]) / (xs[i] - xs[j]);
    acc += w;
  }
  return acc;
}

}  // namespace

RiemannPair single_wave_invariants(const SingleWaveState& s) {
  const double p = 1.0 + 2.0 * s.v2;
  if (p <= 0.0)
    throw std::invalid_argument("single-wave state is vacuum-like: 1 + 2 v2 = " +
                                std::to_string(p));
  const double q = p * std::sqrt(p) / 3.0;  // (1 + 2 v2)^{3/2} / 3
  return {s.v1 - q + 1.0 / 3.0, s.v1 + q - 1.0 / 3.0};
}

SingleWaveState single_wave_from_invariants(const RiemannPair& w, double y) {
  const double lam = speed_from(w.w1, w.w2);
  SingleWaveState s;
  s.v1 = 0.5 * (w.w1 + w.w2);
  s.v2 = 0.5 * (lam * lam - 1.0);
  s.y = y;
  return s;
}

double single_wave_speed(const RiemannPair& w) { return speed_from(w.w1, w.w2); }

CharacteristicLattice::CharacteristicLattice(const SingleWaveData& data, double y_min,
                                             double y_max, std::size_t cells)
    : data_(data), n_(cells) {
  if (!data.w1 || !data.dw1 || !data.w2 || !data.dw2)
    throw std::invalid_argument("single-wave data needs all four profile callables");
  if (!(y_max > y_min)) throw std::invalid_argument("lattice needs y_max > y_min");
  if (cells < 8 || cells > 4096)
    throw std::invalid_argument("lattice cell count must be in [8, 4096]");

  h_ = (y_max - y_min) / static_cast<double>(n_);
  y_.resize(n_ + 1);
  w1n_.resize(n_ + 1);
  w2n_.resize(n_ + 1);
  w1h_.resize(n_);
  w2h_.resize(n_);
  for (std::size_t k = 0; k <= n_; ++k) {
    y_[k] = y_min + h_ * static_cast<double>(k);
    w1n_[k] = data_.w1(y_[k]);
    w2n_[k] = data_.w2(y_[k]);
  }
  y_.back() = y_max;
  for (std::size_t k = 0; k < n_; ++k) {
    const double ym = 0.5 * (y_[k] + y_[k + 1]);
    w1h_[k] = data_.w1(ym);
    w2h_[k] = data_.w2(ym);
  }

  const double w1_hi = std::max(*std::max_element(w1n_.begin(), w1n_.end()),
                                *std::max_element(w1h_.begin(), w1h_.end()));
  const double w2_lo = std::min(*std::min_element(w2n_.begin(), w2n_.end()),
                                *std::min_element(w2h_.begin(), w2h_.end()));
  if (speed_cubed(w1_hi, w2_lo) <= 0.0)
    throw std::invalid_argument(
        "initial profiles leave the hyperbolic regime somewhere on the seed range");

  const std::size_t total = (n_ + 1) * (n_ + 2) / 2;
  x_.resize(total);
  t_.resize(total);
  for (std::size_t m = 0; m <= n_; ++m) {
    x_[idx(m, m)] = y_[m];
    t_[idx(m, m)] = 0.0;
  }

  // March row by row. Every speed sample below is an exact closed value, so
  // the per-cell Simpson closure is linear in the unknown crossing (x, t).
  std::vector<double> lam_prev(n_ + 1), lam_cur(n_ + 1);
  lam_prev[0] = std::cbrt(speed_cubed(w1n_[0], w2n_[0]));
  for (std::size_t m = 1; m <= n_; ++m) {
    lam_cur[m] = std::cbrt(speed_cubed(w1n_[m], w2n_[m]));
    for (std::size_t nn = m; nn-- > 0;) {
      const double lam_p = std::cbrt(speed_cubed(w1n_[nn], w2n_[m]));
      const double lam_a = lam_prev[nn];
      const double lam_b = lam_cur[nn + 1];
      const double lam_am = std::cbrt(speed_cubed(w1n_[nn], w2h_[m - 1]));
      const double lam_bm = std::cbrt(speed_cubed(w1h_[nn], w2n_[m]));
      const double ka = (lam_a + 4.0 * lam_am + lam_p) / 6.0;
      const double kb = (lam_b + 4.0 * lam_bm + lam_p) / 6.0;
      const std::size_t ia = idx(m - 1, nn), ib = idx(m, nn + 1), ip = idx(m, nn);
      const double tp =
          (x_[ib] - x_[ia] + ka * t_[ia] + kb * t_[ib]) / (ka + kb);
      x_[ip] = x_[ia] + ka * (tp - t_[ia]);
      t_[ip] = tp;
      lam_cur[nn] = lam_p;
    }
    lam_prev.swap(lam_cur);
  }

  col_mono_.resize(n_ + 1);
  row_mono_.resize(n_ + 1);
  for (std::size_t nn = 0; nn <= n_; ++nn) {
    std::size_t m = nn;
    while (m < n_ && t_[idx(m + 1, nn)] > t_[idx(m, nn)]) ++m;
    col_mono_[nn] = m;
  }
  for (std::size_t m = 0; m <= n_; ++m) {
    std::size_t nn = m;
    while (nn > 0 && t_[idx(m, nn - 1)] > t_[idx(m, nn)]) --nn;
    row_mono_[m] = nn;
  }
}

CharacteristicLattice::NodeXT CharacteristicLattice::node(std::size_t m,
                                                          std::size_t n) const {
  if (m > n_ || n > m) throw std::invalid_argument("lattice node index out of range");
  return {x_[idx(m, n)], t_[idx(m, n)]};
}

double CharacteristicLattice::lambda_at(std::size_t m, std::size_t n) const {
  if (m > n_ || n > m) throw std::invalid_argument("lattice node index out of range");
  return std::cbrt(speed_cubed(w1n_[n], w2n_[m]));
}

double CharacteristicLattice::right_cover(std::size_t n) const {
  return t_[idx(col_mono_[n], n)];
}

double CharacteristicLattice::left_cover(std::size_t m) const {
  return t_[idx(m, row_mono_[m])];
}

std::size_t CharacteristicLattice::locate_right(std::size_t n, double tt) const {
  // Largest m in [n, col_mono_[n]) with t(m, n) <= tt.
  std::size_t lo = n, hi = col_mono_[n];
  if (tt < 0.0 || tt > t_[idx(hi, n)])
    throw std::invalid_argument("time outside the computed range of this right curve");
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (t_[idx(mid, n)] <= tt ? lo : hi) = mid;
  }
  return lo;
}

std::size_t CharacteristicLattice::locate_left(std::size_t m, double tt) const {
  // Smallest n in (row_mono_[m], m] with t(m, n) <= tt; times grow as n drops.
  std::size_t lo = row_mono_[m], hi = m;
  if (tt < 0.0 || tt > t_[idx(m, lo)])
    throw std::invalid_argument("time outside the computed range of this left curve");
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (t_[idx(m, mid)] <= tt ? hi : lo) = mid;
  }
  return hi;
}

double CharacteristicLattice::right_position(std::size_t n, double tt) const {
  if (n > n_) throw std::invalid_argument("lattice column index out of range");
  if (col_mono_[n] == n) {
    if (tt == 0.0) return y_[n];
    throw std::invalid_argument("right curve has no computed extent");
  }
  const std::size_t m = locate_right(n, tt);
  if (m == col_mono_[n]) return x_[idx(m, n)];
  const std::size_t i0 = idx(m, n), i1 = idx(m + 1, n);
  const double dt = t_[i1] - t_[i0];
  const double s = (tt - t_[i0]) / dt;
  const double v0 = std::cbrt(speed_cubed(w1n_[n], w2n_[m]));
  const double v1 = std::cbrt(speed_cubed(w1n_[n], w2n_[m + 1]));
  return hermite(s, dt, x_[i0], v0, x_[i1], v1);
}

double CharacteristicLattice::left_position(std::size_t m, double tt) const {
  if (m > n_) throw std::invalid_argument("lattice row index out of range");
  if (row_mono_[m] == m) {
    if (tt == 0.0) return y_[m];
    throw std::invalid_argument("left curve has no computed extent");
  }
  const std::size_t n = locate_left(m, tt);
  const std::size_t i0 = idx(m, n), i1 = idx(m, n - 1);
  const double dt = t_[i1] - t_[i0];
  const double s = (tt - t_[i0]) / dt;
  const double v0 = -std::cbrt(speed_cubed(w1n_[n], w2n_[m]));
  const double v1 = -std::cbrt(speed_cubed(w1n_[n - 1], w2n_[m]));
  return hermite(s, dt, x_[i0], v0, x_[i1], v1);
}

RiemannPair CharacteristicLattice::invariants_at(double x, double tt) const {
  if (tt < 0.0) throw std::invalid_argument("lattice covers t >= 0 only");
  if (right_cover(0) < tt)
    throw std::invalid_argument("time beyond the covered wedge of the lattice");

  // Columns covering tt form a prefix 0..n_hi, rows a suffix m_lo..n_.
  std::size_t lo = 0, hi = n_;
  while (hi - lo > 0) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (right_cover(mid) >= tt)
      lo = mid;
    else
      hi = mid - 1;
  }
  const std::size_t n_hi = lo;
  if (left_cover(n_) < tt)
    throw std::invalid_argument("time beyond the covered wedge of the lattice");
  lo = 0;
  hi = n_;
  while (hi - lo > 0) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (left_cover(mid) >= tt)
      hi = mid;
    else
      lo = mid + 1;
  }
  const std::size_t m_lo = lo;
  if (n_hi < 3 || n_ - m_lo < 3)
    throw std::invalid_argument("too few curves cover the requested time");

  if (x < right_position(0, tt) || x > right_position(n_hi, tt))
    throw std::invalid_argument("point is outside the right-curve span at this time");
  lo = 0;
  hi = n_hi;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (right_position(mid, tt) <= x ? lo : hi) = mid;
  }
  std::size_t j0 = (lo == 0) ? 0 : lo - 1;
  j0 = std::min(j0, n_hi - 3);
  double xs[4], fs[4];
  for (int k = 0; k < 4; ++k) {
    xs[k] = right_position(j0 + k, tt);
    fs[k] = w1n_[j0 + k];
  }
  const double w1 = lagrange4(xs, fs, x);

  if (x < left_position(m_lo, tt) || x > left_position(n_, tt))
    throw std::invalid_argument("point is outside the left-curve span at this time");
  lo = m_lo;
  hi = n_;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (left_position(mid, tt) <= x ? lo : hi) = mid;
  }
  j0 = (lo == m_lo) ? m_lo : lo - 1;
  j0 = std::min(j0, n_ - 3);
  for (int k = 0; k < 4; ++k) {
    xs[k] = left_position(j0 + k, tt);
    fs[k] = w2n_[j0 + k];
  }
  return {w1, lagrange4(xs, fs, x)};
}

CharacteristicPath extract_path(const CharacteristicLattice& lattice,
                                std::size_t column) {
  const std::size_t nc = lattice.cells();
  if (column + 4 > nc)
    throw std::invalid_argument("path column needs at least four crossings");

  CharacteristicPath p;
  p.y2 = lattice.seed(column);
  p.w1 = lattice.w1_of_column(column);
  p.q0 = lattice.data().dw1(p.y2);
  p.w20 = lattice.data().w2;
  p.dw20 = lattice.data().dw2;

  const std::size_t len = nc - column;
  p.y1.resize(len + 1);
  p.t.resize(len + 1);
  p.x.resize(len + 1);
  p.lam.resize(len + 1);
  for (std::size_t j = 0; j <= len; ++j) {
    p.y1[j] = lattice.seed(column + j);
    const auto nd = lattice.node(column + j, column);
    p.t[j] = nd.t;
    p.x[j] = nd.x;
    p.lam[j] = lattice.lambda_at(column + j, column);
  }
  p.valid = 0;
  while (p.valid < len && p.t[p.valid + 1] > p.t[p.valid]) ++p.valid;

  const double h = p.y1[1] - p.y1[0];
  p.dtdy = derivative_4th(p.t, h);

  p.i_acc.resize(len + 1);
  p.d_acc.resize(len + 1);
  p.i_acc[0] = 0.0;
  p.d_acc[0] = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    p.i_acc[j + 1] = i_partial(p, p.i_acc[j], p.y1[j], p.y1[j + 1]);
    Segment seg;
    seg.a = p.y1[j];
    seg.h = h;
    seg.t0 = p.t[j];
    seg.t1 = p.t[j + 1];
    seg.d0 = p.dtdy[j];
    seg.d1 = p.dtdy[j + 1];
    seg.i0 = p.i_acc[j];
    p.d_acc[j + 1] = p.d_acc[j] + d_piece(p, seg, h);
  }
  return p;
}

namespace {

// Locates the segment holding tt and inverts the time map; fills a Segment
// limited to [y1[j], u] plus the parameters at u.
struct Located {
  std::size_t j = 0;
  double u = 0.0;
  double s = 0.0;
};

Located locate_on_path(const CharacteristicPath& p, double tt) {
  if (tt < 0.0 || tt > p.t_max())
    throw std::invalid_argument("time beyond the traced extent of the characteristic");
  std::size_t lo = 0, hi = p.valid;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (p.t[mid] <= tt ? lo : hi) = mid;
  }
  Located L;
  L.j = lo;
  const double h = p.y1[lo + 1] - p.y1[lo];
  L.s = hermite_invert(tt, h, p.t[lo], p.dtdy[lo], p.t[lo + 1], p.dtdy[lo + 1]);
  L.u = p.y1[lo] + L.s * h;
  return L;
}

}  // namespace

PathPoint path_point(const CharacteristicPath& p, double tt) {
  const Located L = locate_on_path(p, tt);
  const std::size_t j = L.j;
  const double h = p.y1[j + 1] - p.y1[j];
  PathPoint pt;
  pt.u = L.u;
  pt.w2 = p.w20(L.u);
  pt.lambda = speed_from(p.w1, pt.w2);
  pt.i_t = i_partial(p, p.i_acc[j], p.y1[j], L.u);
  pt.dt_du = hermite_deriv(L.s, h, p.t[j], p.dtdy[j], p.t[j + 1], p.dtdy[j + 1]);
  const double dx0 = p.lam[j] * p.dtdy[j];
  const double dx1 = p.lam[j + 1] * p.dtdy[j + 1];
  pt.x = hermite(L.s, h, p.x[j], dx0, p.x[j + 1], dx1);
  return pt;
}

RiccatiSlope riccati_slope(const CharacteristicPath& p, double tt) {
  const Located L = locate_on_path(p, tt);
  const std::size_t j = L.j;
  const double h = p.y1[j + 1] - p.y1[j];

  Segment seg;
  seg.a = p.y1[j];
  seg.h = L.u - p.y1[j];
  seg.t0 = p.t[j];
  seg.t1 = p.t[j + 1];
  seg.d0 = p.dtdy[j];
  seg.d1 = p.dtdy[j + 1];
  seg.i0 = p.i_acc[j];
  const double d_int = p.d_acc[j] + d_piece(p, seg, h);
  const double i_t = i_partial(p, p.i_acc[j], p.y1[j], L.u);

  RiccatiSlope out;
  out.denominator = 1.0 + p.q0 * d_int;
  out.i_t = i_t;
  const double dx0 = p.lam[j] * p.dtdy[j];
  const double dx1 = p.lam[j + 1] * p.dtdy[j + 1];
  out.x = hermite(L.s, h, p.x[j], dx0, p.x[j + 1], dx1);
  if (out.denominator <= 0.0)
    throw std::invalid_argument(
        "slope denominator is not positive: the wave has already broken by t = " +
        std::to_string(tt));
  out.slope = p.q0 * std::exp(-i_t) / out.denominator;
  return out;
}

RiccatiSlope riccati_slope(const SingleWaveData& data, double y2, double tt,
                           double y_span, std::size_t cells) {
  const CharacteristicLattice lattice(data, y2, y2 + y_span, cells);
  return riccati_slope(extract_path(lattice, 0), tt);
}

double denominator_root(const CharacteristicPath& p) {
  const double inf = std::numeric_limits<double>::infinity();
  if (p.q0 == 0.0) return inf;
  std::size_t j = 0;
  while (j < p.valid && 1.0 + p.q0 * p.d_acc[j + 1] > 0.0) ++j;
  if (j == p.valid) return inf;

  // Bisect in the seed variable on [y1[j], y1[j+1]].
  const double h = p.y1[j + 1] - p.y1[j];
  Segment seg;
  seg.a = p.y1[j];
  seg.t0 = p.t[j];
  seg.t1 = p.t[j + 1];
  seg.d0 = p.dtdy[j];
  seg.d1 = p.dtdy[j + 1];
  seg.i0 = p.i_acc[j];
  double lo = 0.0, hi = h;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    seg.h = mid;
    const double den = 1.0 + p.q0 * (p.d_acc[j] + d_piece(p, seg, h));
    (den > 0.0 ? lo : hi) = mid;
  }
  const double s = 0.5 * (lo + hi) / h;
  return hermite(s, h, p.t[j], p.dtdy[j], p.t[j + 1], p.dtdy[j + 1]);
}

}  // namespace elastoshock
