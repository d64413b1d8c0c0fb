#include "elastoshock/euler.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace elastoshock {

namespace {

// Material constants the kernels need, hoisted out of the cell loops.
struct Coef {
  double c1sq, c2sq, s0x2, s1x2;
};

inline Coef coef_of(const MaterialParams& p) {
  return {p.c1 * p.c1, p.c2 * p.c2, 2.0 * p.sigma0, 2.0 * p.sigma1};
}

inline double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return a < b ? a : b;
  if (a < 0.0 && b < 0.0) return a > b ? a : b;
  return 0.0;
}

// out = A(u) v for the leading N components; slots beyond N are zeroed.
template <int N>
inline void apply_A(const Coef& mc, const double* u, const double* v, double* out) {
  const double a = mc.c1sq + mc.s0x2 * u[0];
  const double b = mc.c2sq + mc.s1x2 * u[0];
  const double c = mc.s1x2 * u[1];
  if constexpr (N == 6) {
    const double d = mc.s1x2 * u[2];
    out[0] = -v[3];
    out[1] = -v[4];
    out[2] = -v[5];
    out[3] = -(a * v[0] + c * v[1] + d * v[2]);
    out[4] = -(c * v[0] + b * v[1]);
    out[5] = -(d * v[0] + b * v[2]);
  } else {
    out[0] = -v[2];
    out[1] = -v[3];
    out[2] = -(a * v[0] + c * v[1]);
    out[3] = -(c * v[0] + b * v[1]);
    out[4] = 0.0;
    out[5] = 0.0;
  }
}

template <int N>
inline double lambda_max(const Coef& mc, const double* u) {
  const double a = mc.c1sq + mc.s0x2 * u[0];
  const double b = mc.c2sq + mc.s1x2 * u[0];
  const double c = mc.s1x2 * u[1];
  const double d = (N == 6) ? mc.s1x2 * u[2] : 0.0;
  const double diff = a - b;
  const double Delta = diff * diff + 4.0 * (c * c + d * d);
  const double arg = 0.5 * (a + b) + 0.5 * std::sqrt(Delta);
  return std::sqrt(arg > 0.0 ? arg : 0.0);
}

// Predictor-corrector update with limited slopes and Rusanov interface
// dissipation. gh holds m + 4 entries (two copy ghosts per side); sl and hf
// are scratch of size m + 2 (cells -1..m); out receives the m new cells.
template <int N>
void muscl_kernel(const Coef& mc, const Vec6* gh, long long m, double dtdx,
                  Vec6* sl, Vec6* hf, Vec6* out) {
  const double half_dtdx = 0.5 * dtdx;
  for (long long k = 0; k <= m + 1; ++k) {
    double s[N];
    for (int q = 0; q < N; ++q)
      s[q] = minmod(gh[k + 1][q] - gh[k][q], gh[k + 2][q] - gh[k + 1][q]);
    double av[6];
    apply_A<N>(mc, gh[k + 1].data(), s, av);
    for (int q = 0; q < N; ++q) {
      sl[k][q] = s[q];
      hf[k][q] = gh[k + 1][q] - half_dtdx * av[q];
    }
  }
  Vec6 prev_dp{};
  for (long long f = 0; f <= m; ++f) {
    double L[N], R[N], mid[N], dU[N];
    for (int q = 0; q < N; ++q) {
      L[q] = hf[f][q] + 0.5 * sl[f][q];
      R[q] = hf[f + 1][q] - 0.5 * sl[f + 1][q];
      mid[q] = 0.5 * (L[q] + R[q]);
      dU[q] = R[q] - L[q];
    }
    double af[6];
    apply_A<N>(mc, mid, dU, af);
    const double alpha = lambda_max<N>(mc, mid);
    Vec6 dm{}, dp{};
    for (int q = 0; q < N; ++q) {
      dm[q] = 0.5 * (af[q] - alpha * dU[q]);
      dp[q] = 0.5 * (af[q] + alpha * dU[q]);
    }
    if (f >= 1) {
      const long long c = f - 1;  // cell index; its scratch slot is c + 1
      double central[6];
      apply_A<N>(mc, hf[c + 1].data(), sl[c + 1].data(), central);
      for (int q = 0; q < N; ++q)
        out[c][q] = gh[c + 2][q] - dtdx * (prev_dp[q] + dm[q] + central[q]);
      if constexpr (N == 4) out[c][4] = out[c][5] = 0.0;
    }
    prev_dp = dp;
  }
}

// Classical first-order scheme on the quasilinear form.
template <int N>
void lf_kernel(const Coef& mc, const Vec6* gh, long long m, double dtdx, Vec6* out) {
  const double half_dtdx = 0.5 * dtdx;
  for (long long c = 0; c < m; ++c) {
    const Vec6& lft = gh[c + 1];
    const Vec6& ctr = gh[c + 2];
    const Vec6& rgt = gh[c + 3];
    double dU[N];
    for (int q = 0; q < N; ++q) dU[q] = rgt[q] - lft[q];
    double av[6];
    apply_A<N>(mc, ctr.data(), dU, av);
    for (int q = 0; q < N; ++q)
      out[c][q] = 0.5 * (rgt[q] + lft[q]) - half_dtdx * av[q];
    if constexpr (N == 4) out[c][4] = out[c][5] = 0.0;
  }
}

// Cubic Lagrange weights at nodes {-1, 0, 1, 2} for fractional position s.
inline void cubic_weights(double s, double w[4]) {
  w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
  w[1] = (s * s - 1.0) * (s - 2.0) * 0.5;
  w[2] = -s * (s + 1.0) * (s - 2.0) * 0.5;
  w[3] = s * (s * s - 1.0) / 6.0;
}

}  // namespace

EulerianField::EulerianField(const MaterialParams& params, double dx, FvScheme scheme)
    : p_(params), dx_(dx), scheme_(scheme) {
  if (!(dx > 0.0) || !std::isfinite(dx))
    throw std::invalid_argument("EulerianField: dx must be positive, got " +
                                std::to_string(dx));
}

void EulerianField::init_single(double lo, double hi,
                                const std::function<Vec6(double)>& phi0) {
  if (!(lo < hi))
    throw std::invalid_argument("EulerianField: need lo < hi, got [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  FieldWindow w;
  w.origin = static_cast<long long>(std::floor(lo / dx_));
  const long long end = static_cast<long long>(std::ceil(hi / dx_));
  const long long m = std::max<long long>(end - w.origin, 12);
  w.cell.resize(static_cast<std::size_t>(m));
  for (long long j = 0; j < m; ++j)
    w.cell[static_cast<std::size_t>(j)] =
        phi0((static_cast<double>(w.origin + j) + 0.5) * dx_);
  win_.clear();
  win_.push_back(std::move(w));
  t_ = 0.0;
}

void EulerianField::split(const std::vector<std::pair<double, double>>& spans) {
  if (spans.empty())
    throw std::invalid_argument("EulerianField: split needs at least one span");
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (!(spans[i].first < spans[i].second))
      throw std::invalid_argument("EulerianField: span " + std::to_string(i) +
                                  " is empty or reversed");
    if (i > 0 && !(spans[i].first >= spans[i - 1].second))
      throw std::invalid_argument("EulerianField: spans must be disjoint and sorted");
  }
  std::vector<FieldWindow> next;
  next.reserve(spans.size());
  for (const auto& [lo, hi] : spans) {
    FieldWindow w;
    w.origin = static_cast<long long>(std::floor(lo / dx_));
    const long long end = static_cast<long long>(std::ceil(hi / dx_));
    const long long m = std::max<long long>(end - w.origin, 12);
    w.cell.resize(static_cast<std::size_t>(m));
    for (long long j = 0; j < m; ++j) {
      const long long g = w.origin + j;
      // Copy from whichever old window holds global cell g, else clamp to the
      // nearest edge of the old window closest in index distance.
      const FieldWindow* best = nullptr;
      long long best_dist = 0;
      for (const auto& old : win_) {
        const long long om = static_cast<long long>(old.cell.size());
        const long long lo_d = old.origin - g;
        const long long hi_d = g - (old.origin + om - 1);
        const long long dist = std::max<long long>({lo_d, hi_d, 0});
        if (best == nullptr || dist < best_dist) {
          best = &old;
          best_dist = dist;
        }
      }
      const long long om = static_cast<long long>(best->cell.size());
      const long long idx = std::clamp<long long>(g - best->origin, 0, om - 1);
      w.cell[static_cast<std::size_t>(j)] = best->cell[static_cast<std::size_t>(idx)];
    }
    next.push_back(std::move(w));
  }
  win_ = std::move(next);
}

void EulerianField::shift_window(std::size_t w, long long cells) {
  if (w >= win_.size())
    throw std::invalid_argument("EulerianField: no window " + std::to_string(w));
  if (cells == 0) return;
  auto& win = win_[w];
  const long long m = static_cast<long long>(win.cell.size());
  if (cells >= m || cells <= -m) {
    const Vec6 edge = cells > 0 ? win.cell.back() : win.cell.front();
    std::fill(win.cell.begin(), win.cell.end(), edge);
  } else if (cells > 0) {
    const Vec6 edge = win.cell.back();
    for (long long j = 0; j < m - cells; ++j)
      win.cell[static_cast<std::size_t>(j)] = win.cell[static_cast<std::size_t>(j + cells)];
    for (long long j = m - cells; j < m; ++j)
      win.cell[static_cast<std::size_t>(j)] = edge;
  } else {
    const Vec6 edge = win.cell.front();
    for (long long j = m - 1; j >= -cells; --j)
      win.cell[static_cast<std::size_t>(j)] = win.cell[static_cast<std::size_t>(j + cells)];
    for (long long j = 0; j < -cells; ++j)
      win.cell[static_cast<std::size_t>(j)] = edge;
  }
  win.origin += cells;
}

void EulerianField::step(double dt) {
  const Coef mc = coef_of(p_);
  const double dtdx = dt / dx_;
  const bool three_d = p_.dim_mode == DimMode::Planar3D;
  for (auto& win : win_) {
    const long long m = static_cast<long long>(win.cell.size());
    gh_.resize(static_cast<std::size_t>(m + 4));
    gh_[0] = gh_[1] = win.cell.front();
    std::memcpy(gh_.data() + 2, win.cell.data(),
                static_cast<std::size_t>(m) * sizeof(Vec6));
    gh_[static_cast<std::size_t>(m + 2)] = gh_[static_cast<std::size_t>(m + 3)] =
        win.cell.back();
    nw_.resize(static_cast<std::size_t>(m));
    if (scheme_ == FvScheme::MusclHancock) {
      sl_.resize(static_cast<std::size_t>(m + 2));
      hf_.resize(static_cast<std::size_t>(m + 2));
      if (three_d)
        muscl_kernel<6>(mc, gh_.data(), m, dtdx, sl_.data(), hf_.data(), nw_.data());
      else
        muscl_kernel<4>(mc, gh_.data(), m, dtdx, sl_.data(), hf_.data(), nw_.data());
    } else {
      if (three_d)
        lf_kernel<6>(mc, gh_.data(), m, dtdx, nw_.data());
      else
        lf_kernel<4>(mc, gh_.data(), m, dtdx, nw_.data());
    }
    win.cell.swap(nw_);
  }
  t_ += dt;
}

double EulerianField::max_speed() const {
  const Coef mc = coef_of(p_);
  const bool three_d = p_.dim_mode == DimMode::Planar3D;
  const std::size_t n = p_.n();
  double vmax = 0.0;
  for (const auto& win : win_)
    for (const auto& c : win.cell) {
      for (std::size_t q = 0; q < n; ++q)
        if (!std::isfinite(c[q]))
          throw std::runtime_error("EulerianField: field is not finite");
      const double v = three_d ? lambda_max<6>(mc, c.data()) : lambda_max<4>(mc, c.data());
      if (v > vmax) vmax = v;
    }
  return vmax;
}

EulerianField::Located EulerianField::locate(double x, int margin, const char* who) const {
  for (std::size_t w = 0; w < win_.size(); ++w) {
    const auto& win = win_[w];
    const long long m = static_cast<long long>(win.cell.size());
    const double u = x / dx_ - 0.5 - static_cast<double>(win.origin);
    const long long base = static_cast<long long>(std::floor(u));
    if (base >= margin - 1 && base + margin <= m - 1)
      return {w, base, u - static_cast<double>(base)};
  }
  throw std::invalid_argument(std::string(who) + ": x=" + std::to_string(x) +
                              " is not covered by any window");
}

bool EulerianField::covers(double x, int margin) const {
  for (const auto& win : win_) {
    const long long m = static_cast<long long>(win.cell.size());
    const double u = x / dx_ - 0.5 - static_cast<double>(win.origin);
    const long long base = static_cast<long long>(std::floor(u));
    if (base >= margin - 1 && base + margin <= m - 1) return true;
  }
  return false;
}

Vec6 EulerianField::sample_state(double x) const {
  const Located at = locate(x, 2, "EulerianField::sample_state");
  const auto& cell = win_[at.w].cell;
  double wt[4];
  cubic_weights(at.s, wt);
  Vec6 out{};
  for (int k = 0; k < 4; ++k) {
    const auto& c = cell[static_cast<std::size_t>(at.base - 1 + k)];
    for (int q = 0; q < 6; ++q) out[q] += wt[k] * c[q];
  }
  return out;
}

Vec6 EulerianField::sample_gradient(double x) const {
  const Located at = locate(x, 4, "EulerianField::sample_gradient");
  const auto& cell = win_[at.w].cell;
  const double inv12 = 1.0 / (12.0 * dx_);
  double wt[4];
  cubic_weights(at.s, wt);
  Vec6 out{};
  for (int k = 0; k < 4; ++k) {
    const long long j = at.base - 1 + k;
    const auto& m2 = cell[static_cast<std::size_t>(j - 2)];
    const auto& m1 = cell[static_cast<std::size_t>(j - 1)];
    const auto& p1 = cell[static_cast<std::size_t>(j + 1)];
    const auto& p2 = cell[static_cast<std::size_t>(j + 2)];
    for (int q = 0; q < 6; ++q)
      out[q] += wt[k] * (m2[q] - 8.0 * m1[q] + 8.0 * p1[q] - p2[q]) * inv12;
  }
  return out;
}

double EulerianField::gradient_error_indicator(double x) const {
  const Located at = locate(x, 4, "EulerianField::gradient_error_indicator");
  const auto& cell = win_[at.w].cell;
  const double inv12 = 1.0 / (12.0 * dx_);
  const double inv2 = 1.0 / (2.0 * dx_);
  double ind = 0.0;
  for (int k = 0; k < 4; ++k) {
    const long long j = at.base - 1 + k;
    const auto& m2 = cell[static_cast<std::size_t>(j - 2)];
    const auto& m1 = cell[static_cast<std::size_t>(j - 1)];
    const auto& p1 = cell[static_cast<std::size_t>(j + 1)];
    const auto& p2 = cell[static_cast<std::size_t>(j + 2)];
    for (int q = 0; q < 6; ++q) {
      const double g4 = (m2[q] - 8.0 * m1[q] + 8.0 * p1[q] - p2[q]) * inv12;
      const double g2 = (p1[q] - m1[q]) * inv2;
      ind = std::max(ind, std::abs(g4 - g2));
    }
  }
  return ind;
}

Vec6 EulerianField::gradient_at_cell(std::size_t w, std::size_t j) const {
  if (w >= win_.size())
    throw std::invalid_argument("EulerianField: no window " + std::to_string(w));
  const auto& cell = win_[w].cell;
  if (j < 2 || j + 2 >= cell.size())
    throw std::invalid_argument("EulerianField: cell " + std::to_string(j) +
                                " too close to the window edge for a gradient");
  const double inv12 = 1.0 / (12.0 * dx_);
  Vec6 out{};
  for (int q = 0; q < 6; ++q)
    out[q] = (cell[j - 2][q] - 8.0 * cell[j - 1][q] + 8.0 * cell[j + 1][q] -
              cell[j + 2][q]) *
             inv12;
  return out;
}

double EulerianField::sup_phi() const {
  const std::size_t n = p_.n();
  double s = 0.0;
  for (const auto& win : win_)
    for (const auto& c : win.cell) s = std::max(s, norm_inf(c, n));
  return s;
}

}  // namespace elastoshock
