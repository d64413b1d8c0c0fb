#include "elastoshock/charsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "elastoshock/coupling.hpp"
#include "elastoshock/csv.hpp"
#include "elastoshock/rng.hpp"
#include "elastoshock/spectrum.hpp"
#include "elastoshock/vecmath.hpp"

namespace elastoshock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Whole cells kept beyond each sentinel inside a window, and the extra
// allowance for the sentinel span widening over the rest of the run.
constexpr long long kPadCells = 24;
constexpr long long kGrowCells = 96;
constexpr long long kShiftQuantum = 4;
// Cells a sampled point must clear beyond a strip edge before it counts as
// off-strip: the gradient stencil spans four cells each side, so anything
// closer measures smear of the strip's own content.
constexpr double kStencilClear = 5.0;
constexpr std::size_t kMaxSubsteps = 128;
constexpr int kHistoryStride = 4;

std::vector<std::vector<std::size_t>> family_groups(DimMode mode) {
  if (mode == DimMode::Planar3D) return {{0}, {1, 2}, {3, 4}, {5}};
  return {{0}, {1}, {2}, {3}};
}

double lag4_eval(const double* xs, const double* ys, double x) {
  double s = 0.0;
  for (int k = 0; k < 4; ++k) {
    double num = 1.0, den = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m == k) continue;
      num *= x - xs[m];
      den *= xs[k] - xs[m];
    }
    s += ys[k] * num / den;
  }
  return s;
}

double lag4_deriv(const double* xs, const double* ys, double x) {
  double s = 0.0;
  for (int k = 0; k < 4; ++k) {
    double den = 1.0;
    for (int m = 0; m < 4; ++m)
      if (m != k) den *= xs[k] - xs[m];
    double dnum = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (j == k) continue;
      double p = 1.0;
      for (int m = 0; m < 4; ++m)
        if (m != k && m != j) p *= x - xs[m];
      dnum += p;
    }
    s += ys[k] * dnum / den;
  }
  return s;
}

std::size_t lag4_base(const std::vector<double>& xs, double x, const char* who) {
  if (xs.size() < 4)
    throw std::invalid_argument(std::string(who) + ": needs at least four stored points");
  const double slack = 1e-9 * (std::abs(xs.front()) + std::abs(xs.back()) + 1.0);
  if (x < xs.front() - slack || x > xs.back() + slack)
    throw std::invalid_argument(std::string(who) + ": query " + fmt17(x) +
                                " outside the stored range [" + fmt17(xs.front()) + ", " +
                                fmt17(xs.back()) + "]");
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::ptrdiff_t base = (it - xs.begin()) - 2;
  base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(xs.size()) - 4);
  return static_cast<std::size_t>(base);
}

double hist_lookup(const RunHistory& h, const std::array<std::vector<double>, 6>& tab,
                   std::size_t f, double y, double tq, bool time_derivative, const char* who) {
  if (f >= h.n)
    throw std::invalid_argument(std::string(who) + ": family " + std::to_string(f) +
                                " out of range for n = " + std::to_string(h.n));
  const std::vector<double>& zs = h.z[f];
  const std::size_t bt = lag4_base(h.t, tq, who);
  const std::size_t bz = lag4_base(zs, y, who);
  double vt[4];
  for (int r = 0; r < 4; ++r) {
    const double* row = tab[f].data() + (bt + r) * zs.size() + bz;
    vt[r] = lag4_eval(zs.data() + bz, row, y);
  }
  return time_derivative ? lag4_deriv(h.t.data() + bt, vt, tq)
                         : lag4_eval(h.t.data() + bt, vt, tq);
}

// Node-local quantities carried between macro steps: the eigenframe seed for
// the degenerate transverse pair and the mean speed over the last step, used
// to predict where the node will be mid-step.
struct NodeAux {
  std::optional<TransverseDir> dir;
  double lam = 0.0;
};

struct Stage {
  double X = 0.0, rho = 0.0, w = 0.0, v = 0.0;
};

void insert_seed(std::vector<double>& z, double value, double tol) {
  auto it = std::lower_bound(z.begin(), z.end(), value);
  if (it != z.end() && std::abs(*it - value) < tol) return;
  if (it != z.begin() && std::abs(*(it - 1) - value) < tol) return;
  z.insert(it, value);
}

class Engine {
 public:
  Engine(const InitialFamilies& data, const MaterialParams& p, SolverConfig cfg)
      : data_(data), p_(p), cfg_(cfg), mode_(p.dim_mode), n_(p.n()) {}

  RunResult run();

 private:
  void setup();
  void seed_family(CharFamily& f, std::size_t profile_index, std::size_t points);
  void init_aux(const CharFamily& f, std::size_t i, std::vector<NodeAux>& aux);
  bool try_split();
  void macro_step();
  void substeps(std::size_t count, double dt_e);
  void track_windows();
  void update_family(CharFamily& f, std::size_t i, std::vector<NodeAux>& aux, double h);
  Stage rhs(std::size_t i, double X, double rho, double w, double v, const EulerianField& F,
            const FamilyCoupling& cp, NodeAux& a);
  void update_dir(std::optional<TransverseDir>& d, const Vec6& phi) const;
  void refresh_diagnostics();
  void record_history();
  void take_snapshot(const char* label);
  std::pair<double, double> strip_interval(std::size_t g) const;
  std::pair<double, double> outer_span(std::size_t g) const;

  const InitialFamilies& data_;
  MaterialParams p_;
  SolverConfig cfg_;
  DimMode mode_;
  std::size_t n_;

  double dx_ = 0.0, eta_ = 0.0, W0_ = 0.0, z00_ = 0.0, z0_star_ = 0.0;
  double sigma_ = 0.0, t0_ = 0.0, c_self0_ = 0.0, T_nom_ = 0.0, t_max_ = 0.0;
  double split_deadline_ = 0.0;
  double lam_fast0_ = 0.0;
  double vguard_ = 0.0;

  std::vector<std::vector<std::size_t>> groups_;
  std::array<std::size_t, 6> group_of_{};

  std::optional<EulerianField> field_, S0_, S1_;
  CharacteristicField st_;
  std::array<std::vector<NodeAux>, 6> aux_;
  std::vector<NodeAux> aux_sh_;
  std::size_t idx_z0_ = 0, idx_z0_star_ = 0;

  RunningNorms norms_;
  std::vector<SeriesRow> series_;
  std::vector<double> dz_shadow_;
  RunHistory hist_;
  WindowSchedule sched_;
  ShockReport rep_;
  std::vector<std::pair<std::string, CharacteristicField>> snaps_;
  double strip_gap_min_ = kInf;
  double lambda_mid_gap_ = 0.0;

  bool split_done_ = false;
  std::vector<std::size_t> win_of_group_;
  // Per-group sentinel tracks frozen at the start of the macro step, used to
  // retarget windows during the substeps.
  struct SentinelTrack {
    double xl = 0.0, xr = 0.0, vl = 0.0, vr = 0.0, t_ref = 0.0;
  };
  std::vector<SentinelTrack> tracks_;

  double rho1_min_cur_ = 1.0;
  double rho1_rate_ = 0.0;
  std::vector<double> rho_prev0_;
  double rho_prev_t_ = 0.0;
  long long step_count_ = 0;
};

void Engine::update_dir(std::optional<TransverseDir>& d, const Vec6& phi) const {
  if (mode_ != DimMode::Planar3D) return;
  const double r = std::hypot(phi[1], phi[2]);
  if (r > 1e-11) d = TransverseDir{phi[1] / r, phi[2] / r};
}

void Engine::seed_family(CharFamily& f, std::size_t profile_index, std::size_t points) {
  f.z.clear();
  f.z.reserve(points + 6);
  f.z.push_back(0.8 * eta_);
  f.z.push_back(0.9 * eta_);
  for (std::size_t k = 0; k < points; ++k)
    f.z.push_back(eta_ + eta_ * static_cast<double>(k) / static_cast<double>(points - 1));
  f.z.push_back(2.1 * eta_);
  f.z.push_back(2.2 * eta_);
  const double tol = 1e-9 * eta_;
  insert_seed(f.z, z00_, tol);
  insert_seed(f.z, z0_star_, tol);

  const std::size_t m = f.z.size();
  f.X = f.z;
  f.rho.assign(m, 1.0);
  f.w.resize(m);
  f.v.resize(m);
  const ProfileFn& pf = data_.profile[profile_index];
  for (std::size_t k = 0; k < m; ++k) {
    f.w[k] = pf(f.z[k]);
    f.v[k] = f.w[k];
  }
  f.lo = 0;
  while (f.lo < m && f.z[f.lo] < eta_ - tol) ++f.lo;
  f.hi = m;
  while (f.hi > f.lo && f.z[f.hi - 1] > 2.0 * eta_ + tol) --f.hi;
  if (f.hi - f.lo < 9)
    throw std::invalid_argument("simulate: fewer than nine in-support seeds per family");
}

void Engine::init_aux(const CharFamily& f, std::size_t i, std::vector<NodeAux>& aux) {
  aux.assign(f.z.size(), NodeAux{});
  for (std::size_t k = 0; k < f.z.size(); ++k) {
    SystemState s{field_->sample_state(f.X[k]), mode_};
    Spectrum sp = spectrum(s, p_, aux[k].dir);
    update_dir(aux[k].dir, s.phi);
    aux[k].lam = sp.lambda[i];
  }
}

void Engine::setup() {
  cfg_.validate();
  p_.validate();
  if (data_.spec.mode != mode_)
    throw std::invalid_argument("simulate: data and material dimension modes differ");
  if (!(data_.W0 >= 0.0)) throw std::invalid_argument("simulate: data has W0 < 0 or NaN");
  if (data_.W0 == 0.0 && !cfg_.stop_at)
    throw std::invalid_argument("simulate: zero-amplitude data has no shock; set stop_at");

  eta_ = data_.spec.eta;
  W0_ = data_.W0;
  z00_ = data_.z0;
  dx_ = cfg_.dx > 0.0 ? cfg_.dx : eta_ / 400.0;
  cfg_.dx = dx_;
  vguard_ = 0.02 * W0_;

  // Right end of the seed window where the initial amplitude exceeds half its
  // peak: bracket on the sample grid, then bisect the profile itself.
  if (W0_ > 0.0) {
    const std::vector<double>& g = data_.grid;
    const std::vector<double>& s0 = data_.samples[0];
    const double half = 0.5 * W0_;
    std::size_t j = g.size();
    while (j > 0 && s0[j - 1] <= half) --j;
    if (j == 0 || j == g.size())
      throw std::invalid_argument("simulate: no half-peak crossing right of the peak");
    double lo = g[j - 1], hi = g[j];
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (data_.profile[0](mid) > half ? lo : hi) = mid;
    }
    z0_star_ = 0.5 * (lo + hi);
    if (!(z0_star_ > z00_))
      throw std::invalid_argument("simulate: degenerate half-peak window, z0* = " +
                                  fmt17(z0_star_) + " <= z0 = " + fmt17(z00_));
  } else {
    z0_star_ = z00_;
  }

  groups_ = family_groups(mode_);
  for (std::size_t g = 0; g < groups_.size(); ++g)
    for (std::size_t i : groups_[g]) group_of_[i] = g;
  win_of_group_.assign(groups_.size(), 0);
  tracks_.assign(groups_.size(), SentinelTrack{});

  const SystemState origin{{}, mode_};
  const Spectrum sp0 = spectrum(origin, p_);
  lam_fast0_ = sp0.lambda[0];
  c_self0_ = dot(grad_lambda(origin, p_)[0], sp0.right[0], n_);
  sigma_ = separation_speed(p_);
  t0_ = eta_ / sigma_;
  T_nom_ = W0_ > 0.0 ? 1.0 / (std::abs(c_self0_) * W0_) : 0.0;
  t_max_ = cfg_.stop_at ? *cfg_.stop_at : cfg_.t_max_factor * T_nom_;
  if (!(t_max_ > 0.0))
    throw std::invalid_argument("simulate: nonpositive time horizon " + fmt17(t_max_));

  const double e = cfg_.epsilon;
  rep_.bracket_low = W0_ > 0.0 ? T_nom_ / std::pow(1.0 + e, 3) : 0.0;
  rep_.bracket_high = W0_ > 0.0 ? T_nom_ / std::pow(1.0 - e, 4) : 0.0;
  rep_.envelope_margin = kInf;

  // Deadline by which the padded group spans must have separated: the outer
  // sentinel tracks open at least at speed sigma from a 1.4 * eta overlap.
  split_deadline_ = std::max(
      2.75 * t0_,
      1.25 * (1.4 * eta_ + (2.0 * (kPadCells + kGrowCells) + 16.0) * dx_) / sigma_);
  const double horizon = std::min(t_max_, split_deadline_);
  const double reach = 1.02 * lam_fast0_ * horizon + (kPadCells + 4) * dx_;
  const double xlo = 0.8 * eta_ - reach;
  const double xhi = 2.2 * eta_ + reach;
  if ((xhi - xlo) / dx_ > 3e6)
    throw std::invalid_argument(
        "simulate: the unsplit window would need more than 3e6 cells; coarsen dx or shorten "
        "the horizon");
  field_.emplace(p_, dx_, FvScheme::MusclHancock);
  field_->init_single(xlo, xhi, make_initial_state(data_, p_));
  sched_.init_lo = xlo;
  sched_.init_hi = xhi;

  for (std::size_t i = 0; i < n_; ++i) {
    seed_family(st_.fam[i], i, cfg_.nodes_per_family);
    init_aux(st_.fam[i], i, aux_[i]);
  }
  seed_family(st_.shadow, 0, 2 * cfg_.nodes_per_family - 1);
  init_aux(st_.shadow, 0, aux_sh_);
  st_.n = n_;
  st_.t = 0.0;

  const CharFamily& f0 = st_.fam[0];
  const auto nearest = [&f0](double value) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < f0.z.size(); ++k)
      if (std::abs(f0.z[k] - value) < std::abs(f0.z[best] - value)) best = k;
    return best;
  };
  idx_z0_ = nearest(z00_);
  idx_z0_star_ = nearest(z0_star_);

  hist_.eta = eta_;
  hist_.n = n_;
  for (std::size_t i = 0; i < n_; ++i) hist_.z[i] = st_.fam[i].z;

  norms_.Smin = kInf;
  norms_.sentinel_rho_min = kInf;
  rho_prev0_ = f0.rho;
  rho_prev_t_ = 0.0;
  rho1_rate_ = 1.5 * std::abs(c_self0_) * W0_;
}

std::pair<double, double> Engine::strip_interval(std::size_t g) const {
  double lo = kInf, hi = -kInf;
  for (std::size_t i : groups_[g]) {
    const CharFamily& f = st_.fam[i];
    lo = std::min(lo, f.X[f.lo]);
    hi = std::max(hi, f.X[f.hi - 1]);
  }
  return {lo, hi};
}

std::pair<double, double> Engine::outer_span(std::size_t g) const {
  double lo = kInf, hi = -kInf;
  for (std::size_t i : groups_[g]) {
    const CharFamily& f = st_.fam[i];
    lo = std::min(lo, f.X.front());
    hi = std::max(hi, f.X.back());
  }
  return {lo, hi};
}

bool Engine::try_split() {
  if (split_done_ || st_.t < 1.5 * t0_) return false;
  std::vector<std::pair<double, double>> spans(groups_.size());
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    auto [lo, hi] = outer_span(g);
    spans[g] = {lo - (kPadCells + kGrowCells) * dx_, hi + (kPadCells + kGrowCells) * dx_};
  }
  std::vector<std::size_t> order(groups_.size());
  for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return spans[a].first < spans[b].first; });
  std::vector<std::pair<double, double>> sorted(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = spans[order[k]];
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k)
    if (sorted[k].second + 8.0 * dx_ >= sorted[k + 1].first) {
      if (st_.t > split_deadline_)
        throw std::runtime_error(
            "simulate: characteristic groups failed to separate before the window budget ran "
            "out at t = " +
            fmt17(st_.t));
      return false;
    }
  field_->split(sorted);
  sched_.split_time = field_->time();
  sched_.spans = sorted;
  for (std::size_t k = 0; k < order.size(); ++k) win_of_group_[order[k]] = k;
  split_done_ = true;
  return true;
}

void Engine::track_windows() {
  if (!split_done_) return;
  const double tau = field_->time();
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const SentinelTrack& tr = tracks_[g];
    const double dt = tau - tr.t_ref;
    const double xl = tr.xl + tr.vl * dt - kPadCells * dx_;
    const double xr = tr.xr + tr.vr * dt + kPadCells * dx_;
    const std::size_t w = win_of_group_[g];
    const FieldWindow& fw = field_->window(w);
    const long long m = static_cast<long long>(fw.cell.size());
    const long long lo_cell = static_cast<long long>(std::floor(xl / dx_));
    const long long hi_cell = static_cast<long long>(std::floor(xr / dx_));
    const long long need = hi_cell - lo_cell + 1;
    if (need > m)
      throw std::runtime_error("simulate: window " + std::to_string(w) +
                               " outgrew its split-time size at t = " + fmt17(tau));
    long long k = (lo_cell - (m - need) / 2) - fw.origin;
    k = kShiftQuantum * (k / kShiftQuantum);
    if (k != 0) {
      field_->shift_window(w, k);
      sched_.shifts.push_back(WindowShift{tau, w, k});
    }
  }
}

void Engine::substeps(std::size_t count, double dt_e) {
  for (std::size_t s = 0; s < count; ++s) {
    track_windows();
    field_->step(dt_e);
  }
}

Stage Engine::rhs(std::size_t i, double X, double rho, double w, double v,
                  const EulerianField& F, const FamilyCoupling& cp, NodeAux& a) {
  SystemState s{F.sample_state(X), mode_};
  const Vec6 gr = F.sample_gradient(X);
  const Spectrum sp = spectrum(s, p_, a.dir);
  update_dir(a.dir, s.phi);
  double wm[6] = {};
  for (std::size_t m = 0; m < n_; ++m) wm[m] = (m == i) ? w : dot(sp.left[m], gr, n_);
  double sum_c = 0.0, sum_g = 0.0, dbl = 0.0;
  for (std::size_t m = 0; m < n_; ++m) {
    if (m == i) continue;
    sum_c += cp.c_row[m] * wm[m];
    sum_g += cp.gamma[i][m] * wm[m];
  }
  for (std::size_t k = 0; k < n_; ++k) {
    if (k == i) continue;
    for (std::size_t m = 0; m < n_; ++m) {
      if (m == i || m == k) continue;
      dbl += cp.gamma[k][m] * wm[k] * wm[m];
    }
  }
  const double cii = cp.c_row[i];
  Stage out;
  out.X = sp.lambda[i];
  out.rho = cii * v + sum_c * rho;
  out.w = -cii * w * w + (sum_g - sum_c) * w + dbl;
  out.v = sum_g * v + dbl * rho;
  return out;
}

void Engine::update_family(CharFamily& f, std::size_t i, std::vector<NodeAux>& aux, double h) {
  const EulerianField& S0 = *S0_;
  const EulerianField& S1 = *S1_;
  const EulerianField& S2 = *field_;
  for (std::size_t k = 0; k < f.z.size(); ++k) {
    const double X = f.X[k], rho = f.rho[k], w = f.w[k], v = f.v[k];
    NodeAux& a = aux[k];
    SystemState sm{S1.sample_state(X + 0.5 * h * a.lam), mode_};
    const Spectrum spm = spectrum(sm, p_, a.dir);
    update_dir(a.dir, sm.phi);
    const FamilyCoupling cp = family_coupling(sm, p_, spm, i);
    const Stage k1 = rhs(i, X, rho, w, v, S0, cp, a);
    const Stage k2 = rhs(i, X + 0.5 * h * k1.X, rho + 0.5 * h * k1.rho, w + 0.5 * h * k1.w,
                         v + 0.5 * h * k1.v, S1, cp, a);
    const Stage k3 = rhs(i, X + 0.5 * h * k2.X, rho + 0.5 * h * k2.rho, w + 0.5 * h * k2.w,
                         v + 0.5 * h * k2.v, S1, cp, a);
    const Stage k4 =
        rhs(i, X + h * k3.X, rho + h * k3.rho, w + h * k3.w, v + h * k3.v, S2, cp, a);
    f.X[k] = X + h / 6.0 * (k1.X + 2.0 * k2.X + 2.0 * k3.X + k4.X);
    f.rho[k] = rho + h / 6.0 * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho);
    f.w[k] = w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
    f.v[k] = v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    if (!std::isfinite(f.X[k]) || !std::isfinite(f.rho[k]) || !std::isfinite(f.w[k]) ||
        !std::isfinite(f.v[k]))
      throw std::runtime_error("simulate: family " + std::to_string(i + 1) +
                               " node diverged at t = " + fmt17(st_.t));
    a.lam = (f.X[k] - X) / h;
  }
}

void Engine::macro_step() {
  const double lam_max = field_->max_speed();
  if (field_->sup_phi() > 2.0 * p_.delta)
    throw std::runtime_error("simulate: the field left the certified amplitude ball at t = " +
                             fmt17(st_.t));
  double dt_e = cfg_.dt_cfl * dx_ / lam_max;

  const double allowed = 0.1 * rho1_min_cur_ / std::max(rho1_rate_, 1e-300);
  std::size_t K = kMaxSubsteps;
  if (allowed < static_cast<double>(kMaxSubsteps) * dt_e)
    K = static_cast<std::size_t>(allowed / dt_e);
  K -= K % 2;
  K = std::clamp<std::size_t>(K, 2, kMaxSubsteps);

  const double remaining = t_max_ - st_.t;
  if (static_cast<double>(K) * dt_e > remaining) {
    K = static_cast<std::size_t>(std::ceil(remaining / dt_e));
    K += K % 2;
    K = std::clamp<std::size_t>(K, 2, kMaxSubsteps);
    dt_e = remaining / static_cast<double>(K);
  }
  const double h = static_cast<double>(K) * dt_e;

  try_split();
  if (split_done_) {
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      auto [lo, hi] = outer_span(g);
      double vl = 0.0, vr = 0.0;
      for (std::size_t i : groups_[g]) {
        const CharFamily& f = st_.fam[i];
        if (f.X.front() <= lo) vl = aux_[i].front().lam;
        if (f.X.back() >= hi) vr = aux_[i].back().lam;
      }
      tracks_[g] = SentinelTrack{lo, hi, vl, vr, field_->time()};
    }
  }

  rho_prev0_ = st_.fam[0].rho;
  rho_prev_t_ = st_.t;

  S0_ = *field_;
  substeps(K / 2, dt_e);
  S1_ = *field_;
  substeps(K - K / 2, dt_e);

  for (std::size_t i = 0; i < n_; ++i) update_family(st_.fam[i], i, aux_[i], h);
  update_family(st_.shadow, 0, aux_sh_, h);
  st_.t = field_->time();
}

double seed_slope_sup(const CharFamily& f) {
  double sup = 0.0;
  for (std::size_t k = f.lo + 1; k + 1 < f.hi; ++k) {
    const double d = std::abs((f.rho[k + 1] - f.rho[k - 1]) / (f.z[k + 1] - f.z[k - 1]));
    sup = std::max(sup, d);
  }
  return sup;
}

void Engine::refresh_diagnostics() {
  SeriesRow row;
  row.t = st_.t;

  double rho1_min = kInf;
  for (std::size_t i = 0; i < n_; ++i) {
    const CharFamily& f = st_.fam[i];
    for (std::size_t k = 0; k < f.z.size(); ++k) {
      const bool in = k >= f.lo && k < f.hi;
      if (!in) {
        norms_.sentinel_rho_min = std::min(norms_.sentinel_rho_min, f.rho[k]);
        continue;
      }
      norms_.S_i[i] = std::max(norms_.S_i[i], f.rho[k]);
      norms_.J_i[i] = std::max(norms_.J_i[i], std::abs(f.v[k]));
      norms_.W = std::max(norms_.W, std::abs(f.w[k]));
      norms_.product_gap =
          std::max(norms_.product_gap, std::abs(f.v[k] - f.rho[k] * f.w[k]));
      if (i == 0)
        rho1_min = std::min(rho1_min, f.rho[k]);
      else
        norms_.Smin = std::min(norms_.Smin, f.rho[k]);
    }
  }
  norms_.S = *std::max_element(norms_.S_i.begin(), norms_.S_i.begin() + n_);
  norms_.J = *std::max_element(norms_.J_i.begin(), norms_.J_i.begin() + n_);

  // Strip geometry, group disjointness and the degenerate-pair speed gap.
  std::vector<std::pair<double, double>> strips(groups_.size());
  for (std::size_t g = 0; g < groups_.size(); ++g) strips[g] = strip_interval(g);
  if (st_.t > t0_) {
    std::vector<std::pair<double, double>> s = strips;
    std::sort(s.begin(), s.end());
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
      strip_gap_min_ = std::min(strip_gap_min_, s[k + 1].first - s[k].second);
  }
  if (mode_ == DimMode::Planar3D) {
    const std::vector<NodeAux>& a1 = aux_[1];
    const std::vector<NodeAux>& a2 = aux_[2];
    for (std::size_t k = 0; k < a1.size(); ++k)
      lambda_mid_gap_ = std::max(lambda_mid_gap_, std::abs(a1[k].lam - a2[k].lam));
  }

  // Eulerian sweep: sup |Phi|, and transverse amplitudes at sampled points.
  double ubar = norms_.Ubar;
  std::optional<TransverseDir> sweep_dir;
  for (std::size_t w = 0; w < field_->window_count(); ++w) {
    const FieldWindow& fw = field_->window(w);
    const std::size_t m = fw.cell.size();
    for (std::size_t j = 0; j < m; ++j) {
      double s2 = 0.0;
      for (std::size_t c = 0; c < n_; ++c) s2 += fw.cell[j][c] * fw.cell[j][c];
      ubar = std::max(ubar, std::sqrt(s2));
    }
    if (m < 9) continue;
    for (std::size_t j = 4; j + 4 < m; j += 4) {
      const double x = field_->cell_center(w, j);
      const double err = field_->gradient_error_indicator(x);
      SystemState s{field_->sample_state(x), mode_};
      const Vec6 gr = field_->sample_gradient(x);
      const Spectrum sp = spectrum(s, p_, sweep_dir);
      update_dir(sweep_dir, s.phi);
      for (std::size_t i = 0; i < n_; ++i) {
        const double wi = std::abs(dot(sp.left[i], gr, n_));
        norms_.W = std::max(norms_.W, wi);
        if (err > vguard_) continue;
        const std::size_t g = group_of_[i];
        const double clear = kStencilClear * dx_;
        if (x < strips[g].first - clear || x > strips[g].second + clear)
          norms_.V_group[g] = std::max(norms_.V_group[g], wi);
      }
    }
  }
  norms_.Ubar = ubar;
  norms_.V = *std::max_element(norms_.V_group.begin(), norms_.V_group.end());

  // Concentration integral over the half-peak seed window.
  const CharFamily& f0 = st_.fam[0];
  const double floor_rho = cfg_.rho_stop / 10.0;
  double acc = 0.0;
  for (std::size_t k = idx_z0_; k < idx_z0_star_; ++k) {
    const double ga = f0.v[k] * f0.v[k] / std::max(f0.rho[k], floor_rho);
    const double gb = f0.v[k + 1] * f0.v[k + 1] / std::max(f0.rho[k + 1], floor_rho);
    acc += 0.5 * (ga + gb) * (f0.z[k + 1] - f0.z[k]);
  }

  row.rho1_min = rho1_min;
  row.S = norms_.S;
  row.J = norms_.J;
  row.W = norms_.W;
  row.V = norms_.V;
  row.Ubar = norms_.Ubar;
  row.Smin = norms_.Smin;
  row.blowup = acc;
  row.dz_rho1_max = seed_slope_sup(f0);
  series_.push_back(row);
  dz_shadow_.push_back(seed_slope_sup(st_.shadow));

  // Decay corridor at the peak seed, with 5% slack on both rails.
  {
    const double e = cfg_.epsilon;
    const double rate = std::abs(c_self0_) * W0_;
    const double low = (1.0 - e) * (1.0 - std::pow(1.0 + e, 3) * rate * st_.t);
    const double up = (1.0 + e) * (1.0 - std::pow(1.0 - e, 4) * rate * st_.t);
    const double rc = f0.rho[idx_z0_];
    double margin = 1.05 * up - rc;
    if (low > 0.0) margin = std::min(margin, rc - 0.95 * low);
    rep_.envelope_margin = std::min(rep_.envelope_margin, margin);
    if (margin < 0.0) rep_.envelopes_ok = false;
  }

  rho1_min_cur_ = rho1_min;
  if (st_.t > rho_prev_t_) {
    double worst = 0.0;
    for (std::size_t k = f0.lo; k < f0.hi; ++k)
      worst = std::max(worst, std::abs(f0.rho[k] - rho_prev0_[k]));
    rho1_rate_ = std::max(worst / (st_.t - rho_prev_t_), 1e-12);
  }
}

void Engine::record_history() {
  hist_.t.push_back(st_.t);
  for (std::size_t i = 0; i < n_; ++i) {
    hist_.X[i].insert(hist_.X[i].end(), st_.fam[i].X.begin(), st_.fam[i].X.end());
    hist_.rho[i].insert(hist_.rho[i].end(), st_.fam[i].rho.begin(), st_.fam[i].rho.end());
  }
}

void Engine::take_snapshot(const char* label) {
  for (const auto& s : snaps_)
    if (s.first == label) return;
  snaps_.emplace_back(label, st_);
}

RunResult Engine::run() {
  const auto wall_start = std::chrono::steady_clock::now();
  setup();
  refresh_diagnostics();
  record_history();

  bool tripped = false;
  while (st_.t < t_max_ * (1.0 - 1e-12)) {
    macro_step();
    ++step_count_;
    refresh_diagnostics();
    if (step_count_ % kHistoryStride == 0) record_history();
    if (st_.t >= t0_) take_snapshot("t0");
    if (T_nom_ > 0.0 && st_.t >= 0.5 * T_nom_) take_snapshot("tmid");
    if (rho1_min_cur_ < cfg_.rho_stop) {
      tripped = true;
      break;
    }
  }
  if (step_count_ % kHistoryStride != 0) record_history();

  rep_.t_stop = st_.t;
  if (tripped) {
    const CharFamily& f0 = st_.fam[0];
    std::size_t kmin = f0.lo;
    for (std::size_t k = f0.lo; k < f0.hi; ++k)
      if (f0.rho[k] < f0.rho[kmin]) kmin = k;
    // Parabolic refinement of the seed of the minimum.
    double zs = f0.z[kmin];
    if (kmin > f0.lo && kmin + 1 < f0.hi) {
      const double dm = f0.rho[kmin - 1] - f0.rho[kmin];
      const double dp = f0.rho[kmin + 1] - f0.rho[kmin];
      const double den = dm + dp;
      if (den > 0.0)
        zs += 0.25 * (f0.z[kmin + 1] - f0.z[kmin - 1]) * (dm - dp) / den;
    }
    rep_.z_shock = zs;
    const double drop = rho_prev0_[kmin] - f0.rho[kmin];
    const double h = st_.t - rho_prev_t_;
    rep_.detected = true;
    rep_.T_star = drop > 0.0 ? st_.t + f0.rho[kmin] * h / drop : st_.t;
    rep_.in_bracket = rep_.T_star >= rep_.bracket_low && rep_.T_star <= rep_.bracket_high;
  }
  take_snapshot("tstar");

  RunResult out;
  out.cfg = cfg_;
  out.data_spec = data_.spec;
  out.material = p_;
  out.W0 = W0_;
  out.z0 = z00_;
  out.z0_star = z0_star_;
  out.sigma = sigma_;
  out.t0 = t0_;
  out.c_self0 = c_self0_;
  out.series = std::move(series_);
  out.dz_rho1_shadow = std::move(dz_shadow_);
  out.strip_gap_min_after_t0 = strip_gap_min_ == kInf ? 0.0 : strip_gap_min_;
  out.lambda_mid_gap_max = lambda_mid_gap_;
  out.report = rep_;
  out.norms = norms_;
  out.state = std::move(st_);
  out.snapshots = std::move(snaps_);
  out.history = std::move(hist_);
  out.schedule = std::move(sched_);
  out.field = std::move(field_);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (std::isnan(dx)) throw std::invalid_argument("SolverConfig: dx is NaN");
  if (!(dt_cfl > 0.0) || dt_cfl > 0.5)
    throw std::invalid_argument("SolverConfig: dt_cfl must lie in (0, 0.5], got " +
                                fmt17(dt_cfl));
  if (nodes_per_family < 9 || nodes_per_family > 100000)
    throw std::invalid_argument("SolverConfig: nodes_per_family must lie in [9, 100000], got " +
                                std::to_string(nodes_per_family));
  if (!(rho_stop > 0.0) || rho_stop >= 0.1)
    throw std::invalid_argument("SolverConfig: rho_stop must lie in (0, 0.1), got " +
                                fmt17(rho_stop));
  if (!(epsilon > 0.0) || epsilon > 0.01)
    throw std::invalid_argument("SolverConfig: epsilon must lie in (0, 0.01], got " +
                                fmt17(epsilon));
  if (!(t_max_factor > 0.0) || t_max_factor > 10.0)
    throw std::invalid_argument("SolverConfig: t_max_factor must lie in (0, 10], got " +
                                fmt17(t_max_factor));
  if (stop_at && !(*stop_at > 0.0))
    throw std::invalid_argument("SolverConfig: stop_at must be positive when set");
}

double separation_speed(const MaterialParams& p) {
  p.validate();
  const std::size_t n = p.n();
  const double radius = 2.0 * p.delta;
  const auto groups = family_groups(p.dim_mode);
  std::vector<double> lo(groups.size(), kInf), hi(groups.size(), -kInf);
  const auto absorb = [&](const Vec6& phi) {
    const Spectrum sp = spectrum(SystemState{phi, p.dim_mode}, p);
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::size_t i : groups[g]) {
        lo[g] = std::min(lo[g], sp.lambda[i]);
        hi[g] = std::max(hi[g], sp.lambda[i]);
      }
  };
  absorb(Vec6{});
  const std::size_t speed_comps = p.dim_mode == DimMode::Planar3D ? 3 : 2;
  for (std::size_t c = 0; c < speed_comps; ++c)
    for (const double s : {-1.0, 1.0}) {
      Vec6 phi{};
      phi[c] = s * radius;
      absorb(phi);
    }
  std::mt19937_64 gen(0);
  for (int k = 0; k < 2048; ++k) absorb(ball_point(gen, n, radius));
  double sigma = kInf;
  for (std::size_t g = 0; g + 1 < groups.size(); ++g)
    sigma = std::min(sigma, lo[g] - hi[g + 1]);
  if (!(sigma > 0.0))
    throw std::invalid_argument(
        "separation_speed: adjacent spectral gaps close on the sampled amplitude ball, gap = " +
        fmt17(sigma));
  return sigma;
}

double separation_time(double eta, const MaterialParams& p) {
  if (!(eta >= 0.0))
    throw std::invalid_argument("separation_time: eta must be >= 0, got " + fmt17(eta));
  return eta / separation_speed(p);
}

double history_position(const RunHistory& h, std::size_t f, double y, double tq) {
  return hist_lookup(h, h.X, f, y, tq, false, "history_position");
}
double history_rho(const RunHistory& h, std::size_t f, double y, double tq) {
  return hist_lookup(h, h.rho, f, y, tq, false, "history_rho");
}
double history_speed(const RunHistory& h, std::size_t f, double y, double tq) {
  return hist_lookup(h, h.X, f, y, tq, true, "history_speed");
}
double history_drho_dt(const RunHistory& h, std::size_t f, double y, double tq) {
  return hist_lookup(h, h.rho, f, y, tq, true, "history_drho_dt");
}

BicharTime bichar_time(const RunHistory& h, std::size_t i, std::size_t j, double yi, double yj) {
  if (i == j) throw std::invalid_argument("bichar_time: families must differ");
  if (i >= h.n || j >= h.n)
    throw std::invalid_argument("bichar_time: family out of range for n = " +
                                std::to_string(h.n));
  const auto gap = [&](double t) {
    return history_position(h, i, yi, t) - history_position(h, j, yj, t);
  };
  double ta = h.t.front(), tb = h.t.back();
  double ga = gap(ta), gb = gap(tb);
  if (ga == 0.0) return {ta, history_position(h, i, yi, ta), 0.0};
  if (gb == 0.0) return {tb, history_position(h, i, yi, tb), 0.0};
  if ((ga > 0.0) == (gb > 0.0))
    throw std::invalid_argument(
        "bichar_time: the two characteristics do not cross in the stored time range");
  for (int it = 0; it < 200 && tb - ta > 1e-15 * (1.0 + std::abs(tb)); ++it) {
    const double tm = 0.5 * (ta + tb);
    const double gm = gap(tm);
    if (gm == 0.0) {
      ta = tb = tm;
      break;
    }
    if ((gm > 0.0) == (ga > 0.0)) {
      ta = tm;
      ga = gm;
    } else {
      tb = tm;
      gb = gm;
    }
  }
  const double t = 0.5 * (ta + tb);
  return {t, history_position(h, i, yi, t), std::abs(gap(t))};
}

DecompositionCheck decomposition_check(const RunHistory& h, double tq,
                                       std::optional<double> z_at) {
  const std::vector<double>& zs = h.z[0];
  // Interior in-support seeds with two-seed margin for the differencing and
  // the crossing-time march.
  std::size_t lo = 0, hi = zs.size();
  while (lo < hi && zs[lo] < h.eta * (1.0 - 1e-9)) ++lo;
  while (hi > lo && zs[hi - 1] > 2.0 * h.eta * (1.0 + 1e-9)) --hi;
  if (hi - lo < 7)
    throw std::invalid_argument("decomposition_check: too few in-support seeds stored");
  const std::size_t kmin = lo + 2, kmax = hi - 3;

  std::size_t kc;
  if (z_at) {
    kc = std::clamp<std::size_t>(
        std::lower_bound(zs.begin(), zs.end(), *z_at) - zs.begin(), kmin, kmax);
  } else {
    kc = kmin;
    double best = -kInf;
    for (std::size_t k = kmin; k <= kmax; ++k) {
      const double d = std::abs((history_rho(h, 0, zs[k + 1], tq) -
                                 history_rho(h, 0, zs[k - 1], tq)) /
                                (zs[k + 1] - zs[k - 1]));
      if (d > best) {
        best = d;
        kc = k;
      }
    }
  }

  const double dz2 = zs[kc + 1] - zs[kc - 1];
  const double direct =
      (history_rho(h, 0, zs[kc + 1], tq) - history_rho(h, 0, zs[kc - 1], tq)) / dz2;

  // March the crossing time t'(y) one seed each way: dt'/dy = -rho / (2 lambda)
  // along the transversal foliation, then difference rho on that tilted slice.
  const auto slope = [&](double y, double tp) {
    return -history_rho(h, 0, y, tp) / (2.0 * history_speed(h, 0, y, tp));
  };
  double tp[3] = {tq, tq, tq};  // at kc-1, kc, kc+1
  for (int side : {-1, 1}) {
    const double y0 = zs[kc], y1 = zs[kc + side];
    const double dy = y1 - y0;
    const double s1 = slope(y0, tq);
    const double s2 = slope(y0 + 0.5 * dy, tq + 0.5 * dy * s1);
    const double s3 = slope(y0 + 0.5 * dy, tq + 0.5 * dy * s2);
    const double s4 = slope(y1, tq + dy * s3);
    tp[1 + side] = tq + dy / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
  }
  const double transversal =
      (history_rho(h, 0, zs[kc + 1], tp[2]) - history_rho(h, 0, zs[kc - 1], tp[0])) / dz2;

  const double rho_c = history_rho(h, 0, zs[kc], tq);
  const double lam_c = history_speed(h, 0, zs[kc], tq);
  const double dsrho = history_drho_dt(h, 0, zs[kc], tq);
  const double composed = transversal + rho_c / (2.0 * lam_c) * dsrho;

  DecompositionCheck out;
  out.t = tq;
  out.z = zs[kc];
  out.direct = direct;
  out.composed = composed;
  out.rel_gap =
      std::abs(direct - composed) / std::max({std::abs(direct), std::abs(composed), 1e-300});
  return out;
}

OmegaRegion omega_region(double T_star, double eta, const MaterialParams& p) {
  p.validate();
  if (!(T_star >= 0.0))
    throw std::invalid_argument("omega_region: T_star must be >= 0, got " + fmt17(T_star));
  if (!(eta > 0.0))
    throw std::invalid_argument("omega_region: eta must be positive, got " + fmt17(eta));
  OmegaRegion o;
  o.mode = p.dim_mode;
  o.center = {p.c1 * T_star + 1.5 * eta, 0.0, 0.0};
  const double ax = 0.5 * eta;
  const double ar = 0.5 * eta * p.c2 / p.c1;
  constexpr double pi = 3.14159265358979323846;
  if (p.dim_mode == DimMode::Planar3D) {
    o.semi_axes = {ax, ar, ar};
    o.volume = 4.0 / 3.0 * pi * ax * ar * ar;
  } else {
    o.semi_axes = {ax, ar, 0.0};
    o.volume = pi * ax * ar;
  }
  return o;
}

double omega_section_weight(double z, double eta) {
  if (!(eta > 0.0))
    throw std::invalid_argument("omega_section_weight: eta must be positive, got " + fmt17(eta));
  const double u = (z - eta) * (2.0 * eta - z);
  return u > 0.0 ? std::sqrt(u) : 0.0;
}

RunResult simulate(const InitialFamilies& data, const MaterialParams& p, SolverConfig cfg) {
  Engine e(data, p, std::move(cfg));
  return e.run();
}

std::vector<double> default_data_grid(double eta) {
  if (!(eta > 0.0))
    throw std::invalid_argument("default_data_grid: eta must be positive, got " + fmt17(eta));
  const std::size_t m = 4097;
  std::vector<double> g(m);
  const double a = 0.8 * eta, b = 2.2 * eta;
  for (std::size_t i = 0; i < m; ++i)
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(m - 1);
  return g;
}

std::function<Vec6(double)> make_initial_state(const InitialFamilies& data,
                                               const MaterialParams& p) {
  auto rd = std::make_shared<ReconstructedData>(reconstruct_phi0(data, p));
  const std::size_t n = p.n();
  return [rd, n](double x) {
    const std::vector<double>& xs = rd->x;
    if (x <= xs.front()) return rd->phi.front();
    if (x >= xs.back()) return rd->phi.back();
    const std::size_t b = lag4_base(xs, x, "make_initial_state");
    Vec6 out{};
    double ys[4];
    for (std::size_t c = 0; c < n; ++c) {
      for (int k = 0; k < 4; ++k) ys[k] = rd->phi[b + k][c];
      out[c] = lag4_eval(xs.data() + b, ys, x);
    }
    return out;
  };
}

void write_timeseries_csv(const RunResult& run, const std::string& path) {
  CsvWriter w(path,
              {"t", "rho1_min", "S", "J", "W", "V", "Ubar", "Smin", "blowup_indicator",
               "dz_rho1_max"});
  for (const SeriesRow& r : run.series)
    w.row({r.t, r.rho1_min, r.S, r.J, r.W, r.V, r.Ubar, r.Smin, r.blowup, r.dz_rho1_max});
  w.close();
}

void write_profile_csv(const CharacteristicField& state, std::size_t n,
                       const std::string& path) {
  std::vector<std::string> header{"z"};
  for (std::size_t i = 0; i < n; ++i) {
    const std::string s = std::to_string(i + 1);
    header.push_back("X_" + s);
    header.push_back("rho_" + s);
    header.push_back("w_" + s);
    header.push_back("v_" + s);
  }
  CsvWriter w(path, header);
  const std::size_t m = state.fam[0].z.size();
  for (std::size_t i = 1; i < n; ++i)
    if (state.fam[i].z.size() != m)
      throw std::runtime_error("write_profile_csv: families carry different seed grids");
  std::vector<double> row(header.size());
  for (std::size_t k = 0; k < m; ++k) {
    row[0] = state.fam[0].z[k];
    for (std::size_t i = 0; i < n; ++i) {
      const CharFamily& f = state.fam[i];
      row[1 + 4 * i + 0] = f.X[k];
      row[1 + 4 * i + 1] = f.rho[k];
      row[1 + 4 * i + 2] = f.w[k];
      row[1 + 4 * i + 3] = f.v[k];
    }
    w.row(row);
  }
  w.close();
}

void write_report_json(const RunResult& run, const std::string& path) {
  nlohmann::ordered_json j;
  j["config"]["dx"] = run.cfg.dx;
  j["config"]["dt_cfl"] = run.cfg.dt_cfl;
  j["config"]["nodes_per_family"] = run.cfg.nodes_per_family;
  j["config"]["rho_stop"] = run.cfg.rho_stop;
  j["config"]["epsilon"] = run.cfg.epsilon;
  j["config"]["t_max_factor"] = run.cfg.t_max_factor;
  if (run.cfg.stop_at)
    j["config"]["stop_at"] = *run.cfg.stop_at;
  else
    j["config"]["stop_at"] = nullptr;
  j["data"]["eta"] = run.data_spec.eta;
  j["data"]["theta"] = run.data_spec.theta;
  j["data"]["alpha"] = run.data_spec.alpha;
  j["data"]["mode"] = run.data_spec.mode == DimMode::Planar3D ? "planar3d" : "planar2d";
  j["data"]["W0"] = run.W0;
  j["data"]["z0"] = run.z0;
  j["data"]["z0_star"] = run.z0_star;
  j["material"]["c1"] = run.material.c1;
  j["material"]["c2"] = run.material.c2;
  j["material"]["sigma0"] = run.material.sigma0;
  j["material"]["sigma1"] = run.material.sigma1;
  j["material"]["delta"] = run.material.delta;
  j["separation"]["sigma"] = run.sigma;
  j["separation"]["t0"] = run.t0;
  j["shock"]["c_self0"] = run.c_self0;
  j["shock"]["detected"] = run.report.detected;
  j["shock"]["T_star"] = run.report.T_star;
  j["shock"]["t_stop"] = run.report.t_stop;
  j["shock"]["z_shock"] = run.report.z_shock;
  j["shock"]["bracket_low"] = run.report.bracket_low;
  j["shock"]["bracket_high"] = run.report.bracket_high;
  j["shock"]["in_bracket"] = run.report.in_bracket;
  j["shock"]["envelopes_ok"] = run.report.envelopes_ok;
  j["shock"]["envelope_margin"] = run.report.envelope_margin;
  j["norms"]["S"] = run.norms.S;
  j["norms"]["J"] = run.norms.J;
  j["norms"]["W"] = run.norms.W;
  j["norms"]["V"] = run.norms.V;
  j["norms"]["Ubar"] = run.norms.Ubar;
  j["norms"]["Smin"] = run.norms.Smin;
  j["norms"]["V_group"] = run.norms.V_group;
  j["norms"]["product_gap"] = run.norms.product_gap;
  j["norms"]["sentinel_rho_min"] = run.norms.sentinel_rho_min;
  j["invariants"]["strip_gap_min_after_t0"] = run.strip_gap_min_after_t0;
  j["invariants"]["lambda_mid_gap_max"] = run.lambda_mid_gap_max;
  j["windows"]["init_lo"] = run.schedule.init_lo;
  j["windows"]["init_hi"] = run.schedule.init_hi;
  j["windows"]["split_time"] = run.schedule.split_time;
  j["windows"]["count"] = run.schedule.spans.size();
  j["windows"]["shifts"] = run.schedule.shifts.size();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report_json: cannot open " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write_report_json: write failure on " + path);
}

void write_run_artifacts(const RunResult& run, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_timeseries_csv(run, dir + "/timeseries.csv");
  for (const auto& [label, state] : run.snapshots)
    write_profile_csv(state, run.state.n, dir + "/profiles_" + label + ".csv");
  write_report_json(run, dir + "/report.json");
}

}  // namespace elastoshock
