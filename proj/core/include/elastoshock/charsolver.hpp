#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "elastoshock/euler.hpp"
#include "elastoshock/initdata.hpp"
#include "elastoshock/material.hpp"
#include "elastoshock/state.hpp"

namespace elastoshock {

/// Knobs of a characteristic shock run. dx <= 0 means "derive eta / 400 from
/// the data when the run starts"; everything else has a hard validity range.
struct SolverConfig {
  double dx = 0.0;
  double dt_cfl = 0.5;                 // Euler substep as a fraction of dx / max speed
  std::size_t nodes_per_family = 257;  // uniform seeds on [eta, 2*eta]
  double rho_stop = 1e-3;              // stop once min rho_1 falls below this
  double epsilon = 0.01;               // amplitude-smallness parameter of the envelopes
  double t_max_factor = 1.3;           // cap on t * |c_self(0)| * W0 when no shock shows
  std::optional<double> stop_at;       // integrate to exactly this time instead
  void validate() const;
};

/// Slowest guaranteed approach speed between adjacent characteristic groups
/// over the amplitude ball (deterministic sampled inf of the spectral gaps),
/// and the time eta / (that speed) after which width-eta data centered on
/// distinct groups can no longer overlap. Throws std::invalid_argument when
/// the sampled gap closes (ball too large for the material).
double separation_speed(const MaterialParams& p);
double separation_time(double eta, const MaterialParams& p);

/// One family of characteristic nodes, indexed together: seed z[k] is fixed
/// for the whole run while X[k] moves with the family speed. Seeds cover
/// [eta, 2*eta] on indices [lo, hi); two off-support sentinel pairs sit at
/// 0.8, 0.9, 2.1 and 2.2 times eta and ride the quiescent exterior.
struct CharFamily {
  std::vector<double> z;
  std::vector<double> X;
  std::vector<double> rho;
  std::vector<double> w;
  std::vector<double> v;
  std::size_t lo = 0, hi = 0;
};

/// Snapshot of every family (plus the double-resolution shadow copy of the
/// fastest family used for seed-refinement checks) at one time.
struct CharacteristicField {
  double t = 0.0;
  std::size_t n = 6;
  std::array<CharFamily, 6> fam;
  CharFamily shadow;
};

/// Running extremes accumulated over a run. All sups are over times up to the
/// current one; "in-support" means seeds inside [eta, 2*eta].
struct RunningNorms {
  double S = 0.0;     // sup of rho_i over in-support nodes, all families
  double J = 0.0;     // sup of |v^i| over in-support nodes
  double W = 0.0;     // sup of |w^i| at nodes and sampled Eulerian points
  double V = 0.0;     // sup of off-strip transverse amplitudes (see V_group)
  double Ubar = 0.0;  // sup of |Phi| over the covered cells
  double Smin = 0.0;  // inf of rho_i, i >= 2, over in-support nodes
  std::array<double, 6> S_i{};
  std::array<double, 6> J_i{};
  // Per characteristic group, the sup of |w^m| (m in the group) at sampled
  // Eulerian points lying outside the group's strip. Samples where the
  // gradient stencil flags an unresolved front are excluded.
  std::array<double, 4> V_group{};
  double product_gap = 0.0;       // max |v - rho * w| over in-support nodes
  double sentinel_rho_min = 0.0;  // min rho over the off-support sentinels
};

/// One row of the emitted time series.
struct SeriesRow {
  double t = 0.0;
  double rho1_min = 0.0;
  double S = 0.0, J = 0.0, W = 0.0, V = 0.0, Ubar = 0.0, Smin = 0.0;
  double blowup = 0.0;       // concentration integral over the seed window
  double dz_rho1_max = 0.0;  // sup |d rho_1 / dz| by seed differencing
};

/// Outcome of the online shock detection.
struct ShockReport {
  bool detected = false;
  double T_star = 0.0;  // linear extrapolation of rho_1(z_shock, .) to zero
  double t_stop = 0.0;  // last computed time
  double z_shock = 0.0;
  double bracket_low = 0.0;
  double bracket_high = 0.0;
  bool in_bracket = false;
  // Two-sided comparison of rho_1 at the seed of the initial amplitude peak
  // against the predicted decay corridor, with 5% slack; margin is the worst
  // remaining slack seen (negative = violated).
  bool envelopes_ok = true;
  double envelope_margin = 0.0;
};

/// Stored node trajectories at a coarse cadence, queryable in seed and time
/// by cubic interpolation. Powers the crossing-time and seed-derivative
/// cross-checks without keeping full field history.
struct RunHistory {
  double eta = 0.0;
  std::size_t n = 6;
  std::vector<double> t;
  std::array<std::vector<double>, 6> z;  // seeds per family
  // Row-major [record * z[f].size() + node].
  std::array<std::vector<double>, 6> X;
  std::array<std::vector<double>, 6> rho;
};

/// Position / stretch / speed of family f at seed y and time tq, from the
/// stored trajectories (cubic in seed and in time; speed is the time
/// derivative of the interpolated position).
double history_position(const RunHistory& h, std::size_t f, double y, double tq);
double history_rho(const RunHistory& h, std::size_t f, double y, double tq);
double history_speed(const RunHistory& h, std::size_t f, double y, double tq);
double history_drho_dt(const RunHistory& h, std::size_t f, double y, double tq);

/// First meeting of the family-i characteristic from seed yi with the
/// family-j one from yj, root-found on the stored trajectories. Throws
/// std::invalid_argument when i == j or the two never cross in the stored
/// time range.
struct BicharTime {
  double t = 0.0;
  double x = 0.0;
  double residual = 0.0;  // |X_i - X_j| left at the returned time
};
BicharTime bichar_time(const RunHistory& h, std::size_t i, std::size_t j, double yi, double yj);

/// Splits the seed derivative of rho_1 at time tq into its transversal part
/// plus the stretch-weighted time part, both measured independently of the
/// direct seed differencing they are compared against. Taken at the seed of
/// steepest rho_1 unless z_at is given.
struct DecompositionCheck {
  double t = 0.0;
  double z = 0.0;
  double direct = 0.0;    // d rho_1 / d z by seed differencing
  double composed = 0.0;  // transversal derivative + (rho_1 / 2 lambda_1) d rho_1 / ds
  double rel_gap = 0.0;
};
DecompositionCheck decomposition_check(const RunHistory& h, double tq,
                                       std::optional<double> z_at = std::nullopt);

/// The spatial region carrying the blow-up concentration at time T_star: an
/// ellipsoid (3D) or ellipse (2D) riding the fast family, with volume (resp.
/// area) in `volume`.
struct OmegaRegion {
  std::array<double, 3> center{};
  std::array<double, 3> semi_axes{};
  double volume = 0.0;
  DimMode mode = DimMode::Planar3D;
};
OmegaRegion omega_region(double T_star, double eta, const MaterialParams& p);

/// Transverse chord weight of the planar region at offset z inside the data
/// support; vanishes outside [eta, 2*eta] and never exceeds eta / 2.
double omega_section_weight(double z, double eta);

/// Everything a run produces. `snapshots` holds labeled states ("t0" once the
/// groups have separated, "tmid" at half the nominal shock time, "tstar" at
/// the stop); labels present only if the run reached them.
struct RunResult {
  SolverConfig cfg;  // as used, dx resolved
  InitialDataSpec data_spec;
  MaterialParams material;
  double W0 = 0.0;
  double z0 = 0.0;       // seed of the initial amplitude peak
  double z0_star = 0.0;  // right end of the half-peak seed window
  double sigma = 0.0;    // separation speed
  double t0 = 0.0;       // separation time
  double c_self0 = 0.0;  // fast-family self-interaction coefficient at Phi = 0
  std::vector<SeriesRow> series;
  std::vector<double> dz_rho1_shadow;  // parallel to series
  // Smallest gap between adjacent group strips seen after the separation
  // time (positive = never overlapped), and the largest speed split observed
  // inside the degenerate middle pair (3D only, 0 in 2D).
  double strip_gap_min_after_t0 = 0.0;
  double lambda_mid_gap_max = 0.0;
  ShockReport report;
  RunningNorms norms;
  CharacteristicField state;  // at the stop
  std::vector<std::pair<std::string, CharacteristicField>> snapshots;
  RunHistory history;
  WindowSchedule schedule;
  std::optional<EulerianField> field;  // Eulerian state at the stop
  double wall_seconds = 0.0;
};

/// Runs the coupled Eulerian / characteristic integration from the given data
/// until the shock indicator trips, the time cap is reached, or cfg.stop_at.
RunResult simulate(const InitialFamilies& data, const MaterialParams& p, SolverConfig cfg);

/// The shared data-sampling convention of the command-line tools and tests:
/// 4097 uniform points spanning [0.8, 2.2] * eta.
std::vector<double> default_data_grid(double eta);

/// Cell-center initial state sampler: the integrated profile reconstruction,
/// cubic-interpolated, held constant beyond the grid ends.
std::function<Vec6(double)> make_initial_state(const InitialFamilies& data,
                                               const MaterialParams& p);

/// Artifact writers. Numbers are printed with 17 significant digits so a
/// byte-level diff is an exact-replay check.
void write_timeseries_csv(const RunResult& run, const std::string& path);
void write_profile_csv(const CharacteristicField& state, std::size_t n, const std::string& path);
void write_report_json(const RunResult& run, const std::string& path);
/// timeseries.csv, profiles_<label>.csv per snapshot, report.json under dir.
void write_run_artifacts(const RunResult& run, const std::string& dir);

}  // namespace elastoshock
