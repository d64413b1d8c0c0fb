#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace elastoshock {

/// Pointwise state of the scalar model problem phi_tt = (1 + 2 phi_x) phi_xx,
/// written as a 2x2 first-order system in v1 = phi_t, v2 = phi_x. Hyperbolic
/// while 1 + 2 v2 > 0, with speeds +-sqrt(1 + 2 v2). This model has exact
/// Riemann invariants and a closed slope formula, so it anchors the ODE and
/// quadrature tolerances used everywhere else.
struct SingleWaveState {
  double v1 = 0.0;
  double v2 = 0.0;
  double y = 0.0;  // characteristic label, carried through lattice queries
};

/// Riemann invariants:
///   w1 = v1 - (1/3)(1 + 2 v2)^{3/2} + 1/3, constant on right-going curves,
///   w2 = v1 + (1/3)(1 + 2 v2)^{3/2} - 1/3, constant on left-going curves.
struct RiemannPair {
  double w1 = 0.0;
  double w2 = 0.0;
};

/// Forward transform. Throws std::invalid_argument if 1 + 2 v2 <= 0.
RiemannPair single_wave_invariants(const SingleWaveState& s);

/// Inverse: v1 = (w1 + w2)/2 and 1 + 2 v2 = (1 + (3/2)(w2 - w1))^{2/3}.
/// Throws std::invalid_argument if 1 + (3/2)(w2 - w1) <= 0.
SingleWaveState single_wave_from_invariants(const RiemannPair& w, double y = 0.0);

/// Right-family speed lambda(w) = (1 + (3/2)(w2 - w1))^{1/3}; the left family
/// moves at -lambda. Throws std::invalid_argument outside hyperbolicity.
double single_wave_speed(const RiemannPair& w);

/// d lambda / d w1 = -1/(2 lambda^2),  d lambda / d w2 = +1/(2 lambda^2).
inline double single_wave_dspeed_dw1(double lambda) { return -0.5 / (lambda * lambda); }
inline double single_wave_dspeed_dw2(double lambda) { return +0.5 / (lambda * lambda); }

/// Initial invariant profiles and their spatial derivatives.
struct SingleWaveData {
  std::function<double(double)> w1;
  std::function<double(double)> dw1;
  std::function<double(double)> w2;
  std::function<double(double)> dw2;
};

/// Bi-characteristic lattice for the model problem on seeds y_0 < ... < y_N.
///
/// Node (m, n), m >= n, is the crossing of the left-going curve seeded at
/// y_m with the right-going curve seeded at y_n. Invariant values at nodes
/// are exact (w1 from the column seed, w2 from the row seed); only the node
/// coordinates (x, t) are integrated, by a per-cell Simpson closure that is
/// linear in the unknowns because every speed sample is an exact value.
class CharacteristicLattice {
 public:
  /// Uniform seeds on [y_min, y_max] with `cells` intervals (8 <= cells <=
  /// 4096). Requires all four data callables and global hyperbolicity of the
  /// sampled invariant combinations; throws std::invalid_argument otherwise.
  CharacteristicLattice(const SingleWaveData& data, double y_min, double y_max,
                        std::size_t cells);

  std::size_t cells() const { return n_; }
  double seed(std::size_t k) const { return y_[k]; }
  const SingleWaveData& data() const { return data_; }

  struct NodeXT {
    double x = 0.0;
    double t = 0.0;
  };
  NodeXT node(std::size_t m, std::size_t n) const;

  double w1_of_column(std::size_t n) const { return w1n_[n]; }
  double w2_of_row(std::size_t m) const { return w2n_[m]; }
  double lambda_at(std::size_t m, std::size_t n) const;

  /// Position of the right-going curve seeded at y_n at time tt, by cubic
  /// Hermite between its lattice crossings (node slopes are exact speeds).
  /// Throws std::invalid_argument when tt is outside the curve's computed,
  /// monotone-in-time range.
  double right_position(std::size_t n, double tt) const;
  /// Same for the left-going curve seeded at y_m.
  double left_position(std::size_t m, double tt) const;

  /// Latest time to which the right curve n (resp. left curve m) is covered.
  double right_cover(std::size_t n) const;
  double left_cover(std::size_t m) const;

  /// Invariants at an arbitrary point inside the covered wedge: w1 from a
  /// cubic interpolation across neighboring right curves, w2 across left
  /// curves. Throws std::invalid_argument outside the covered region.
  RiemannPair invariants_at(double x, double tt) const;

 private:
  std::size_t idx(std::size_t m, std::size_t n) const { return m * (m + 1) / 2 + n; }
  std::size_t locate_right(std::size_t n, double tt) const;
  std::size_t locate_left(std::size_t m, double tt) const;

  SingleWaveData data_;
  std::size_t n_ = 0;        // cell count; seeds are 0..n_
  double h_ = 0.0;           // seed spacing
  std::vector<double> y_;    // seeds
  std::vector<double> w1n_, w2n_;    // exact invariants at seeds
  std::vector<double> w1h_, w2h_;    // exact invariants at half-seeds
  std::vector<double> x_, t_;        // triangular node coordinates
  std::vector<std::size_t> col_mono_;  // per column: last m with increasing t
  std::vector<std::size_t> row_mono_;  // per row: smallest n with increasing t
};

/// One right-going characteristic extracted from a lattice column, with the
/// running quadratures the slope formula consumes: crossing times t, exact
/// speeds, the accumulated integral
///   I(t) = int dW2 / (4 lambda^3)
/// along the curve (composite Simpson in the seed variable), and
///   D(t) = int_0^t e^{-I} dlambda/dw1 dtau
/// (two-point Gauss per segment against the Hermite time map).
struct CharacteristicPath {
  double y2 = 0.0;  // seed of the traced curve
  double q0 = 0.0;  // dx w1 at the seed
  double w1 = 0.0;  // frozen invariant along the curve
  std::vector<double> y1;     // left-curve seeds crossed, ascending
  std::vector<double> t;      // crossing times
  std::vector<double> x;      // crossing positions
  std::vector<double> lam;    // exact speeds at crossings
  std::vector<double> dtdy;   // dt/dy1 along the curve (4th-order differences)
  std::vector<double> i_acc;  // I at crossings
  std::vector<double> d_acc;  // D at crossings
  std::size_t valid = 0;      // crossings 0..valid have strictly increasing t
  std::function<double(double)> w20, dw20;  // copies of the background data

  double t_max() const { return t[valid]; }
};

CharacteristicPath extract_path(const CharacteristicLattice& lattice, std::size_t column);

/// Point on a path at time tt (dense output between crossings): the seed
/// parameter u of the left curve crossed there, position, exact speed, the
/// background invariant w2, the accumulated I, and dt/du of the time map.
struct PathPoint {
  double u = 0.0;
  double x = 0.0;
  double lambda = 0.0;
  double w2 = 0.0;
  double i_t = 0.0;
  double dt_du = 0.0;
};

PathPoint path_point(const CharacteristicPath& path, double tt);

/// Slope of w1 across the traced curve at time tt:
///   slope = q0 e^{-I(t)} / (1 + q0 D(t)),
/// the closed solution of the slope equation
///   dq/dt = -(dlambda/dw1) q^2 - I'(t) q.
/// `denominator` is the blow-up functional 1 + q0 D(t). Throws
/// std::invalid_argument when tt exceeds the path's coverage or the
/// denominator is not positive (the wave has already broken).
struct RiccatiSlope {
  double slope = 0.0;
  double denominator = 0.0;
  double i_t = 0.0;
  double x = 0.0;
};

RiccatiSlope riccati_slope(const CharacteristicPath& path, double tt);

/// One-shot form: builds a lattice seeded at [y2, y2 + y_span] with `cells`
/// intervals and probes its first column.
RiccatiSlope riccati_slope(const SingleWaveData& data, double y2, double tt,
                           double y_span = 6.0, std::size_t cells = 2400);

/// First time the slope denominator 1 + q0 D(t) reaches zero, by bisection
/// between crossings; +infinity if it stays positive over the covered range.
double denominator_root(const CharacteristicPath& path);

}  // namespace elastoshock
