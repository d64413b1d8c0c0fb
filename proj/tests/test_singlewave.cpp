#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "elastoshock/rng.hpp"
#include "elastoshock/singlewave.hpp"

using namespace elastoshock;

namespace {

// Smooth compactly supported bump amp * exp(1 - 1/(1 - u^2)), u = (y-c)/r.
struct Bump {
  double amp = 0.0;
  double center = 0.0;
  double radius = 1.0;

  double operator()(double y) const {
    const double u = (y - center) / radius;
    if (std::abs(u) >= 1.0) return 0.0;
    return amp * std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  double deriv(double y) const {
    const double u = (y - center) / radius;
    if (std::abs(u) >= 1.0) return 0.0;
    const double g = 1.0 - u * u;
    return operator()(y) * (-2.0 * u / (g * g)) / radius;
  }
};

SingleWaveData bump_data(const Bump& b1, const Bump& b2) {
  SingleWaveData d;
  d.w1 = [b1](double y) { return b1(y); };
  d.dw1 = [b1](double y) { return b1.deriv(y); };
  d.w2 = [b2](double y) { return b2(y); };
  d.dw2 = [b2](double y) { return b2.deriv(y); };
  return d;
}

const Bump kW1{0.4, 1.0, 1.0};
const Bump kW2{0.15, 3.2, 1.2};

// Seed of steepest initial rise of w1, located by scanning.
double steepest_seed(const Bump& b) {
  double best_y = b.center - b.radius, best = -1.0;
  for (int k = 0; k <= 4000; ++k) {
    const double y = b.center - b.radius + b.radius * k / 4000.0;
    if (b.deriv(y) > best) {
      best = b.deriv(y);
      best_y = y;
    }
  }
  return best_y;
}

}  // namespace

TEST_CASE("invariant transforms round trip and pin the quoted pairs") {
  const RiemannPair zero = single_wave_invariants({0.0, 0.0});
  CHECK(zero.w1 == 0.0);
  CHECK(zero.w2 == 0.0);

  const RiemannPair flat = single_wave_invariants({0.3, 0.0});
  CHECK(flat.w1 == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(flat.w2 == doctest::Approx(0.3).epsilon(1e-15));

  CHECK(single_wave_speed({0.0, 0.0}) == 1.0);
  const double lam = single_wave_speed({0.1, -0.2});
  CHECK(lam == doctest::Approx(std::cbrt(1.0 - 0.45)).epsilon(1e-15));
  CHECK(single_wave_dspeed_dw1(lam) == doctest::Approx(-0.5 / (lam * lam)));
  CHECK(single_wave_dspeed_dw2(lam) == doctest::Approx(+0.5 / (lam * lam)));

  std::mt19937_64 rng(17);
  for (int k = 0; k < 1000; ++k) {
    SingleWaveState v;
    v.v1 = uniform(rng, -0.5, 0.5);
    v.v2 = uniform(rng, -0.45, 0.6);
    const SingleWaveState back = single_wave_from_invariants(single_wave_invariants(v));
    CHECK(std::abs(back.v1 - v.v1) <= 1e-12);
    CHECK(std::abs(back.v2 - v.v2) <= 1e-12);
  }

  CHECK_THROWS_AS((void)single_wave_invariants({0.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS((void)single_wave_from_invariants({1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS((void)single_wave_speed({2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("lattice crossings are exact for constant data") {
  SingleWaveData d;
  d.w1 = [](double) { return 0.0; };
  d.dw1 = [](double) { return 0.0; };
  d.w2 = [](double) { return 0.0; };
  d.dw2 = [](double) { return 0.0; };
  const CharacteristicLattice lat(d, -1.0, 1.0, 40);

  // Speeds are exactly +-1: node (m, n) sits at the crossing of x = y_m - t
  // with x = y_n + t.
  for (std::size_t m = 0; m <= 40; m += 7) {
    for (std::size_t n = 0; n <= m; n += 3) {
      const auto nd = lat.node(m, n);
      const double tm = 0.5 * (lat.seed(m) - lat.seed(n));
      CHECK(nd.t == doctest::Approx(tm).epsilon(1e-14));
      CHECK(nd.x == doctest::Approx(0.5 * (lat.seed(m) + lat.seed(n))).epsilon(1e-14));
    }
  }
  CHECK(lat.right_position(4, 0.3) == doctest::Approx(lat.seed(4) + 0.3).epsilon(1e-13));
  CHECK(lat.left_position(36, 0.25) ==
        doctest::Approx(lat.seed(36) - 0.25).epsilon(1e-13));

  const RiemannPair w = lat.invariants_at(0.05, 0.4);
  CHECK(w.w1 == doctest::Approx(0.0));
  CHECK(w.w2 == doctest::Approx(0.0));

  CHECK_THROWS_AS((void)lat.invariants_at(0.0, 50.0), std::invalid_argument);
  CHECK_THROWS_AS((void)lat.node(50, 0), std::invalid_argument);
}

TEST_CASE("lattice constructor rejects bad inputs") {
  SingleWaveData d = bump_data(kW1, kW2);
  CHECK_THROWS_AS(CharacteristicLattice(d, 1.0, -1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(CharacteristicLattice(d, 0.0, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(CharacteristicLattice(d, 0.0, 1.0, 9999), std::invalid_argument);

  SingleWaveData missing = d;
  missing.dw2 = nullptr;
  CHECK_THROWS_AS(CharacteristicLattice(missing, 0.0, 1.0, 64), std::invalid_argument);

  // w1 = 0.7 pushes 1 + (3/2)(w2 - w1) past zero.
  SingleWaveData vac = bump_data(Bump{0.7, 0.5, 0.4}, Bump{0.0, 3.0, 1.0});
  CHECK_THROWS_AS(CharacteristicLattice(vac, 0.0, 1.0, 64), std::invalid_argument);
}

TEST_CASE("simple wave keeps right curves straight and matches the pure riccati form") {
  // Vanishing w2 everywhere: every right-going curve is a straight line and
  // the slope equation has no linear term.
  SingleWaveData d = bump_data(kW1, Bump{0.0, 3.0, 1.0});
  const double y2 = steepest_seed(kW1);
  const CharacteristicLattice lat(d, y2, y2 + 6.0, 2400);

  for (std::size_t n : {std::size_t{0}, std::size_t{40}, std::size_t{400}}) {
    const double lam_n = single_wave_speed({lat.w1_of_column(n), 0.0});
    const double tt = 0.8 * lat.right_cover(n);
    CHECK(lat.right_position(n, tt) ==
          doctest::Approx(lat.seed(n) + lam_n * tt).epsilon(1e-9));
  }

  const CharacteristicPath path = extract_path(lat, 0);
  const double m = path.q0;
  REQUIRE(m > 0.1);
  const double lam = path.lam[0];
  const double tb_exact = 2.0 * lam * lam / m;

  for (double f : {0.1, 0.4, 0.7, 0.9}) {
    const double tt = f * tb_exact;
    const RiccatiSlope rs = riccati_slope(path, tt);
    CHECK(rs.i_t == 0.0);
    const double expect = m / (1.0 - m * tt / (2.0 * lam * lam));
    CHECK(rs.slope == doctest::Approx(expect).epsilon(1e-8));
    CHECK(rs.denominator ==
          doctest::Approx(1.0 - m * tt / (2.0 * lam * lam)).epsilon(1e-8));
  }
  CHECK(denominator_root(path) == doctest::Approx(tb_exact).epsilon(1e-7));
  CHECK_THROWS_AS((void)riccati_slope(path, 1.02 * tb_exact), std::invalid_argument);

  // A probe at the bump crest has zero initial slope: the slope stays zero
  // and the denominator stays one, exactly.
  const CharacteristicLattice crest(d, kW1.center, kW1.center + 6.0, 1200);
  const CharacteristicPath flat_path = extract_path(crest, 0);
  CHECK(flat_path.q0 == 0.0);
  for (double tt : {0.3, 1.0, 2.0}) {
    const RiccatiSlope rs = riccati_slope(flat_path, tt);
    CHECK(rs.slope == 0.0);
    CHECK(rs.denominator == 1.0);
  }
  CHECK(denominator_root(flat_path) == std::numeric_limits<double>::infinity());
}

TEST_CASE("slope formula matches direct integration through a varying background") {
  const SingleWaveData d = bump_data(kW1, kW2);
  const double y2 = steepest_seed(kW1);
  const CharacteristicLattice lat(d, y2, y2 + 7.0, 2800);
  const CharacteristicPath path = extract_path(lat, 0);
  REQUIRE(path.q0 > 0.1);

  const double tb = denominator_root(path);
  REQUIRE(std::isfinite(tb));
  REQUIRE(tb > 1.0);
  REQUIRE(tb < 4.0);
  REQUIRE(path.t_max() > 0.95 * tb);

  // The curve must actually traverse the moving w2 profile, otherwise the
  // linear term never switches on.
  double w2_seen = 0.0;
  for (double f = 0.05; f < 0.9; f += 0.05)
    w2_seen = std::max(w2_seen, path_point(path, f * tb).w2);
  CHECK(w2_seen > 0.05);

  // I accumulated by quadrature against its closed log form.
  for (double f : {0.2, 0.5, 0.8, 0.9}) {
    const PathPoint pt = path_point(path, f * tb);
    CHECK(pt.i_t == doctest::Approx(0.5 * std::log(pt.lambda / path.lam[0])).epsilon(1e-9));
  }
  {
    const PathPoint late = path_point(path, 0.88 * tb);
    CHECK(std::abs(late.i_t) > 1e-4);
  }

  // Direct fourth-order integration of dq/dt = -(dlambda/dw1) q^2 - I' q
  // along the same curve.
  const auto rhs = [&](double tt, double q) {
    const PathPoint pt = path_point(path, tt);
    const double a = single_wave_dspeed_dw1(pt.lambda);
    const double b = d.dw2(pt.u) / (4.0 * std::pow(pt.lambda, 3.0) * pt.dt_du);
    return -a * q * q - b * q;
  };
  double q = path.q0;
  double tt = 0.0;
  const double t_end = 0.9 * tb;
  const int steps = 4000;
  const double dt = t_end / steps;
  std::vector<double> checkpoints{0.25 * t_end, 0.5 * t_end, 0.75 * t_end, t_end};
  std::size_t next = 0;
  for (int k = 0; k < steps; ++k) {
    const double k1 = rhs(tt, q);
    const double k2 = rhs(tt + 0.5 * dt, q + 0.5 * dt * k1);
    const double k3 = rhs(tt + 0.5 * dt, q + 0.5 * dt * k2);
    const double k4 = rhs(tt + dt, q + dt * k3);
    q += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tt += dt;
    if (next < checkpoints.size() && tt >= checkpoints[next] - 0.5 * dt) {
      const RiccatiSlope rs = riccati_slope(path, tt);
      CHECK(std::abs(q - rs.slope) <= 1e-6 * std::abs(rs.slope));
      ++next;
    }
  }
  CHECK(next == checkpoints.size());

  // One-shot probe agrees with the path-based route.
  const RiccatiSlope one = riccati_slope(d, y2, 0.5 * tb, 7.0, 2800);
  const RiccatiSlope two = riccati_slope(path, 0.5 * tb);
  CHECK(one.slope == doctest::Approx(two.slope).epsilon(1e-12));
  CHECK(one.denominator == doctest::Approx(two.denominator).epsilon(1e-12));
}

TEST_CASE("invariants stay constant along traced characteristics") {
  const SingleWaveData d = bump_data(kW1, kW2);
  const CharacteristicLattice lat(d, -1.0, 3.8, 1920);

  const double dt = 1e-4;
  const int steps = 10000;  // one unit of time

  // Right-going tracer: w1 must hold its seed value.
  {
    const double y0 = 0.3;
    const double w1_seed = d.w1(y0);
    double x = y0;
    double worst = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double t0 = k * dt;
      const auto speed = [&](double xx, double ttt) {
        return single_wave_speed(lat.invariants_at(xx, ttt));
      };
      const double k1 = speed(x, t0);
      const double k2 = speed(x + 0.5 * dt * k1, t0 + 0.5 * dt);
      const double k3 = speed(x + 0.5 * dt * k2, t0 + 0.5 * dt);
      const double k4 = speed(x + dt * k3, t0 + dt);
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if ((k + 1) % 200 == 0) {
        const RiemannPair w = lat.invariants_at(x, (k + 1) * dt);
        worst = std::max(worst, std::abs(w.w1 - w1_seed));
      }
    }
    CHECK(worst <= 1e-8);
  }

  // Left-going tracer: w2 must hold its seed value.
  {
    const double y0 = 2.6;
    const double w2_seed = d.w2(y0);
    double x = y0;
    double worst = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double t0 = k * dt;
      const auto speed = [&](double xx, double ttt) {
        return -single_wave_speed(lat.invariants_at(xx, ttt));
      };
      const double k1 = speed(x, t0);
      const double k2 = speed(x + 0.5 * dt * k1, t0 + 0.5 * dt);
      const double k3 = speed(x + 0.5 * dt * k2, t0 + 0.5 * dt);
      const double k4 = speed(x + dt * k3, t0 + dt);
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if ((k + 1) % 200 == 0) {
        const RiemannPair w = lat.invariants_at(x, (k + 1) * dt);
        worst = std::max(worst, std::abs(w.w2 - w2_seed));
      }
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("numeric slope blow-up lands on the vanishing denominator") {
  const SingleWaveData d = bump_data(kW1, kW2);
  const double y_lo = 0.0;
  const std::size_t cells = 2496;
  const double h = 2.5e-3;
  const CharacteristicLattice lat(d, y_lo, y_lo + cells * h, cells);

  // Probe the column closest to the steepest rise.
  const double y_star = steepest_seed(kW1);
  const std::size_t n_star = static_cast<std::size_t>(std::lround((y_star - y_lo) / h));
  const CharacteristicPath path = extract_path(lat, n_star);
  const double tb = denominator_root(path);
  REQUIRE(std::isfinite(tb));

  // Finite-difference slope across the two neighbor curves. The gap between
  // them closes at the fold and reopens afterwards, so the slope exceeds any
  // fixed threshold only inside a narrow window; scan forward for the first
  // crossing instead of bisecting against a far endpoint.
  const double dw1 = lat.w1_of_column(n_star + 1) - lat.w1_of_column(n_star - 1);
  const auto fd_gap = [&](double tt) {
    return lat.right_position(n_star + 1, tt) - lat.right_position(n_star - 1, tt);
  };
  const double threshold = 1e3;
  REQUIRE(std::abs(dw1 / fd_gap(0.5 * tb)) < threshold);

  const double hi = std::min(1.2 * tb, std::min(lat.right_cover(n_star - 1),
                                                lat.right_cover(n_star + 1)));
  REQUIRE(hi > 1.02 * tb);
  const double step = tb / 4000.0;
  double t_hit = std::numeric_limits<double>::infinity();
  for (double tt = 0.5 * tb; tt <= hi; tt += step) {
    if (std::abs(dw1 / fd_gap(tt)) >= threshold) {
      t_hit = tt;
      break;
    }
  }
  REQUIRE(std::isfinite(t_hit));
  CHECK(std::abs(t_hit - tb) <= 0.03 * tb);

  // The gap itself changes sign at the fold; pin that time more tightly.
  double lo_g = t_hit - step;
  double hi_g = hi;
  REQUIRE(fd_gap(lo_g) > 0.0);
  REQUIRE(fd_gap(hi_g) < 0.0);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo_g + hi_g);
    (fd_gap(mid) > 0.0 ? lo_g : hi_g) = mid;
  }
  const double t_fold = 0.5 * (lo_g + hi_g);
  CHECK(std::abs(t_fold - tb) <= 0.01 * tb);
}
