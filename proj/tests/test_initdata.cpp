#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "elastoshock/initdata.hpp"
#include "elastoshock/quadrature.hpp"
#include "elastoshock/spectrum.hpp"
#include "test_support.hpp"

using namespace elastoshock;

namespace {

std::vector<double> uniform_grid(double a, double b, std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

InitialDataSpec default_spec(DimMode mode = DimMode::Planar3D) {
  InitialDataSpec s;
  s.mode = mode;
  return s;
}

}  // namespace

TEST_CASE("mollifier integrates to one and stays under its cap") {
  const double eta = 0.1;
  const ProfileFn zeta = mollifier(eta);
  const double eps = 0.1 * eta;
  CHECK(zeta.support_lo == doctest::Approx(-eps).epsilon(1e-15));
  CHECK(zeta.support_hi == doctest::Approx(eps).epsilon(1e-15));

  const double mass =
      adaptive_integrate([&](double x) { return zeta(x); }, -eps, eps, 1e-13);
  CHECK(std::abs(mass - 1.0) < 1e-10);

  CHECK(zeta(eps) == 0.0);
  CHECK(zeta(-eps) == 0.0);
  CHECK(zeta(eps * 1.0001) == 0.0);

  // Frozen reference: peak * eta for the eta/10 mollifier.
  CHECK(std::abs(zeta(0.0) * eta - 8.285688398691) < 1e-8);

  double sup = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -eps + 2.0 * eps * i / 2000.0;
    sup = std::max(sup, zeta(x));
  }
  CHECK(sup <= 20.0 / eta);
  CHECK(sup == zeta(0.0));

  // Flat contact at the support edge: values vanish faster than any power,
  // so every one-sided difference quotient goes to zero.
  CHECK(zeta(eps - 1e-4 * eps) < 1e-20);
  CHECK(zeta(eps - 1e-5 * eps) < 1e-100);
  const double h = 1e-5 * eps;
  CHECK(zeta(eps - h) / (h * h * h * h) < 1e-80);

  const ProfileFn zeta2 = mollifier(0.2);
  CHECK(std::abs(zeta2(0.0) * 0.2 - 8.285688398691) < 1e-8);

  CHECK_THROWS_AS(mollifier(0.0), std::invalid_argument);
  CHECK_THROWS_AS(mollifier(-1.0), std::invalid_argument);
}

TEST_CASE("log pulse matches its frozen reference value and support") {
  InitialDataSpec spec = default_spec();
  spec.theta = 1.0;
  const ProfileFn f = log_pulse_profile(spec);

  CHECK(f.support_lo == doctest::Approx(0.11).epsilon(1e-15));
  CHECK(f.support_hi == doctest::Approx(0.19).epsilon(1e-15));
  REQUIRE(f.panel_points.size() == 2);
  CHECK(f.panel_points[0] == doctest::Approx(0.13).epsilon(1e-15));
  CHECK(f.panel_points[1] == doctest::Approx(0.17).epsilon(1e-15));

  // Frozen reference from an independent high-resolution trapezoid pass.
  CHECK(std::abs(f(0.15) - 1.211835516540684) < 1e-9);

  CHECK(f(0.0999) == 0.0);
  CHECK(f(0.10999) == 0.0);
  CHECK(f(0.11) == 0.0);
  CHECK(f(0.19) == 0.0);
  CHECK(f(0.1901) == 0.0);
  CHECK(f(0.2001) == 0.0);
  CHECK(f(0.1101) > 0.0);
  CHECK(f(0.12) > 0.0);
  CHECK(f(0.1899) > 0.0);

  InitialDataSpec quarter = spec;
  quarter.theta = 0.25;
  const ProfileFn g = log_pulse_profile(quarter);
  for (double z : {0.12, 0.15, 0.1737}) CHECK(g(z) == 0.25 * f(z));

  InitialDataSpec off = spec;
  off.theta = 0.0;
  const ProfileFn zero = log_pulse_profile(off);
  CHECK(zero(0.15) == 0.0);

  InitialDataSpec bad = spec;
  bad.alpha = 0.5;
  CHECK_THROWS_AS(log_pulse_profile(bad), std::invalid_argument);
  bad.alpha = 0.5;
  bad.mode = DimMode::Planar2D;
  CHECK_NOTHROW(log_pulse_profile(bad));
  bad.alpha = 1.0;
  CHECK_THROWS_AS(log_pulse_profile(bad), std::invalid_argument);
  InitialDataSpec bad2 = spec;
  bad2.epsilon = 0.02;
  CHECK_THROWS_AS(log_pulse_profile(bad2), std::invalid_argument);
}

TEST_CASE("log pulse second differences stay finite on the support") {
  InitialDataSpec spec = default_spec();
  spec.theta = 1.0;
  const ProfileFn f = log_pulse_profile(spec);
  const double h = 2.5e-4;
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double z = 0.1 + 0.1 * i / 400.0;
    const double d2 = (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
    CHECK(std::isfinite(d2));
    worst = std::max(worst, std::abs(d2));
  }
  CHECK(worst > 0.0);
  CHECK(worst < 1e6);
}

TEST_CASE("family construction pins the amplitude caps") {
  const MaterialParams mat = testsup::default_material();
  const InitialDataSpec spec = default_spec();
  const std::vector<double> grid = uniform_grid(0.095, 0.205, 4201);
  const InitialFamilies fam = build_initial_family(spec, mat, grid);

  CHECK(fam.n == 6);
  // Frozen references: peak value and location of the unit pulse, scaled by
  // the default theta.
  CHECK(std::abs(fam.W0 - spec.theta * 1.239765338036501) < 1e-6);
  CHECK(std::abs(fam.z0 - 0.129007336278) < 5e-5);

  const double e = spec.epsilon;
  const double shrink = std::pow(1.0 - e, 4) / std::pow(1.0 + e, 3);
  const double cap34 = std::min(shrink * 0.75, 1.0);
  const double cap6 = 0.5 * shrink;
  CHECK(fam.amplitude[1] == 0.3 * fam.W0);
  CHECK(fam.amplitude[4] == 0.3 * fam.W0);
  CHECK(fam.amplitude[2] == doctest::Approx(0.9 * cap34 * fam.W0).epsilon(1e-12));
  CHECK(fam.amplitude[3] == fam.amplitude[2]);
  CHECK(fam.amplitude[5] == doctest::Approx(0.9 * cap6 * fam.W0).epsilon(1e-12));

  std::array<double, 6> cap{1.0, 1.0, cap34, cap34, 1.0, cap6};
  double global = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    double sup = 0.0;
    for (double v : fam.samples[i]) sup = std::max(sup, std::abs(v));
    CHECK(sup <= cap[i] * fam.W0 * (1.0 + 1e-12));
    global = std::max(global, sup);
  }
  CHECK(global == fam.W0);

  double sup6 = 0.0;
  for (double v : fam.samples[5]) sup6 = std::max(sup6, std::abs(v));
  CHECK(sup6 / fam.W0 <= cap6);
  CHECK(sup6 / fam.W0 == doctest::Approx(0.45 * shrink).epsilon(1e-6));

  // Everything vanishes on grid points outside [eta, 2*eta].
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (grid[j] < 0.1 || grid[j] > 0.2) CHECK(fam.samples[i][j] == 0.0);

  InitialDataSpec off = spec;
  off.theta = 0.0;
  CHECK_THROWS_AS(build_initial_family(off, mat, grid), std::invalid_argument);

  CHECK_THROWS_AS(build_initial_family(spec, mat, uniform_grid(0.3, 0.4, 64)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_initial_family(spec, mat, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(build_initial_family(spec, mat, {0.1, 0.1, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(build_initial_family(spec, testsup::default_material(DimMode::Planar2D), grid),
                  std::invalid_argument);

  MaterialParams flipped = mat;
  flipped.sigma0 = 1.0;
  CHECK_THROWS_AS(build_initial_family(spec, flipped, grid), std::invalid_argument);
}

TEST_CASE("family construction in the four-speed mode") {
  const MaterialParams mat = testsup::default_material(DimMode::Planar2D);
  const InitialDataSpec spec = default_spec(DimMode::Planar2D);
  const std::vector<double> grid = uniform_grid(0.095, 0.205, 2049);
  const InitialFamilies fam = build_initial_family(spec, mat, grid);

  CHECK(fam.n == 4);
  const double shrink = std::pow(0.99, 4) / std::pow(1.01, 3);
  const double want = 0.9 * 0.5 * shrink * fam.W0;
  CHECK(fam.amplitude[1] == doctest::Approx(want).epsilon(1e-12));
  CHECK(fam.amplitude[2] == fam.amplitude[1]);
  CHECK(fam.amplitude[3] == fam.amplitude[1]);
  CHECK(fam.W0 > 0.0);
}

TEST_CASE("reconstruction reproduces the data it integrates") {
  const MaterialParams mat = testsup::default_material();
  const InitialDataSpec spec = default_spec();
  const std::vector<double> grid = uniform_grid(0.1, 0.2, 257);
  const InitialFamilies fam = build_initial_family(spec, mat, grid);
  const ReconstructedData rec = reconstruct_phi0(fam, mat);

  CHECK(rec.x.size() == 256 * 32 + 1);
  CHECK(rec.consistency_residual < 1e-8 * fam.W0);

  const Spectrum sp0 = spectrum(SystemState{{}, DimMode::Planar3D}, mat);
  double maxr = 0.0;
  for (std::size_t k = 0; k < 6; ++k) maxr = std::max(maxr, norm2(sp0.right[k], 6));
  CHECK(rec.sup_phi <= 10.0 * spec.eta * fam.W0 * maxr);
  CHECK(rec.sup_phi < 2.0 * mat.delta);
  CHECK(rec.sup_phi > 0.0);

  CHECK(norm2(rec.phi.front(), 6) <= 2e-8);
  CHECK(std::isfinite(rec.tail));
  CHECK(rec.tail <= rec.sup_phi);
}

TEST_CASE("reconstruction of zero data stays at the origin") {
  const MaterialParams mat = testsup::default_material();
  InitialFamilies fam;
  fam.spec = default_spec();
  fam.n = 6;
  fam.grid = {0.1, 0.125, 0.15, 0.175, 0.2};
  const ReconstructedData rec = reconstruct_phi0(fam, mat);
  for (const Vec6& v : rec.phi)
    for (double c : v) CHECK(c == 0.0);
  CHECK(rec.consistency_residual == 0.0);
  CHECK(rec.sup_phi == 0.0);
}

TEST_CASE("reconstruction in the four-speed mode") {
  const MaterialParams mat = testsup::default_material(DimMode::Planar2D);
  const InitialDataSpec spec = default_spec(DimMode::Planar2D);
  const std::vector<double> grid = uniform_grid(0.1, 0.2, 257);
  const InitialFamilies fam = build_initial_family(spec, mat, grid);
  const ReconstructedData rec = reconstruct_phi0(fam, mat);
  CHECK(rec.consistency_residual < 1e-8 * fam.W0);
  CHECK(rec.sup_phi < 2.0 * mat.delta);
}

TEST_CASE("reconstruction rejects bad inputs") {
  const MaterialParams mat = testsup::default_material();
  const InitialDataSpec spec = default_spec();
  const InitialFamilies fam = build_initial_family(spec, mat, uniform_grid(0.1, 0.2, 65));

  CHECK_THROWS_AS(reconstruct_phi0(fam, mat, 0), std::invalid_argument);
  CHECK_THROWS_AS(reconstruct_phi0(fam, testsup::default_material(DimMode::Planar2D)),
                  std::invalid_argument);

  InitialFamilies shifted = fam;
  shifted.grid = uniform_grid(0.12, 0.2, 65);
  CHECK_THROWS_AS(reconstruct_phi0(shifted, mat), std::invalid_argument);
  shifted.grid = uniform_grid(0.1, 0.19, 65);
  CHECK_THROWS_AS(reconstruct_phi0(shifted, mat), std::invalid_argument);
}

TEST_CASE("h1 estimate scales exactly and holds its ratio across eta") {
  InitialDataSpec spec = default_spec();

  InitialDataSpec off = spec;
  off.theta = 0.0;
  const SobolevEstimate zero = sobolev_h1_estimate(off);
  CHECK(zero.value == 0.0);
  CHECK(zero.ratio == 0.0);
  CHECK(zero.bound == 0.0);

  InitialDataSpec lo = spec, hi = spec;
  lo.theta = 0.02;
  hi.theta = 0.04;
  const SobolevEstimate e1 = sobolev_h1_estimate(lo);
  const SobolevEstimate e2 = sobolev_h1_estimate(hi);
  CHECK(e2.value * e2.value == doctest::Approx(4.0 * e1.value * e1.value).epsilon(1e-10));
  CHECK(e1.value > 0.0);

  InitialDataSpec mid = spec;
  mid.theta = 0.03;
  const SobolevEstimate em = sobolev_h1_estimate(mid);
  CHECK(e1.value < em.value);
  CHECK(em.value < e2.value);

  std::vector<double> ratios;
  for (double eta : {0.1, 0.01, 0.001}) {
    InitialDataSpec s = spec;
    s.eta = eta;
    const SobolevEstimate est = sobolev_h1_estimate(s);
    CHECK(est.value > 0.0);
    ratios.push_back(est.ratio);
  }
  const double rmin = *std::min_element(ratios.begin(), ratios.end());
  const double rmax = *std::max_element(ratios.begin(), ratios.end());
  CHECK(rmax / rmin < 3.0);

  InitialDataSpec planar2 = default_spec(DimMode::Planar2D);
  CHECK_THROWS_AS(sobolev_h1_estimate(planar2), std::invalid_argument);
}

TEST_CASE("hhalf estimate matches a brute-force double integral on a bump") {
  auto bump = [](double x) {
    if (!(std::abs(x) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
  };

  double supd = 0.0;
  for (int i = 1; i < 20000; ++i) {
    const double x0 = -1.0 + 2.0 * (i - 0.5) / 20000.0;
    const double x1 = -1.0 + 2.0 * (i + 0.5) / 20000.0;
    supd = std::max(supd, std::abs(bump(x1) - bump(x0)) / (x1 - x0));
  }
  const double cutoff = 1e-6;
  const GagliardoResult est = gagliardo_half_integral(bump, -1.0, 1.0, {}, cutoff, 1.2 * supd);
  CHECK(est.integral > 0.0);
  CHECK(est.cutoff_bound >= 0.0);
  CHECK(est.cutoff_bound < 1e-5);

  // Independent pass: uniform trapezoid in both variables plus the same
  // closed-form split tail.
  const int ny = 2500, nx = 2500;
  const double width = 2.0;
  double l2 = 0.0;
  for (int i = 0; i <= nx; ++i) {
    const double x = -1.0 + width * i / nx;
    const double v = bump(x);
    l2 += (i == 0 || i == nx ? 0.5 : 1.0) * v * v;
  }
  l2 *= width / nx;

  double inner = 0.0;
  for (int k = 0; k <= ny; ++k) {
    const double y = cutoff + (width - cutoff) * k / ny;
    const double xa = -1.0 - y;
    const double span = 1.0 - xa;
    double fx = 0.0;
    for (int i = 0; i <= nx; ++i) {
      const double x = xa + span * i / nx;
      const double d = bump(x + y) - bump(x);
      fx += (i == 0 || i == nx ? 0.5 : 1.0) * d * d;
    }
    fx *= span / nx;
    inner += (k == 0 || k == ny ? 0.5 : 1.0) * fx / (y * y);
  }
  inner *= (width - cutoff) / ny;
  const double brute = 2.0 * (inner + 2.0 * l2 / width);

  CHECK(std::abs(est.integral - brute) / brute < 0.02);

  CHECK_THROWS_AS(gagliardo_half_integral(bump, 1.0, -1.0, {}, 1e-6, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gagliardo_half_integral(bump, -1.0, 1.0, {}, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gagliardo_half_integral(bump, -1.0, 1.0, {}, 1e-6, -1.0),
                  std::invalid_argument);
}

TEST_CASE("hhalf estimate on the pulse holds across eta and theta") {
  InitialDataSpec spec = default_spec(DimMode::Planar2D);

  InitialDataSpec off = spec;
  off.theta = 0.0;
  const SobolevEstimate zero = sobolev_hhalf_estimate(off);
  CHECK(zero.value == 0.0);
  CHECK(zero.ratio == 0.0);

  InitialDataSpec lo = spec, hi = spec;
  lo.theta = 0.02;
  hi.theta = 0.04;
  const SobolevEstimate e1 = sobolev_hhalf_estimate(lo);
  const SobolevEstimate e2 = sobolev_hhalf_estimate(hi);
  CHECK(e1.value > 0.0);
  CHECK(e2.value * e2.value == doctest::Approx(4.0 * e1.value * e1.value).epsilon(1e-10));
  CHECK(e1.value < e2.value);
  CHECK(e1.error_bar >= 0.0);
  CHECK(e1.error_bar < 1e-3 * e1.value);

  std::vector<double> ratios;
  for (double eta : {0.1, 0.01}) {
    InitialDataSpec s = spec;
    s.eta = eta;
    const SobolevEstimate est = sobolev_hhalf_estimate(s);
    CHECK(est.value > 0.0);
    ratios.push_back(est.ratio);
  }
  CHECK(std::max(ratios[0], ratios[1]) / std::min(ratios[0], ratios[1]) < 3.0);

  CHECK_THROWS_AS(sobolev_hhalf_estimate(default_spec()), std::invalid_argument);
}

TEST_CASE("profile csv export writes the declared span") {
  const ProfileFn zeta = mollifier(0.1);
  const auto path =
      std::filesystem::temp_directory_path() / "elastoshock_test_profile.csv";
  write_profile_csv(zeta, path.string(), 11);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 12);
  CHECK(lines[0] == "z,value");
  const double z_first = std::stod(lines[1].substr(0, lines[1].find(',')));
  CHECK(z_first == zeta.support_lo);
  const double mid = std::stod(lines[6].substr(lines[6].find(',') + 1));
  CHECK(std::abs(mid - zeta(0.0)) < 1e-12);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(write_profile_csv(zeta, path.string(), 1), std::invalid_argument);
}
