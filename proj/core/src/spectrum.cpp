#include "elastoshock/spectrum.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "radical_forms.hpp"

namespace elastoshock {

namespace {

constexpr double kSliceTol = 1e-12;

using detail::StableRadicals;

// Families with a longitudinal component (paper families 1, 3, 4, 6):
// r = (g/(2 sigma1), phi2, phi3, -lam g/(2 sigma1), -lam phi2, -lam phi3),
// l = r-like with components 4..6 divided by lam^2, all scaled by 1/Knorm.
void longitudinal_frames(double lam, double g, double Knorm, double phi2, double phi3,
                         double sigma1, Vec6& r, Vec6& l) {
  const double h = g / (2.0 * sigma1);
  r = {h, phi2, phi3, -lam * h, -lam * phi2, -lam * phi3};
  const double ik = 1.0 / Knorm;
  l = {ik * h, ik * phi2, ik * phi3, -ik * h / lam, -ik * phi2 / lam, -ik * phi3 / lam};
}

// Pure transverse rotational pair (paper families 2, 5).
void rotational_frames(double lam, double phi2, double phi3, double Mnorm, Vec6& r, Vec6& l) {
  r = {0.0, phi3, -phi2, 0.0, -lam * phi3, lam * phi2};
  const double im = 1.0 / Mnorm;
  l = {0.0, im * phi3, -im * phi2, 0.0, -im * phi3 / lam, im * phi2 / lam};
}

// Limit frames on the degenerate slice, where the raw formulas above return
// the zero vector (rights) or divide by a vanishing normalizer (lefts).
// These are the exact rescaled limits along the transverse direction e and
// stay biorthonormal with each other and with the longitudinal pair.
void slice_rotational_frames(double lam, double e2, double e3, Vec6& r, Vec6& l) {
  r = {0.0, e3, -e2, 0.0, -lam * e3, lam * e2};
  l = {0.0, 0.5 * e3, -0.5 * e2, 0.0, -0.5 * e3 / lam, 0.5 * e2 / lam};
}

void slice_parallel_frames(double lam, double e2, double e3, Vec6& r, Vec6& l) {
  r = {0.0, e2, e3, 0.0, -lam * e2, -lam * e3};
  l = {0.0, 0.5 * e2, 0.5 * e3, 0.0, -0.5 * e2 / lam, -0.5 * e3 / lam};
}

TransverseDir slice_direction(const std::optional<TransverseDir>& prev, DimMode mode) {
  if (mode == DimMode::Planar2D) {
    // The 2D subspace has no phi3 slot; only the sign along phi2 is free.
    if (prev && (*prev)[0] != 0.0) return {(*prev)[0] > 0.0 ? 1.0 : -1.0, 0.0};
    return {1.0, 0.0};
  }
  if (prev) {
    const double nrm = std::hypot((*prev)[0], (*prev)[1]);
    if (nrm > 0.0) return {(*prev)[0] / nrm, (*prev)[1] / nrm};
  }
  return {0.0, 1.0};
}

// Compacts an embedded 6-vector to the Planar2D layout (drops the third
// displacement's slots 2 and 5).
Vec6 compact2d(const Vec6& v) { return {v[0], v[1], v[3], v[4], 0.0, 0.0}; }

void check_amplitude(const SystemState& s, const MaterialParams& p, const char* who) {
  if (s.mode != p.dim_mode)
    throw std::invalid_argument(std::string(who) + ": state and material dim_mode differ");
  const double r = norm2(s.phi, s.n());
  if (!(r <= 2.0 * p.delta * (1.0 + 1e-9)))
    throw std::invalid_argument(std::string(who) + ": |phi| = " + std::to_string(r) +
                                " outside the amplitude ball 2*delta = " +
                                std::to_string(2.0 * p.delta));
}

}  // namespace

Spectrum spectrum(const SystemState& s, const MaterialParams& p,
                  const std::optional<TransverseDir>& prev_direction) {
  check_amplitude(s, p, "spectrum");
  const bool is3d = (s.mode == DimMode::Planar3D);
  const double phi2 = s.phi[1];
  const double phi3 = is3d ? s.phi[2] : 0.0;
  const AuxScalars x = aux_scalars(s, p);
  const StableRadicals rd = detail::stable_radicals(x, p.sigma1, phi2, phi3);

  // Embedded 6-family build; Planar2D compacts families {0,2,3,5} at the end.
  std::array<double, 6> lam = {rd.lam1, rd.lam2, rd.lam3, -rd.lam3, -rd.lam2, -rd.lam1};
  std::array<Vec6, 6> right{};
  std::array<Vec6, 6> left{};
  std::optional<TransverseDir> used;

  const bool on_slice = std::sqrt(rd.s2) < kSliceTol;
  longitudinal_frames(lam[0], rd.g1, rd.K, phi2, phi3, p.sigma1, right[0], left[0]);
  longitudinal_frames(lam[5], rd.g1, rd.K, phi2, phi3, p.sigma1, right[5], left[5]);
  if (!on_slice) {
    longitudinal_frames(lam[2], rd.g3, rd.N, phi2, phi3, p.sigma1, right[2], left[2]);
    longitudinal_frames(lam[3], rd.g3, rd.N, phi2, phi3, p.sigma1, right[3], left[3]);
    rotational_frames(lam[1], phi2, phi3, rd.M, right[1], left[1]);
    rotational_frames(lam[4], phi2, phi3, rd.M, right[4], left[4]);
  } else {
    const TransverseDir e = slice_direction(prev_direction, s.mode);
    used = e;
    slice_parallel_frames(lam[2], e[0], e[1], right[2], left[2]);
    slice_parallel_frames(lam[3], e[0], e[1], right[3], left[3]);
    slice_rotational_frames(lam[1], e[0], e[1], right[1], left[1]);
    slice_rotational_frames(lam[4], e[0], e[1], right[4], left[4]);
  }

  Spectrum out;
  out.K = rd.K;
  out.M = rd.M;
  out.N = rd.N;
  out.direction_used = used;
  if (is3d) {
    out.n = 6;
    out.lambda = lam;
    out.right = right;
    out.left = left;
  } else {
    out.n = 4;
    for (std::size_t j = 0; j < 4; ++j) {
      const int k = Spectrum::two_d_from_three_d[j];
      out.lambda[j] = lam[k];
      out.right[j] = compact2d(right[k]);
      out.left[j] = compact2d(left[k]);
    }
  }
  return out;
}

std::array<Vec6, 6> grad_lambda(const SystemState& s, const MaterialParams& p) {
  check_amplitude(s, p, "grad_lambda");
  const bool is3d = (s.mode == DimMode::Planar3D);
  const double phi2 = s.phi[1];
  const double phi3 = is3d ? s.phi[2] : 0.0;
  const AuxScalars x = aux_scalars(s, p);
  const StableRadicals rd = detail::stable_radicals(x, p.sigma1, phi2, phi3);

  const double ab = x.a - x.b;
  const double sp = p.sigma0 + p.sigma1;
  const double sm = p.sigma0 - p.sigma1;
  auto fast = [&](double lam) -> Vec6 {
    const double ga = (sp * rd.sqrtD + ab * sm) / (2.0 * lam * rd.sqrtD);
    const double gb = 4.0 * p.sigma1 * p.sigma1 / (lam * rd.sqrtD);
    return {ga, gb * phi2, gb * phi3, 0.0, 0.0, 0.0};
  };
  auto slow = [&](double lam) -> Vec6 {
    const double ga = (sp * rd.sqrtD - ab * sm) / (2.0 * lam * rd.sqrtD);
    const double gb = -4.0 * p.sigma1 * p.sigma1 / (lam * rd.sqrtD);
    return {ga, gb * phi2, gb * phi3, 0.0, 0.0, 0.0};
  };
  auto rot = [&](double lam) -> Vec6 { return {p.sigma1 / lam, 0.0, 0.0, 0.0, 0.0, 0.0}; };

  std::array<Vec6, 6> emb = {fast(rd.lam1),  rot(rd.lam2),  slow(rd.lam3),
                             slow(-rd.lam3), rot(-rd.lam2), fast(-rd.lam1)};
  if (is3d) return emb;
  std::array<Vec6, 6> out{};
  for (std::size_t j = 0; j < 4; ++j) out[j] = compact2d(emb[Spectrum::two_d_from_three_d[j]]);
  return out;
}

void MaterialParams::validate() const {
  if (!(c1 > c2 && c2 > 0.0))
    throw std::invalid_argument("MaterialParams: need c1 > c2 > 0, got c1 = " +
                                std::to_string(c1) + ", c2 = " + std::to_string(c2));
  if (sigma0 * sigma1 == 0.0)
    throw std::invalid_argument("MaterialParams: sigma0 and sigma1 must both be nonzero");
  if (!(delta > 0.0))
    throw std::invalid_argument("MaterialParams: delta must be positive");

  // Certify the eigenvalue ordering on |phi| <= 2*delta. The ordering reduces
  // to a > b > 0 and a*b > c^2 + d^2; a - b and b are affine in phi1 alone, so
  // the phi1 axis extremes are the worst cases for those. Random interior
  // points guard the transverse coupling term.
  const std::size_t nn = n();
  const double R = 2.0 * delta;
  auto check_point = [&](const Vec6& phi) {
    SystemState st{phi, dim_mode};
    const AuxScalars x = aux_scalars(st, *this);
    if (!(x.a > x.b))
      throw std::invalid_argument(
          "MaterialParams: fast/slow ordering a > b fails inside the amplitude ball "
          "(at phi1 = " + std::to_string(phi[0]) + "); shrink delta");
    if (!(x.b > 0.0))
      throw std::invalid_argument(
          "MaterialParams: b > 0 fails inside the amplitude ball (at phi1 = " +
          std::to_string(phi[0]) + "); shrink delta");
    if (!(x.a * x.b > x.c * x.c + x.d * x.d))
      throw std::invalid_argument(
          "MaterialParams: slow-family hyperbolicity a*b > c^2 + d^2 fails inside the "
          "amplitude ball; shrink delta");
  };

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (const double s0 : {1.0, -1.0}) {
    Vec6 axis{};
    axis[0] = s0 * R;
    check_point(axis);
    axis = Vec6{};
    axis[1] = s0 * R;
    check_point(axis);
    axis = Vec6{};
    axis[0] = s0 * R * inv_sqrt2;
    axis[1] = R * inv_sqrt2;
    check_point(axis);
  }

  std::mt19937_64 rng(0x8c7f0e2d3b5a1946ULL);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::size_t accepted = 0;
  while (accepted < 512) {
    Vec6 phi{};
    double r2 = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      phi[i] = 2.0 * u01() - 1.0;
      r2 += phi[i] * phi[i];
    }
    if (r2 > 1.0) continue;
    for (std::size_t i = 0; i < nn; ++i) phi[i] *= R;
    check_point(phi);
    ++accepted;
  }
}

}  // namespace elastoshock
