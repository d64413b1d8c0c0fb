#include "elastoshock/coupling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "elastoshock/rng.hpp"
#include "radical_forms.hpp"

namespace elastoshock {

namespace {

bool is_rotational(std::size_t k, DimMode mode) {
  return mode == DimMode::Planar3D && (k == 1 || k == 4);
}

// g_k = lambda_k^2 - b in stable form (g1 for the outer pair, g3 for the
// inner; rotational families never use it).
double g_of(std::size_t k, DimMode mode, const detail::StableRadicals& rd) {
  if (mode == DimMode::Planar3D) return (k == 0 || k == 5) ? rd.g1 : rd.g3;
  return (k == 0 || k == 3) ? rd.g1 : rd.g3;
}

// Directional derivative (grad r_k) . rm from the closed row forms. u must be
// grad(lambda_k) . rm. Each row of grad r_k is a combination of
// grad(lambda_k) and a coordinate direction, so no matrix is formed.
Vec6 dir_deriv(std::size_t k, const Vec6& rm, double u, double lam, double g, double sigma1,
               double phi2, double phi3, DimMode mode) {
  if (mode == DimMode::Planar2D) {
    return {(lam * u - sigma1 * rm[0]) / sigma1,
            rm[1],
            -0.5 * (g + 2.0 * lam * lam) * u / sigma1 + lam * rm[0],
            -(phi2 * u + lam * rm[1]),
            0.0,
            0.0};
  }
  if (is_rotational(k, mode)) {
    return {0.0,
            rm[2],
            -rm[1],
            0.0,
            -(phi3 * u + lam * rm[2]),
            phi2 * u + lam * rm[1]};
  }
  return {(lam * u - sigma1 * rm[0]) / sigma1,
          rm[1],
          rm[2],
          -0.5 * (g + 2.0 * lam * lam) * u / sigma1 + lam * rm[0],
          -(phi2 * u + lam * rm[1]),
          -(phi3 * u + lam * rm[2])};
}

struct DirTables {
  Mat6 c{};                          // c[k][m] = grad(lambda_k) . r_m
  std::array<std::array<Vec6, 6>, 6> D{};  // D[k][m] = (grad r_k) r_m
};

DirTables analytic_dirs(const SystemState& s, const MaterialParams& p, const Spectrum& sp) {
  const AuxScalars x = aux_scalars(s, p);
  const double phi2 = s.phi[1];
  const double phi3 = (s.mode == DimMode::Planar3D) ? s.phi[2] : 0.0;
  const detail::StableRadicals rd = detail::stable_radicals(x, p.sigma1, phi2, phi3);
  const auto gl = grad_lambda(s, p);
  const std::size_t n = sp.n;
  DirTables t;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m) t.c[k][m] = dot(gl[k], sp.right[m], n);
  for (std::size_t k = 0; k < n; ++k) {
    const double g = g_of(k, s.mode, rd);
    for (std::size_t m = 0; m < n; ++m)
      t.D[k][m] = dir_deriv(k, sp.right[m], t.c[k][m], sp.lambda[k], g, p.sigma1, phi2, phi3,
                            s.mode);
  }
  return t;
}

Mat6 fd_jacobian(const SystemState& s, const MaterialParams& p, std::size_t k) {
  const std::size_t n = s.n();
  const double h = 1e-6 * std::max(1.0, norm2(s.phi, n));
  if (norm2(s.phi, n) + 2.0 * h > 2.0 * p.delta)
    throw std::invalid_argument(
        "grad_eigenvector: finite-difference stencil would leave the amplitude ball; "
        "evaluate further inside |phi| <= 2*delta");
  if (is_rotational(k, s.mode)) {
    const double trans = std::hypot(s.phi[1], s.phi[2]);
    if (trans <= 1e-8)
      throw std::invalid_argument(
          "grad_eigenvector: rotational family frames are conventional within "
          "|(phi2,phi3)| <= 1e-8; use the regularized products instead");
  }
  auto column = [&](std::size_t col, double hh) {
    SystemState up = s, dn = s;
    up.phi[col] += hh;
    dn.phi[col] -= hh;
    const Vec6 ru = spectrum(up, p).right[k];
    const Vec6 rv = spectrum(dn, p).right[k];
    Vec6 d{};
    for (std::size_t r = 0; r < n; ++r) d[r] = (ru[r] - rv[r]) / (2.0 * hh);
    return d;
  };
  Mat6 J{};
  for (std::size_t col = 0; col < n; ++col) {
    const Vec6 d1 = column(col, h);
    const Vec6 d2 = column(col, 0.5 * h);
    for (std::size_t r = 0; r < n; ++r) J[r][col] = (4.0 * d2[r] - d1[r]) / 3.0;
  }
  return J;
}

Mat6 analytic_jacobian(const SystemState& s, const MaterialParams& p, std::size_t k) {
  const AuxScalars x = aux_scalars(s, p);
  const double phi2 = s.phi[1];
  const double phi3 = (s.mode == DimMode::Planar3D) ? s.phi[2] : 0.0;
  const detail::StableRadicals rd = detail::stable_radicals(x, p.sigma1, phi2, phi3);
  const auto gl = grad_lambda(s, p);
  const Spectrum sp = spectrum(s, p);
  const std::size_t n = sp.n;
  const double lam = sp.lambda[k];
  const double g = g_of(k, s.mode, rd);
  Mat6 J{};
  // Apply the row forms to coordinate directions: column c of the Jacobian is
  // the directional derivative along e_c, whose "rm" is the unit vector.
  for (std::size_t c = 0; c < n; ++c) {
    Vec6 e{};
    e[c] = 1.0;
    const Vec6 col = dir_deriv(k, e, gl[k][c], lam, g, p.sigma1, phi2, phi3, s.mode);
    for (std::size_t r = 0; r < n; ++r) J[r][c] = col[r];
  }
  return J;
}

// gamma[i][k][m] from the directional tables; first-line (k == i) entries are
// antisymmetrized, everything else is the plain product.
void assemble_gamma(const Spectrum& sp, const DirTables& t, std::size_t i, Mat6& slab) {
  const std::size_t n = sp.n;
  slab = Mat6{};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      if (k == m) continue;
      const double dl = sp.lambda[k] - sp.lambda[m];
      if (k == i) {
        if (m == i) continue;
        double v = 0.0;
        for (std::size_t c = 0; c < n; ++c)
          v += sp.left[i][c] * (t.D[i][m][c] - t.D[m][i][c]);
        slab[k][m] = -dl * v;
      } else {
        slab[k][m] = -dl * dot(sp.left[i], t.D[k][m], n);
      }
    }
  }
}

}  // namespace

Mat6 grad_eigenvector(const SystemState& s, const MaterialParams& p, std::size_t k,
                      GradScheme scheme) {
  if (k >= s.n()) throw std::invalid_argument("grad_eigenvector: family index out of range");
  return scheme == GradScheme::FiniteDifference ? fd_jacobian(s, p, k)
                                                : analytic_jacobian(s, p, k);
}

CouplingTable coupling_table(const SystemState& s, const MaterialParams& p, GradScheme scheme) {
  const Spectrum sp = spectrum(s, p);
  const std::size_t n = sp.n;
  DirTables t;
  if (scheme == GradScheme::Analytic) {
    t = analytic_dirs(s, p, sp);
  } else {
    const auto gl = grad_lambda(s, p);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t m = 0; m < n; ++m) t.c[k][m] = dot(gl[k], sp.right[m], n);
    // Rotational frames are conventional near the coincidence direction, where
    // differencing them is meaningless; switch those rows to the closed-form
    // products there.
    const bool strip = (s.mode == DimMode::Planar3D) &&
                       std::hypot(s.phi[1], s.phi[2]) <= 1e-8;
    for (std::size_t k = 0; k < n; ++k) {
      if (strip && is_rotational(k, s.mode)) {
        for (std::size_t m = 0; m < n; ++m)
          t.D[k][m] = dir_deriv(k, sp.right[m], t.c[k][m], sp.lambda[k], 0.0, p.sigma1,
                                s.phi[1], s.phi[2], s.mode);
      } else {
        const Mat6 J = fd_jacobian(s, p, k);
        for (std::size_t m = 0; m < n; ++m) t.D[k][m] = matvec(J, sp.right[m], n);
      }
    }
  }
  CouplingTable out;
  out.c = t.c;
  out.at_state = s.phi;
  out.n = n;
  out.scheme = scheme;
  for (std::size_t i = 0; i < n; ++i) assemble_gamma(sp, t, i, out.gamma[i]);
  return out;
}

FamilyCoupling family_coupling(const SystemState& s, const MaterialParams& p,
                               const Spectrum& sp, std::size_t i) {
  if (i >= sp.n) throw std::invalid_argument("family_coupling: family index out of range");
  const DirTables t = analytic_dirs(s, p, sp);
  FamilyCoupling fc;
  fc.c_row = t.c[i];
  assemble_gamma(sp, t, i, fc.gamma);
  return fc;
}

void validate_sign_convention(const MaterialParams& p, std::size_t samples,
                              std::uint64_t seed) {
  const std::size_t n = p.n();
  const std::size_t opp = n - 1;
  std::mt19937_64 rng(seed ^ 0x93c467e37db0c7a4ULL);
  auto check = [&](const Vec6& phi) {
    SystemState s{phi, p.dim_mode};
    const Spectrum sp = spectrum(s, p);
    const auto gl = grad_lambda(s, p);
    const double c11 = dot(gl[0], sp.right[0], n);
    const double copp = dot(gl[opp], sp.right[opp], n);
    if (!(c11 < 0.0 && copp > 0.0))
      throw std::invalid_argument(
          "material violates the compressive-steepening sign convention "
          "c11(phi) < 0 on the amplitude ball (leading-family genuine "
          "nonlinearity); found c11 = " +
          std::to_string(c11) + " at phi1 = " + std::to_string(phi[0]));
  };
  check(Vec6{});
  for (const double sgn : {1.0, -1.0}) {
    Vec6 axis{};
    axis[0] = sgn * 2.0 * p.delta;
    check(axis);
  }
  for (std::size_t t = 0; t < samples; ++t) check(ball_point(rng, n, 2.0 * p.delta));
}

}  // namespace elastoshock
