#include "elastoshock/material.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "elastoshock/state.hpp"

namespace elastoshock {

void StoredEnergyCoeffs::validate() const {
  if (!(gamma2 < 0.0))
    throw std::invalid_argument("StoredEnergyCoeffs: gamma2 must be negative, got " +
                                std::to_string(gamma2));
  if (!(2.0 * gamma11 + gamma2 > 0.0))
    throw std::invalid_argument(
        "StoredEnergyCoeffs: 2*gamma11 + gamma2 must be positive, got " +
        std::to_string(2.0 * gamma11 + gamma2));
}

MaterialParams sigma_from_gamma(const StoredEnergyCoeffs& g, DimMode mode, double delta) {
  g.validate();
  MaterialParams p;
  p.c1 = 2.0 * std::sqrt(g.gamma11);
  p.c2 = std::sqrt(-2.0 * g.gamma2);
  p.sigma0 = 2.0 * (2.0 * g.gamma111 + 3.0 * g.gamma11);
  p.sigma1 = 2.0 * (g.gamma11 - g.gamma12);
  p.sigma2 = 2.0 * (g.gamma2 - g.gamma3);
  p.sigma3 = 2.0 * g.gamma3;
  p.sigma4 = 4.0 * (g.gamma11 - 2.0 * g.gamma12);
  p.dim_mode = mode;
  p.delta = delta;
  p.validate();
  return p;
}

AuxScalars aux_scalars(const SystemState& s, const MaterialParams& p) {
  const double phi1 = s.phi[0];
  const double phi2 = s.phi[1];
  // In Planar2D the state is (dx u1, dx u2, dt u1, dt u2); there is no third
  // transverse gradient, so d = 0 identically.
  const double phi3 = (s.mode == DimMode::Planar3D) ? s.phi[2] : 0.0;
  AuxScalars x;
  x.a = p.c1 * p.c1 + 2.0 * p.sigma0 * phi1;
  x.b = p.c2 * p.c2 + 2.0 * p.sigma1 * phi1;
  x.c = 2.0 * p.sigma1 * phi2;
  x.d = 2.0 * p.sigma1 * phi3;
  x.Delta = (x.a - x.b) * (x.a - x.b) + 4.0 * (x.c * x.c + x.d * x.d);
  return x;
}

Mat6 coefficient_matrix(const SystemState& s, const MaterialParams& p) {
  const AuxScalars x = aux_scalars(s, p);
  Mat6 A{};
  if (s.mode == DimMode::Planar3D) {
    A[0][3] = -1.0;
    A[1][4] = -1.0;
    A[2][5] = -1.0;
    A[3][0] = -x.a;
    A[3][1] = -x.c;
    A[3][2] = -x.d;
    A[4][0] = -x.c;
    A[4][1] = -x.b;
    A[5][0] = -x.d;
    A[5][2] = -x.b;
  } else {
    A[0][2] = -1.0;
    A[1][3] = -1.0;
    A[2][0] = -x.a;
    A[2][1] = -x.c;
    A[3][0] = -x.c;
    A[3][1] = -x.b;
  }
  return A;
}

double char_poly(double lambda, const AuxScalars& x, DimMode mode) {
  const double l2 = lambda * lambda;
  const double quartic = (l2 - x.a) * (l2 - x.b) - (x.c * x.c + x.d * x.d);
  return mode == DimMode::Planar3D ? (l2 - x.b) * quartic : quartic;
}

}  // namespace elastoshock
