#pragma once

#include "elastoshock/material.hpp"
#include "elastoshock/vecmath.hpp"

namespace elastoshock {

/// Pointwise state Phi of the first-order system.
///
/// Planar3D: phi = (dx u1, dx u2, dx u3, dt u1, dt u2, dt u3), n = 6.
/// Planar2D: phi = (dx u1, dx u2, dt u1, dt u2), n = 4; slots 4,5 unused.
///
/// Ops that take a SystemState require |phi| <= 2*delta of the material they
/// are paired with; violations throw rather than clip.
struct SystemState {
  Vec6 phi{};
  DimMode mode = DimMode::Planar3D;

  std::size_t n() const { return state_dim(mode); }
};

/// Scalar combinations the coefficient matrix and its spectrum depend on:
///   a = c1^2 + 2*sigma0*phi1,  b = c2^2 + 2*sigma1*phi1,
///   c = 2*sigma1*phi2,         d = 2*sigma1*phi3 (0 in Planar2D),
///   Delta = (a-b)^2 + 4*(c^2 + d^2).
/// On the certified amplitude ball a > b > 0 and Delta >= (a-b)^2 > 0.
struct AuxScalars {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double Delta = 0.0;
};

AuxScalars aux_scalars(const SystemState& s, const MaterialParams& p);

/// The quasilinear coefficient matrix A(phi) of dt Phi + A dx Phi = 0.
/// Planar3D (block form, I3 the 3x3 identity):
///   [ 0        -I3 ]        [ a  c  d ]
///   [ -S        0  ],  S =  [ c  b  0 ]
///                           [ d  0  b ]
/// Planar2D is the same with the third row/column of each block removed.
/// Entries outside the leading n x n block are zero.
Mat6 coefficient_matrix(const SystemState& s, const MaterialParams& p);

/// Characteristic polynomial det(lambda*I - A) in factored form,
///   Planar3D: (l^2 - b) * [(l^2 - a)(l^2 - b) - (c^2 + d^2)]
///   Planar2D:              (l^2 - a)(l^2 - b) - c^2
/// used by tests to confirm eigenvalues without a generic eigensolver.
double char_poly(double lambda, const AuxScalars& x, DimMode mode);

}  // namespace elastoshock
