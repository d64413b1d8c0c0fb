#pragma once

#include <array>
#include <optional>

#include "elastoshock/state.hpp"

namespace elastoshock {

/// Direction in the (phi2, phi3) transverse plane, used to pick eigenvector
/// frames for the degenerate families on the phi2 = phi3 = 0 slice.
using TransverseDir = std::array<double, 2>;

/// Full characteristic data of A(phi) from closed radical forms.
///
/// Families are 0-based throughout the library. Planar3D has six, ordered
///   lambda[0] >= ... >= lambda[5]:
///   lambda0 = sqrt((a+b)/2 + sqrt(Delta)/2),  lambda1 = sqrt(b),
///   lambda2 = sqrt((a+b)/2 - sqrt(Delta)/2),  lambda3..5 = -lambda2..0,
/// with lambda1 = lambda2 exactly on the transverse-zero slice. Planar2D has
/// four, all distinct: the 3D families {0,2,3,5} with slots {2,5} dropped
/// (there is no transverse sqrt(b) pair). `two_d_from_three_d` records that
/// mapping.
struct Spectrum {
  std::array<double, 6> lambda{};
  std::array<Vec6, 6> right{};
  std::array<Vec6, 6> left{};
  double K = 0.0;  // normalizer of families 0, 5
  double M = 0.0;  // normalizer of families 1, 4 (3D only)
  double N = 0.0;  // normalizer of families 2, 3
  std::size_t n = 6;
  /// Set when the degenerate-slice frames were used; the transverse direction
  /// that seeded them.
  std::optional<TransverseDir> direction_used;

  static constexpr std::array<int, 4> two_d_from_three_d{0, 2, 3, 5};
};

/// Evaluates eigenvalues and biorthonormal left/right eigenvector frames.
///
/// Within |(phi2, phi3)| < 1e-12 of the degenerate slice the transverse
/// families lose their natural frames; they are rebuilt from `prev_direction`
/// if given (callers tracking a trajectory should pass the last off-slice
/// direction), else from (0, 1) in Planar3D and the phi2 axis in Planar2D.
///
/// Guarantees, on the material's certified ball:
///   left[i] . right[j] = delta_ij   to 1e-10,
///   A right[i] = lambda[i] right[i] to 1e-9 relative.
Spectrum spectrum(const SystemState& s, const MaterialParams& p,
                  const std::optional<TransverseDir>& prev_direction = std::nullopt);

/// Gradients d(lambda_i)/d(phi) as n vectors, closed forms. Only the first
/// three (Planar3D) resp. two (Planar2D) components are nonzero.
std::array<Vec6, 6> grad_lambda(const SystemState& s, const MaterialParams& p);

}  // namespace elastoshock
