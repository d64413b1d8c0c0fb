#pragma once

#include <cstddef>

namespace elastoshock {

/// Planar symmetry reduction of the elastic wave system: fields depend on one
/// spatial coordinate, displacements keep three (Planar3D) or two (Planar2D)
/// components. State dimension is 6 resp. 4.
enum class DimMode { Planar3D, Planar2D };

inline constexpr std::size_t state_dim(DimMode m) {
  return m == DimMode::Planar3D ? 6u : 4u;
}

/// Taylor coefficients of the stored-energy function at the reference
/// configuration, through cubic order in the strain invariants.
struct StoredEnergyCoeffs {
  double gamma11 = 0.0;
  double gamma2 = 0.0;
  double gamma111 = 0.0;
  double gamma12 = 0.0;
  double gamma3 = 0.0;

  /// Requires gamma2 < 0 and 2*gamma11 + gamma2 > 0 (real, distinct sound
  /// speeds). Throws std::invalid_argument otherwise.
  void validate() const;
};

/// Wave-speed and nonlinearity parameters of the first-order system.
/// Only c1, c2, sigma0, sigma1 enter the planar coefficient matrix; sigma2..4
/// are carried so a material built from StoredEnergyCoeffs round-trips.
struct MaterialParams {
  double c1 = 2.0;
  double c2 = 1.0;
  double sigma0 = -1.0;
  double sigma1 = 1.0;
  double sigma2 = 0.0;
  double sigma3 = 0.0;
  double sigma4 = 0.0;
  DimMode dim_mode = DimMode::Planar3D;
  double delta = 1e-2;

  std::size_t n() const { return state_dim(dim_mode); }

  /// Checks c1 > c2 > 0, sigma0*sigma1 != 0, delta > 0, then certifies by
  /// deterministic sampling that the eigenvalue ordering holds on the whole
  /// amplitude ball |phi| <= 2*delta. Throws std::invalid_argument on failure.
  void validate() const;
};

/// Converts stored-energy coefficients to wave-speed form:
///   c1 = 2*sqrt(gamma11), c2 = sqrt(-2*gamma2),
///   sigma0 = 2*(2*gamma111 + 3*gamma11), sigma1 = 2*(gamma11 - gamma12),
///   sigma2 = 2*(gamma2 - gamma3),        sigma3 = 2*gamma3,
///   sigma4 = 4*(gamma11 - 2*gamma12).
/// Validates both ends; rejects sigma0*sigma1 == 0 (degenerate nonlinearity).
MaterialParams sigma_from_gamma(const StoredEnergyCoeffs& g,
                                DimMode mode = DimMode::Planar3D,
                                double delta = 1e-2);

}  // namespace elastoshock
