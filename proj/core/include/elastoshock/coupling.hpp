#pragma once

#include <array>
#include <cstdint>

#include "elastoshock/spectrum.hpp"

namespace elastoshock {

/// How eigenvector gradients are obtained. FiniteDifference is the default
/// analysis route (central differences, one Richardson level); Analytic is
/// the hand-differentiated closed form, used as a cross-check and as the
/// solver's per-node fast path.
enum class GradScheme { FiniteDifference, Analytic };

/// Jacobian d(r_k)/d(phi) as an n x n matrix, J[row][col] = d r_k[row] / d phi_col.
///
/// FiniteDifference: step h = 1e-6 * max(1, |phi|), one Richardson level.
/// Requires |phi| + 2h inside the amplitude ball, and for the rotational
/// families (k = 1, 4 in Planar3D) a transverse distance |(phi2,phi3)| > 1e-8
/// so no sample lands in the regularized-frame zone. Throws
/// std::invalid_argument when either margin is violated.
Mat6 grad_eigenvector(const SystemState& s, const MaterialParams& p, std::size_t k,
                      GradScheme scheme = GradScheme::FiniteDifference);

/// Interaction coefficients at one state.
///   c[i][m]        = grad(lambda_i) . r_m
///   gamma[i][k][m] = -(lambda_k - lambda_m) l_i . (grad(r_k) r_m)    (k != i)
///   gamma[i][i][m] = -(lambda_i - lambda_m) l_i . (grad(r_i) r_m - grad(r_m) r_i)
/// Entries with k == m (and the unused [i][i][i]) are zero.
struct CouplingTable {
  Mat6 c{};
  std::array<Mat6, 6> gamma{};  // gamma[i] is the slab for equation family i
  Vec6 at_state{};
  std::size_t n = 6;
  GradScheme scheme = GradScheme::FiniteDifference;
};

CouplingTable coupling_table(const SystemState& s, const MaterialParams& p,
                             GradScheme scheme = GradScheme::FiniteDifference);

/// The single-family slab the characteristic ODEs consume, via the analytic
/// directional derivatives (no Jacobian matrices are formed). `spec` must be
/// the spectrum of `s` under `p`.
struct FamilyCoupling {
  Vec6 c_row{};   // c[i][m]
  Mat6 gamma{};   // gamma[i][k][m] for the fixed i
};

FamilyCoupling family_coupling(const SystemState& s, const MaterialParams& p,
                               const Spectrum& spec, std::size_t i);

/// Rejects materials whose leading-family nonlinearity has the wrong sign
/// anywhere on the sampled amplitude ball. The library's shock predictions
/// assume compression steepens the fast family: c11 < 0 < the opposite
/// family's coefficient. Throws std::invalid_argument naming that assumption.
void validate_sign_convention(const MaterialParams& p, std::size_t samples = 256,
                              std::uint64_t seed = 0);

}  // namespace elastoshock
