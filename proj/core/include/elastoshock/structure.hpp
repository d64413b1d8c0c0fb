#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elastoshock/coupling.hpp"

namespace elastoshock {

/// One verified interaction-structure identity: the worst absolute residual
/// seen over the sample set against its acceptance tolerance.
struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Sampled verification of the cancellation and small-factor structure of the
/// interaction coefficients. The report is the test: every identity the
/// library relies on is listed, none omitted.
struct StructureReport {
  std::vector<IdentityResult> identities;
  std::size_t sample_count = 0;
  std::string gradient_scheme;
  double c11_origin = 0.0;
  double sign_margin = 0.0;        // min over samples of min(-c11, c_opp)
  double max_lambda_gap = 0.0;     // max |lambda2 - lambda3| (3D)
  bool all_pass = false;

  std::string to_json() const;  // pretty-printed, deterministic field order
};

/// Samples random states in the amplitude ball (excluding the degenerate
/// strip |(phi2,phi3)| < 1e-6 in Planar3D) and measures every identity.
/// Planar2D checks the reduced set (genuine nonlinearity of the outer pair
/// and its antisymmetry).
StructureReport structure_report(const MaterialParams& p, std::size_t sample_count,
                                 GradScheme scheme = GradScheme::FiniteDifference,
                                 std::uint64_t seed = 0);

}  // namespace elastoshock
