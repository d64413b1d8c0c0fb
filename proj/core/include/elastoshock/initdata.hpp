#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "elastoshock/material.hpp"
#include "elastoshock/state.hpp"

namespace elastoshock {

/// Parameters of the mollified-log family-1 pulse and the companion bumps.
/// theta = 0 is a valid profile (identically zero) but is rejected when
/// building a data family, since the shock analysis needs W0 > 0.
struct InitialDataSpec {
  double eta = 0.1;
  double theta = 0.04033;
  double alpha = 0.3;
  DimMode mode = DimMode::Planar3D;
  double epsilon = 0.01;
  void validate() const;
};

/// A single-variable profile with its support and the interior points where an
/// outer quadrature should break panels (high-derivative mollification zones).
struct ProfileFn {
  std::function<double(double)> value;
  double support_lo = 0.0;
  double support_hi = 0.0;
  std::vector<double> panel_points;
  double operator()(double z) const { return value ? value(z) : 0.0; }
};

ProfileFn mollifier(double eta);
ProfileFn log_pulse_profile(const InitialDataSpec& spec);
ProfileFn scaled_bump(double eta, double amplitude);

struct InitialFamilies {
  InitialDataSpec spec;
  std::size_t n = 6;
  std::array<ProfileFn, 6> profile;
  std::array<double, 6> amplitude{};
  std::vector<double> grid;
  std::array<std::vector<double>, 6> samples;
  double W0 = 0.0;
  double z0 = 0.0;
};

InitialFamilies build_initial_family(const InitialDataSpec& spec, const MaterialParams& params,
                                     const std::vector<double>& grid);

struct ReconstructedData {
  std::vector<double> x;
  std::vector<Vec6> phi;
  double consistency_residual = 0.0;
  double sup_phi = 0.0;
  double tail = 0.0;
};

/// Integrates d(phi)/dx = sum_k w_k(x) r_k(phi) from the left end of the grid
/// (phi = 0 there) on a sub-lattice with substeps_per_cell RK4 steps per grid
/// cell, then re-extracts the amplitudes from the solved states by fourth-order
/// differencing and reports the worst mismatch against the data.
ReconstructedData reconstruct_phi0(const InitialFamilies& data, const MaterialParams& params,
                                   std::size_t substeps_per_cell = 32);

struct SobolevEstimate {
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  double error_bar = 0.0;
  std::string to_json() const;
};

SobolevEstimate sobolev_h1_estimate(const InitialDataSpec& spec);
SobolevEstimate sobolev_hhalf_estimate(const InitialDataSpec& spec);

/// Double integral of [f(x+y)-f(x)]^2 / y^2 over both signs of y with
/// |y| > inner_cutoff, plus a rigorous bound on the skipped |y| <= inner_cutoff
/// part (needs a sup bound on |f'|). f must vanish outside
/// [support_lo, support_hi]; panel_points are interior smoothness breakpoints.
struct GagliardoResult {
  double integral = 0.0;
  double cutoff_bound = 0.0;
};
GagliardoResult gagliardo_half_integral(const std::function<double(double)>& f, double support_lo,
                                        double support_hi, const std::vector<double>& panel_points,
                                        double inner_cutoff, double sup_df);

void write_profile_csv(const ProfileFn& profile, const std::string& path, std::size_t samples);

}  // namespace elastoshock
