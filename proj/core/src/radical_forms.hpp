#pragma once

// Internal (not installed): shared radical algebra for the spectrum and the
// coupling coefficients. g1 = lambda1^2 - b and g3 = lambda3^2 - b in
// cancellation-free form; the naive differences lose all digits near the
// degenerate slice where q -> 0.

#include <cmath>
#include <stdexcept>

#include "elastoshock/state.hpp"

namespace elastoshock::detail {

struct StableRadicals {
  double a, b, q, sqrtD, w, g1, g3, lam1, lam2, lam3, K, M, N, s2;
};

inline StableRadicals stable_radicals(const AuxScalars& x, double sigma1, double phi2,
                                      double phi3) {
  if (!(x.a > x.b && x.b > 0.0))
    throw std::runtime_error("spectrum: state left the hyperbolic regime (need a > b > 0)");
  StableRadicals r;
  r.a = x.a;
  r.b = x.b;
  r.q = x.c * x.c + x.d * x.d;
  r.sqrtD = std::sqrt(x.Delta);
  r.w = r.sqrtD + (x.a - x.b);
  r.g1 = 0.5 * ((x.a - x.b) + r.sqrtD);
  r.g3 = -2.0 * r.q / r.w;
  const double lam3sq = x.b + r.g3;
  if (!(lam3sq > 0.0))
    throw std::runtime_error("spectrum: slow family loses hyperbolicity (lambda3^2 <= 0)");
  r.lam1 = std::sqrt(x.b + r.g1);
  r.lam2 = std::sqrt(x.b);
  r.lam3 = std::sqrt(lam3sq);
  const double s1sq = sigma1 * sigma1;
  r.K = r.sqrtD * r.w / (4.0 * s1sq);
  r.N = r.q * r.sqrtD / (s1sq * r.w);
  r.s2 = phi2 * phi2 + phi3 * phi3;
  r.M = 2.0 * r.s2;
  return r;
}

}  // namespace elastoshock::detail
