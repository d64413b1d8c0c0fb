#pragma once

#include <cstdint>
#include <random>

#include "elastoshock/vecmath.hpp"

namespace elastoshock {

/// Uniform double in [0, 1) from the top 53 bits of the generator output.
/// Used instead of std::uniform_real_distribution so streams are identical
/// across standard library implementations.
inline double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform in [lo, hi).
inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * u01(g);
}

/// Uniform point in the n-dimensional ball of the given radius (rejection
/// from the enclosing cube; deterministic for a fixed generator state).
inline Vec6 ball_point(std::mt19937_64& g, std::size_t n, double radius) {
  for (;;) {
    Vec6 x{};
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 2.0 * u01(g) - 1.0;
      r2 += x[i] * x[i];
    }
    if (r2 > 1.0) continue;
    for (std::size_t i = 0; i < n; ++i) x[i] *= radius;
    return x;
  }
}

}  // namespace elastoshock
