#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace elastoshock {

using Vec6 = std::array<double, 6>;
using Mat6 = std::array<Vec6, 6>;

inline double dot(const Vec6& x, const Vec6& y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vec6& x, std::size_t n) {
  return std::sqrt(dot(x, x, n));
}

inline double norm_inf(const Vec6& x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

inline Vec6 matvec(const Mat6& A, const Vec6& x, std::size_t n) {
  Vec6 y{};
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += A[i][j] * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace elastoshock
