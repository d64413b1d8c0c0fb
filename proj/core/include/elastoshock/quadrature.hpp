#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace elastoshock {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> node;
  std::vector<double> weight;
};

/// Computes the rule by Newton iteration on the Legendre recurrence.
/// Cached internally for repeated n.
const GaussRule& gauss_legendre(std::size_t n);

/// One 32-point panel over [a, b].
double gl_integrate(const std::function<double(double)>& f, double a, double b);

/// Adaptive panel subdivision: splits until the 32-point value of a panel
/// agrees with the sum over its halves to abs_tol (scaled per panel), then
/// accepts the refined value. Intended for integrands that are smooth except
/// at a few known kinks; pass those as explicit breakpoints instead when
/// available.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 28);

}  // namespace elastoshock
