#include "elastoshock/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace elastoshock {

namespace {

GaussRule build_rule(std::size_t n) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: need n >= 2");
  GaussRule r;
  r.node.resize(n);
  r.weight.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.node[i] = -x;
    r.node[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weight[i] = w;
    r.weight[n - 1 - i] = w;
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b) {
  const GaussRule& r = gauss_legendre(32);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < r.node.size(); ++i) s += r.weight[i] * f(mid + half * r.node[i]);
  return s * half;
}

namespace {

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double l = gl_integrate(f, a, mid);
  const double r = gl_integrate(f, mid, b);
  if (depth <= 0 || std::abs(l + r - whole) <= tol) return l + r;
  return adapt(f, a, mid, l, 0.5 * tol, depth - 1) + adapt(f, mid, b, r, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  return adapt(f, a, b, gl_integrate(f, a, b), abs_tol, max_depth);
}

}  // namespace elastoshock
