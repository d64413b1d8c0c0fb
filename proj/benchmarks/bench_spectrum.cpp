#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "elastoshock/rng.hpp"
#include "elastoshock/spectrum.hpp"

using namespace elastoshock;

namespace {

std::vector<SystemState> sample_states(std::size_t count, DimMode mode) {
  MaterialParams p;
  p.dim_mode = mode;
  std::mt19937_64 rng(123);
  std::vector<SystemState> v(count);
  for (auto& s : v) {
    s.mode = mode;
    s.phi = ball_point(rng, state_dim(mode), 2.0 * p.delta);
  }
  return v;
}

void BM_spectrum_3d(benchmark::State& state) {
  MaterialParams p;
  const auto states = sample_states(1024, DimMode::Planar3D);
  std::size_t i = 0;
  for (auto _ : state) {
    const Spectrum sp = spectrum(states[i++ & 1023], p);
    benchmark::DoNotOptimize(sp.lambda[0]);
  }
}
BENCHMARK(BM_spectrum_3d);

void BM_grad_lambda_3d(benchmark::State& state) {
  MaterialParams p;
  const auto states = sample_states(1024, DimMode::Planar3D);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto g = grad_lambda(states[i++ & 1023], p);
    benchmark::DoNotOptimize(g[0][0]);
  }
}
BENCHMARK(BM_grad_lambda_3d);

}  // namespace
