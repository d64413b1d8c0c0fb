#include <benchmark/benchmark.h>

#include <cmath>

#include "elastoshock/euler.hpp"
#include "elastoshock/spectrum.hpp"
#include "elastoshock/state.hpp"

using namespace elastoshock;

namespace {

EulerianField make_field(DimMode mode, FvScheme scheme, long long cells) {
  MaterialParams p;
  p.dim_mode = mode;
  const double dx = 2.5e-4;
  EulerianField f(p, dx, scheme);
  SystemState zero;
  zero.mode = mode;
  const Spectrum sp = spectrum(zero, p);
  f.init_single(0.0, dx * static_cast<double>(cells), [&](double x) {
    Vec6 v{};
    const double a = 4e-3 * std::exp(-std::pow((x - 0.1) / 0.02, 2));
    for (std::size_t q = 0; q < p.n(); ++q) v[q] = a * sp.right[0][q];
    return v;
  });
  return f;
}

void step_bench(benchmark::State& state, DimMode mode, FvScheme scheme) {
  const long long cells = state.range(0);
  EulerianField f = make_field(mode, scheme, cells);
  const double dt = 0.45 * f.dx() / f.max_speed();
  for (auto _ : state) {
    f.step(dt);
    benchmark::DoNotOptimize(f.window(0).cell[0][0]);
  }
  state.SetItemsProcessed(state.iterations() * cells);
}

void BM_muscl_step_3d(benchmark::State& state) {
  step_bench(state, DimMode::Planar3D, FvScheme::MusclHancock);
}
BENCHMARK(BM_muscl_step_3d)->Arg(2000);

void BM_muscl_step_2d(benchmark::State& state) {
  step_bench(state, DimMode::Planar2D, FvScheme::MusclHancock);
}
BENCHMARK(BM_muscl_step_2d)->Arg(2000);

void BM_lf_step_3d(benchmark::State& state) {
  step_bench(state, DimMode::Planar3D, FvScheme::LaxFriedrichs);
}
BENCHMARK(BM_lf_step_3d)->Arg(2000);

void BM_sample_gradient(benchmark::State& state) {
  EulerianField f = make_field(DimMode::Planar3D, FvScheme::MusclHancock, 2000);
  double x = 0.05;
  for (auto _ : state) {
    const Vec6 g = f.sample_gradient(x);
    benchmark::DoNotOptimize(g[0]);
    x += 1.7e-4;
    if (x > 0.4) x = 0.05;
  }
}
BENCHMARK(BM_sample_gradient);

}  // namespace
