#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "elastoshock/coupling.hpp"
#include "elastoshock/rng.hpp"
#include "elastoshock/spectrum.hpp"

using namespace elastoshock;

namespace {

void BM_family_coupling_3d(benchmark::State& state) {
  MaterialParams p;
  std::mt19937_64 rng(7);
  std::vector<SystemState> states(256);
  std::vector<Spectrum> specs(256);
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i].phi = ball_point(rng, 6, 2.0 * p.delta);
    specs[i] = spectrum(states[i], p);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const std::size_t k = i++ & 255;
    const FamilyCoupling fc = family_coupling(states[k], p, specs[k], i % 6);
    benchmark::DoNotOptimize(fc.c_row[0]);
  }
}
BENCHMARK(BM_family_coupling_3d);

void BM_coupling_table_3d(benchmark::State& state) {
  MaterialParams p;
  std::mt19937_64 rng(7);
  std::vector<SystemState> states(64);
  for (auto& s : states) s.phi = ball_point(rng, 6, 2.0 * p.delta);
  std::size_t i = 0;
  for (auto _ : state) {
    const CouplingTable t = coupling_table(states[i++ & 63], p, GradScheme::Analytic);
    benchmark::DoNotOptimize(t.c[0][0]);
  }
}
BENCHMARK(BM_coupling_table_3d);

}  // namespace
