#include <benchmark/benchmark.h>

#include <numbers>

#include "becsim/epr_witness.hpp"
#include "becsim/open_system.hpp"
#include "becsim/pure_dynamics.hpp"

using namespace becsim;

static void BM_EvolveZZ(benchmark::State& state) {
  const auto s = initial_xx_state(BosonNumber(int(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_zz(s, 0.3));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvolveZZ)->RangeMultiplier(2)->Range(25, 400)->Complexity();

static void BM_EvolveXZ(benchmark::State& state) {
  const int n = int(state.range(0));
  x_eigendecomposition(BosonNumber(n));  // warm the cache
  const auto s = initial_xx_state(BosonNumber(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_xz(s, 0.3));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvolveXZ)->RangeMultiplier(2)->Range(25, 400)->Complexity();

static void BM_EntanglementEntropy(benchmark::State& state) {
  const auto s = evolve_zz(initial_xx_state(BosonNumber(int(state.range(0)))), 0.11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entanglement_entropy(s));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EntanglementEntropy)->RangeMultiplier(2)->Range(25, 400)->Complexity();

static void BM_ScanEntropy(benchmark::State& state) {
  const auto grid = linspace(0.0, std::numbers::pi / 2.0, 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan_entropy(BosonNumber(50), grid, int(state.range(0))));
  }
}
BENCHMARK(BM_ScanEntropy)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

static void BM_DephasingZ(benchmark::State& state) {
  const int n = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_dephasing_z(BosonNumber(n), 0.3, 0.2));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DephasingZ)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Complexity();

static void BM_DephasingXStep(benchmark::State& state) {
  const int n = int(state.range(0));
  // Fixed small tau: timing per integration step dominates.
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_dephasing_x(BosonNumber(n), 1e-2, 0.1));
  }
}
BENCHMARK(BM_DephasingXStep)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

static void BM_Negativity(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto rho = evolve_dephasing_z(BosonNumber(n), 0.3, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(logarithmic_negativity(rho));
  }
}
BENCHMARK(BM_Negativity)->Arg(4)->Arg(8)->Arg(16);

static void BM_WitnessMoments(benchmark::State& state) {
  const auto s = evolve_zz(initial_xx_state(BosonNumber(int(state.range(0)))), 0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(collective_moments(s));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WitnessMoments)->RangeMultiplier(4)->Range(25, 400)->Complexity();

BENCHMARK_MAIN();
