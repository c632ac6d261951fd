#include <benchmark/benchmark.h>

#include <cmath>

#include "sigmadamp/functional.hpp"
#include "sigmadamp/solver.hpp"
#include "sigmadamp/spectral.hpp"

using namespace sigmadamp;

namespace {

Field bump(const GridSpec& g) {
  return sample_radial(g, [](double r) { return 0.5 * std::exp(-r * r / 4.0); });
}

GridSpec grid_for(const benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  return {n, static_cast<int>(state.range(1)), 20.0};
}

}  // namespace

static void BM_ForwardInverse(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const SpectralGrid sg(g);
  const Field f = bump(g);
  for (auto _ : state) benchmark::DoNotOptimize(sg.inverse(sg.forward(f)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_ForwardInverse)->Args({1, 4096})->Args({2, 256})->Args({3, 64});

static void BM_MultiplierCache(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const SpectralGrid sg(g);
  for (auto _ : state) {
    const MultiplierCache cache(sg, 1.0, 0.25);
    benchmark::DoNotOptimize(cache.duhamel(0.05));
  }
}
BENCHMARK(BM_MultiplierCache)->Args({1, 4096})->Args({2, 256});

static void BM_Propagators(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const SpectralGrid sg(g);
  const MultiplierCache cache(sg, 1.0, 0.25);
  double t = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(cache.propagators(t += 0.01));
}
BENCHMARK(BM_Propagators)->Args({1, 4096})->Args({2, 256});

static void BM_DuhamelStep(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const SpectralGrid sg(g);
  EquationParams p;
  p.n = g.n;
  p.delta = 0.25;
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 1e9;
  DuhamelStepper stepper(sg, p, ModulusSpec::hoelder(0.5), cfg);
  const Field u0 = bump(g);
  stepper.reset({u0, Field(g.size(), 0.0), 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step());
}
BENCHMARK(BM_DuhamelStep)->Args({1, 4096})->Args({2, 256})->Args({3, 32});

static void BM_Nonlinearity(benchmark::State& state) {
  const GridSpec g = grid_for(state);
  const SpectralGrid sg(g);
  const Field v = bump(g);
  const ModulusSpec mu = ModulusSpec::log_power(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nonlinearity(v, 3.0, mu, sg, 2.0 / 3.0));
}
BENCHMARK(BM_Nonlinearity)->Args({1, 4096})->Args({2, 256});

static void BM_PhiR(benchmark::State& state) {
  EquationParams p;
  const TestFunctionSpec spec = TestFunctionSpec::for_params(p);
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-3;
    if (x > 3.0) x = 0.0;
    benchmark::DoNotOptimize(phi_R(0.5, x, 10.0, spec));
  }
}
BENCHMARK(BM_PhiR);

BENCHMARK_MAIN();
