#include <benchmark/benchmark.h>

#include "polydrive/magnus.hpp"
#include "polydrive/optimizer.hpp"
#include "polydrive/robustness.hpp"
#include "polydrive/simulator.hpp"
#include "polydrive/types.hpp"

using namespace polydrive;

static void BM_SolveSecondOrder(benchmark::State& state) {
  const DrivingConfig config(static_cast<int>(state.range(0)), 4, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(solve_second_order(config));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveSecondOrder)->RangeMultiplier(2)->Range(2, 64)->Complexity();

static void BM_SolveThirdOrder(benchmark::State& state) {
  const DrivingConfig config(static_cast<int>(state.range(0)), 4, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(solve_third_order(config));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveThirdOrder)->RangeMultiplier(2)->Range(2, 64)->Complexity();

static void BM_PropagatePeriod(benchmark::State& state) {
  const DrivingConfig config(10, 4, 0.05);
  const Pulse pulse = monochromatic_pulse(config);
  for (auto _ : state)
    benchmark::DoNotOptimize(propagate(pulse, config, static_cast<int>(state.range(0)), 64));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PropagatePeriod)->RangeMultiplier(2)->Range(1, 16)->Complexity();

static void BM_EffectiveHamiltonian(benchmark::State& state) {
  const DrivingConfig config(10, 4, 0.05);
  const Pulse pulse = solve_third_order(config).pulse;
  for (auto _ : state) benchmark::DoNotOptimize(effective_hamiltonian(pulse, config));
}
BENCHMARK(BM_EffectiveHamiltonian);

static void BM_FidelityWindows(benchmark::State& state) {
  const DrivingConfig config(10, 4, 0.05);
  const UnitaryTrajectory trajectory = propagate(monochromatic_pulse(config), config, 4, 256);
  for (auto _ : state) benchmark::DoNotOptimize(fidelity_windows(trajectory, config));
}
BENCHMARK(BM_FidelityWindows);

static void BM_RobustnessTrialBatch(benchmark::State& state) {
  const DrivingConfig config(10, 4, 0.05);
  const Pulse pulse = solve_third_order(config).pulse;
  RobustnessConfig rc;
  rc.delta = 0.002;
  rc.trials = static_cast<int>(state.range(0));
  rc.n_periods = 1;
  rc.seed = 7;
  for (auto _ : state)
    benchmark::DoNotOptimize(robustness_sweep(pulse, config, rc, 64));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RobustnessTrialBatch)->RangeMultiplier(2)->Range(1, 8)->Complexity();

BENCHMARK_MAIN();
