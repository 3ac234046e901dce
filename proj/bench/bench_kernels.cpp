// Serial reference vs OpenMP kernels. The Arg is the worker count; 0 selects
// the serial path.

#include <vector>

#include <benchmark/benchmark.h>

#include "replen/methods.hpp"
#include "replen/montecarlo.hpp"

using namespace replen;

namespace {

ModelParams table_params() {
  ModelParams p;
  p.k = 10;
  p.mu = 1.0;
  p.r = 0.02;
  p.cost = LinearCost{1.0, 1.0};
  return p;
}

ExecutionPolicy policy(const benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  return threads == 0 ? ExecutionPolicy{Execution::serial, 0}
                      : ExecutionPolicy{Execution::parallel, threads};
}

void BM_SimulateWkGrid(benchmark::State& state) {
  MCOptions opts;
  opts.n_paths = 100'000;
  opts.seed = 1;
  opts.execution = policy(state);
  const std::vector<double> horizons = {10.0, 20.0, 50.0, 100.0, 200.0, 500.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_wk_grid(table_params(), horizons, opts));
  }
  state.SetItemsProcessed(state.iterations() * opts.n_paths);
}

void BM_SimulateVk(benchmark::State& state) {
  MCOptions opts;
  opts.n_paths = 20'000;
  opts.seed = 1;
  opts.execution = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_vk(table_params(), opts));
  state.SetItemsProcessed(state.iterations() * opts.n_paths);
}

void curve_bench(benchmark::State& state, Method method) {
  CurveOptions opts;
  opts.execution = policy(state);
  const std::vector<double> times = uniform_times(500.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_curve(table_params(), method, times, opts));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(times.size()));
}

void BM_SeriesCurve(benchmark::State& state) { curve_bench(state, Method::series); }
void BM_LaplaceCurve(benchmark::State& state) { curve_bench(state, Method::laplace); }

void BM_VolterraSolve(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_renewal(table_params(), {500.0, 0.01 * state.range(0)}));
  }
}

}  // namespace

BENCHMARK(BM_SimulateWkGrid)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SimulateVk)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SeriesCurve)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LaplaceCurve)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VolterraSolve)->Arg(1)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
