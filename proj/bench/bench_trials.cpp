// Serial reference loop vs the OpenMP trial kernel, and the visible-arc
// sampler vs full rotated snapshots.
#include "orbitcox/simulate.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace orbitcox;

namespace {

SimSpec fig1_spec(std::int64_t trials, bool exact) {
  SimSpec spec;
  spec.model = CoxModel{CoxParams{72.0, 22.0, AltitudeDistribution::uniform(7000.0, 7050.0)}};
  spec.channel.fading = RayleighFading{1.0};
  spec.trials = trials;
  spec.base_seed = 1;
  spec.exact_snapshots = exact;
  return spec;
}

void BM_Serial(benchmark::State& state) {
  const SimSpec spec = fig1_spec(state.range(0), false);
  for (auto _ : state) benchmark::DoNotOptimize(run_trials_serial(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_OpenMP(benchmark::State& state) {
  const SimSpec spec = fig1_spec(state.range(0), false);
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_ExactSnapshots(benchmark::State& state) {
  const SimSpec spec = fig1_spec(state.range(0), true);
  for (auto _ : state) benchmark::DoNotOptimize(run_trials_serial(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenMP)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactSnapshots)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
