#include <benchmark/benchmark.h>

#include "opmean/hermitian.hpp"
#include "opmean/mean.hpp"
#include "opmean/random_matrices.hpp"
#include "opmean/trials.hpp"

using namespace opmean;

namespace {

TrialConfig bench_config(int trials) {
  TrialConfig c;
  c.trials = trials;
  return c;
}

void BM_TrialsSerial(benchmark::State& state) {
  const auto config = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_trials_serial(config).failures);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrialsSerial)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_TrialsParallel(benchmark::State& state) {
  const auto config = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_trials_parallel(config).failures);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrialsParallel)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Eigen(benchmark::State& state) {
  Rng rng(1);
  const auto h = random_hermitian(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(h).eigenvalues.data());
}
BENCHMARK(BM_Eigen)->RangeMultiplier(2)->Range(2, 32);

void BM_GeometricMean(benchmark::State& state) {
  Rng rng(2);
  const int n = static_cast<int>(state.range(0));
  const auto a = random_pd(rng, n);
  const auto b = random_pd(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(weighted_geometric(a, b, 0.3)(0, 0));
}
BENCHMARK(BM_GeometricMean)->RangeMultiplier(2)->Range(2, 32);

}  // namespace

BENCHMARK_MAIN();
