// Serial reference vs OpenMP kernels for the two data-parallel hot loops.

#include <benchmark/benchmark.h>

#include "qrgg/experiment.hpp"
#include "qrgg/model.hpp"

namespace {

qrgg::ExperimentConfig bench_config(std::size_t trials) {
  qrgg::ExperimentConfig config = qrgg::preset_config("fig3");
  config.trials = trials;
  config.master_seed = 11;
  return config;
}

void BM_ExperimentSerial(benchmark::State& state) {
  const auto config = bench_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrgg::serial::run_experiment(config).mean);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ExperimentParallel(benchmark::State& state) {
  const auto config = bench_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qrgg::run_experiment(config).mean);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PairEstimateSerial(benchmark::State& state) {
  const auto model = qrgg::ConnectionModel::fixed(0.1, 0.2, 0.5);
  for (auto _ : state) {
    qrgg::RandomStream rng(3);
    benchmark::DoNotOptimize(qrgg::serial::estimate_connection_probability(
        model, static_cast<std::size_t>(state.range(0)), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PairEstimateParallel(benchmark::State& state) {
  const auto model = qrgg::ConnectionModel::fixed(0.1, 0.2, 0.5);
  for (auto _ : state) {
    qrgg::RandomStream rng(3);
    benchmark::DoNotOptimize(qrgg::estimate_connection_probability(
        model, static_cast<std::size_t>(state.range(0)), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ExperimentSerial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentParallel)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairEstimateSerial)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PairEstimateParallel)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
