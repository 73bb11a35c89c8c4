// Serial reference vs OpenMP kernels on the bootstrap and the coverage loop.

#include "larinf/bootstrap.hpp"
#include "larinf/inference.hpp"
#include "larinf/io.hpp"
#include "larinf/simulate.hpp"

#include <benchmark/benchmark.h>

using namespace larinf;

namespace {

struct Diabetes {
  StandardizedData data;
  LarPath path;
  BootstrapBase base;

  Diabetes() {
    const Dataset d = split_response(read_csv(std::string(LARINF_DATA_DIR) + "/diabetes.csv"), "y");
    data = standardize(d.x, d.y, true, d.names);
    path = lar_path(data, data.y);
    base = make_base(data, path, infer(data, path).m_bar);
  }
};

const Diabetes& diabetes() {
  static const Diabetes d;
  return d;
}

BootstrapConfig config(int draws) {
  BootstrapConfig cfg;
  cfg.draws = draws;
  cfg.seed = 1;
  return cfg;
}

void BM_replicas_serial(benchmark::State& state) {
  const auto& d = diabetes();
  const BootstrapConfig cfg = config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_replicas_serial(d.base, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_replicas_parallel(benchmark::State& state) {
  const auto& d = diabetes();
  const BootstrapConfig cfg = config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_replicas_parallel(d.base, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

ScenarioSpec small_study() {
  ScenarioSpec spec;
  spec.n = 500;
  spec.p = 20;
  spec.reps = 8;
  spec.boot_draws = 100;
  return spec;
}

void BM_coverage_serial(benchmark::State& state) {
  const ScenarioSpec spec = small_study();
  for (auto _ : state) benchmark::DoNotOptimize(run_coverage(spec, false));
}

void BM_coverage_parallel(benchmark::State& state) {
  const ScenarioSpec spec = small_study();
  for (auto _ : state) benchmark::DoNotOptimize(run_coverage(spec, true));
}

}  // namespace

BENCHMARK(BM_replicas_serial)->Arg(500)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_replicas_parallel)->Arg(500)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_coverage_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_coverage_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
