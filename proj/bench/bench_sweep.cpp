#include <benchmark/benchmark.h>

#include "spinflip/channel.hpp"
#include "spinflip/experiment.hpp"

namespace {

using namespace spinflip;

void sweep(benchmark::State& state, Execution exec) {
  const auto specs = preset("fig2ab");
  for (auto _ : state) benchmark::DoNotOptimize(run_experiments(specs, exec));
}

void gaussian(benchmark::State& state, Execution exec) {
  const auto cfg = ModelConfig::heisenberg(Spin(static_cast<int>(state.range(0))), 1.2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_k_kraus(cfg, 0.05, 31, exec));
}

}  // namespace

BENCHMARK_CAPTURE(sweep, serial, Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, parallel, Execution::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(gaussian, serial, Execution::serial)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(gaussian, parallel, Execution::parallel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
