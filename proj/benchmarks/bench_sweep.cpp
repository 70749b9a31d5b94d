#include <benchmark/benchmark.h>

#include "gridsweep/sweep.hpp"
#include "gridsweep/synth.hpp"

namespace {

void BM_run_sweep(benchmark::State& state) {
  const gridsweep::GridPanel panel = gridsweep::make_planted_effect_panel();

  gridsweep::SweepConfig config;
  config.max_multiplier = 6;
  config.plan = {0.05, 30, 42};
  config.model_variables = {"x", "z1"};
  config.treatment_name = "x";

  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gridsweep::run_sweep(panel, config, jobs));
  }
}

}  // namespace

BENCHMARK(BM_run_sweep)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
