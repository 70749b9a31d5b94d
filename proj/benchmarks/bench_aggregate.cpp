#include <benchmark/benchmark.h>

#include "gridsweep/aggregate.hpp"
#include "gridsweep/synth.hpp"

namespace {

gridsweep::GridPanel bench_panel() {
  gridsweep::PlantedEffectParams params;
  params.width = 100;
  params.height = 100;
  params.periods = 1;
  params.treated_per_period = 300;
  return gridsweep::make_planted_effect_panel(params);
}

void BM_aggregate(benchmark::State& state) {
  const gridsweep::GridPanel panel = bench_panel();
  const gridsweep::AggregationSpec spec(static_cast<int>(state.range(0)), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gridsweep::aggregate(panel, spec));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(panel.size()));
}

}  // namespace

BENCHMARK(BM_aggregate)->Arg(2)->Arg(4)->Arg(6);
