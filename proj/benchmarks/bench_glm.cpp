#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "gridsweep/glm.hpp"

namespace {

// Deterministic design of n rows and p covariates from a true logistic model.
gridsweep::DesignMatrix bench_design(int n, int p) {
  std::uint64_t state = 99;
  const auto uniform = [&state] {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  };

  gridsweep::DesignMatrix design;
  design.column_names.emplace_back("(Intercept)");
  for (int j = 0; j < p; ++j) design.column_names.push_back("x" + std::to_string(j));
  design.predictors.resize(n, p + 1);
  design.response.resize(n);
  for (int i = 0; i < n; ++i) {
    design.predictors(i, 0) = 1.0;
    double eta = -0.5;
    for (int j = 1; j <= p; ++j) {
      const double value = 2.0 * uniform() - 1.0;
      design.predictors(i, j) = value;
      eta += 0.6 * value;
    }
    design.response(i) = uniform() < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
  }
  return design;
}

void BM_fit_logit(benchmark::State& state) {
  const gridsweep::DesignMatrix design =
      bench_design(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gridsweep::fit_logit(design));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_fit_logit)->Args({500, 3})->Args({5000, 5})->Args({20000, 8});
