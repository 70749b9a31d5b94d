#pragma once

#include <cstdint>

#include "gridsweep/grid.hpp"

namespace gridsweep {

/// Rare-event subsampling design: keep every positive-outcome record and a
/// seeded random fraction of the negatives.
struct SubsamplePlan {
  double keep_rate = 0.05;
  int n_subsamples = 30;
  std::uint64_t base_seed = 0;
};

void validate(const SubsamplePlan& plan);

/// Draw one subsample. All records with outcome 1 are retained; records with
/// MISSING outcome are dropped; among the N negatives, exactly
/// round-half-up(keep_rate * N) are retained, drawn uniformly without
/// replacement by a generator seeded with `seed`. Output order is canonical,
/// so the result is a pure function of (panel, keep_rate, seed).
GridPanel subsample(const GridPanel& panel, double keep_rate, std::uint64_t seed);

/// Exact retained-negative count for a given pool size.
std::int64_t retained_negative_count(double keep_rate, std::int64_t n_negatives);

/// Deterministic per-(spec, subsample) seed stream: mixes (base_seed, k, s, m)
/// through a splitmix64 chain so every triple gets an independent stream.
std::uint64_t derive_seed(std::uint64_t base_seed, int k, int s, int m);

}  // namespace gridsweep
