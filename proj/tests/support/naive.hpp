#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "gridsweep/grid.hpp"
#include "gridsweep/synth.hpp"

#include "test_rng.hpp"

namespace testsupport {

// Reference aggregation: bucket every record into its block by independent
// floating-point floor arithmetic, materialize the member lists, then apply
// the role rules by direct scan (max for binary, accumulate/mean for
// continuous). Checks gridsweep::aggregate without sharing its code path.
gridsweep::GridPanel aggregate_naive(const gridsweep::GridPanel& panel, int k, int s);

// Block assignment used by the naive oracle, exposed for partition checks.
std::tuple<std::int64_t, std::int64_t, std::int64_t> naive_block(
    const gridsweep::CellKey& key, int k, int s);

// Reference concordance: enumerate every cell of the rectangle, materialize
// every block's member list (empty blocks included), apply the any-rule by
// scanning members against the planted sets.
std::pair<std::int64_t, std::int64_t> concordance_naive(
    const gridsweep::PlantedMap& map, int k, int s,
    bool use_true_outcome = false);

struct PanelGenOptions {
  int max_width = 50;
  int max_height = 50;
  int max_periods = 3;
  double missing_rate = 0.1;
  double occupancy = 0.85;  // chance a cell of the rectangle has a record
  int max_extra_vars = 3;
};

// Random panel with outcome + treatment and a few extra variables of mixed
// roles; used by the aggregation and sampling property tests.
gridsweep::GridPanel random_panel(std::uint64_t seed,
                                  const PanelGenOptions& options = {});

}  // namespace testsupport
