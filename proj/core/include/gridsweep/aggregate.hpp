#pragma once

#include <cstdint>
#include <compare>

#include "gridsweep/grid.hpp"

namespace gridsweep {

/// Identifies one aggregated block in one period.
struct BlockKey {
  std::int64_t block_row = 0;
  std::int64_t block_col = 0;
  std::int64_t period = 0;

  friend auto operator<=>(const BlockKey&, const BlockKey&) = default;
};

/// Block membership under the shifted partition:
///   block_row = floor((row + s) / k), block_col = floor((col + s) / k).
/// The same shift applies to rows and columns, so the partition origin moves
/// diagonally and s in 0..k-1 yields exactly k distinct partitions.
BlockKey block_of(const CellKey& cell, const AggregationSpec& spec);

/// Extension point: independent row/column shifts. Not used by the sweep;
/// the standard path shifts both axes by the same amount.
BlockKey block_of(const CellKey& cell, int multiplier, int shift_row, int shift_col);

/// Aggregate every variable of `panel` into k x k blocks under `spec`.
///
/// Per-role rules over the member cells of a block (within one period):
///   binary roles:      1 if any non-missing member is 1, 0 if all non-missing
///                      members are 0, MISSING if every member is MISSING
///   continuous roles:  mean of the non-missing members, MISSING if none
///
/// Blocks truncated by the map edge (or by the shift at the north-west edge)
/// are kept as smaller blocks. Output keys are the block indices; base side
/// length is multiplied by k. No empty blocks are materialized.
GridPanel aggregate(const GridPanel& panel, const AggregationSpec& spec);

GridPanel aggregate_with_shifts(const GridPanel& panel, int multiplier,
                                int shift_row, int shift_col);

}  // namespace gridsweep
