#include "gridsweep/aggregate.hpp"

#include <map>
#include <vector>

namespace gridsweep {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void check_shift(int multiplier, int shift, const char* axis) {
  if (multiplier < 1) {
    throw InvalidArgumentError("aggregation multiplier must be >= 1");
  }
  if (shift < 0 || shift >= multiplier) {
    throw InvalidArgumentError(std::string("aggregation ") + axis +
                               " shift must satisfy 0 <= s < k");
  }
}

// Per-block accumulator for one variable.
struct VarAccum {
  bool any_one = false;
  bool any_nonmissing = false;
  double sum = 0.0;
  std::int64_t count = 0;
};

}  // namespace

BlockKey block_of(const CellKey& cell, int multiplier, int shift_row, int shift_col) {
  check_shift(multiplier, shift_row, "row");
  check_shift(multiplier, shift_col, "col");
  return BlockKey{floor_div(cell.row + shift_row, multiplier),
                  floor_div(cell.col + shift_col, multiplier), cell.period};
}

BlockKey block_of(const CellKey& cell, const AggregationSpec& spec) {
  return block_of(cell, spec.multiplier, spec.shift, spec.shift);
}

GridPanel aggregate_with_shifts(const GridPanel& panel, int multiplier,
                                int shift_row, int shift_col) {
  check_shift(multiplier, shift_row, "row");
  check_shift(multiplier, shift_col, "col");

  const std::size_t n_vars = panel.n_variables();
  std::map<BlockKey, std::vector<VarAccum>> blocks;

  for (std::size_t r = 0; r < panel.size(); ++r) {
    const BlockKey block = block_of(panel.key(r), multiplier, shift_row, shift_col);
    auto [it, inserted] = blocks.try_emplace(block);
    if (inserted) it->second.resize(n_vars);
    const auto vals = panel.values(r);
    for (std::size_t v = 0; v < n_vars; ++v) {
      const double value = vals[v];
      if (is_missing(value)) continue;
      VarAccum& acc = it->second[v];
      acc.any_nonmissing = true;
      if (value == 1.0) acc.any_one = true;
      acc.sum += value;
      acc.count += 1;
    }
  }

  std::vector<GridPanel::Record> records;
  records.reserve(blocks.size());
  for (const auto& [block, accums] : blocks) {
    std::vector<double> vals(n_vars, kMissing);
    for (std::size_t v = 0; v < n_vars; ++v) {
      const VarAccum& acc = accums[v];
      if (!acc.any_nonmissing) continue;  // all members MISSING
      if (is_binary_role(panel.variables()[v].role)) {
        vals[v] = acc.any_one ? 1.0 : 0.0;
      } else {
        vals[v] = acc.sum / static_cast<double>(acc.count);
      }
    }
    records.emplace_back(CellKey{block.block_row, block.block_col, block.period},
                         std::move(vals));
  }

  return GridPanel(panel.variables(), panel.base_side_km() * multiplier,
                   std::move(records));
}

GridPanel aggregate(const GridPanel& panel, const AggregationSpec& spec) {
  return aggregate_with_shifts(panel, spec.multiplier, spec.shift, spec.shift);
}

}  // namespace gridsweep
