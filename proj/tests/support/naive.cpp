#include "naive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace testsupport {

using gridsweep::CellKey;
using gridsweep::GridPanel;
using gridsweep::is_missing;
using gridsweep::kMissing;
using gridsweep::PlantedMap;
using gridsweep::VariableRole;
using gridsweep::VariableSpec;

std::tuple<std::int64_t, std::int64_t, std::int64_t> naive_block(
    const CellKey& key, int k, int s) {
  const auto br = static_cast<std::int64_t>(
      std::floor(static_cast<double>(key.row + s) / static_cast<double>(k)));
  const auto bc = static_cast<std::int64_t>(
      std::floor(static_cast<double>(key.col + s) / static_cast<double>(k)));
  return {br, bc, key.period};
}

GridPanel aggregate_naive(const GridPanel& panel, int k, int s) {
  using Block = std::tuple<std::int64_t, std::int64_t, std::int64_t>;
  std::map<Block, std::vector<std::vector<double>>> members;
  for (std::size_t r = 0; r < panel.size(); ++r) {
    const auto values = panel.values(r);
    members[naive_block(panel.key(r), k, s)].emplace_back(values.begin(),
                                                          values.end());
  }

  std::vector<GridPanel::Record> records;
  for (const auto& [block, rows] : members) {
    std::vector<double> out(panel.n_variables(), kMissing);
    for (std::size_t v = 0; v < panel.n_variables(); ++v) {
      std::vector<double> present;
      for (const auto& row : rows) {
        if (!is_missing(row[v])) present.push_back(row[v]);
      }
      if (present.empty()) continue;
      if (gridsweep::is_binary_role(panel.variables()[v].role)) {
        out[v] = *std::max_element(present.begin(), present.end());
      } else {
        double sum = 0.0;
        for (const double value : present) sum += value;
        out[v] = sum / static_cast<double>(present.size());
      }
    }
    records.emplace_back(
        CellKey{std::get<0>(block), std::get<1>(block), std::get<2>(block)},
        std::move(out));
  }
  return GridPanel(panel.variables(), panel.base_side_km() * k, std::move(records));
}

std::pair<std::int64_t, std::int64_t> concordance_naive(const PlantedMap& map,
                                                        int k, int s,
                                                        bool use_true_outcome) {
  using Block = std::tuple<std::int64_t, std::int64_t, std::int64_t>;
  const auto& y_set = use_true_outcome ? map.y_true_cells : map.y_cells;

  std::map<Block, std::vector<std::pair<int, int>>> members;
  for (int row = 0; row < map.height; ++row) {
    for (int col = 0; col < map.width; ++col) {
      members[naive_block(CellKey{row, col, 0}, k, s)].push_back({row, col});
    }
  }

  std::int64_t concordant = 0;
  for (const auto& [block, cells] : members) {
    bool any_x = false;
    bool any_y = false;
    for (const auto& cell : cells) {
      if (map.x_cells.count(cell)) any_x = true;
      if (y_set.count(cell)) any_y = true;
    }
    if (any_x == any_y) ++concordant;
  }
  return {concordant, static_cast<std::int64_t>(members.size())};
}

GridPanel random_panel(std::uint64_t seed, const PanelGenOptions& options) {
  TestRng rng(seed);
  const int width = rng.int_in(1, options.max_width);
  const int height = rng.int_in(1, options.max_height);
  const int periods = rng.int_in(1, options.max_periods);

  std::vector<VariableSpec> variables = {
      {"y", VariableRole::kOutcomeBinary},
      {"x", VariableRole::kTreatmentBinary},
  };
  const int extra = rng.int_in(0, options.max_extra_vars);
  for (int i = 0; i < extra; ++i) {
    const int pick = rng.int_in(0, 2);
    const VariableRole role = pick == 0   ? VariableRole::kCellBinary
                              : pick == 1 ? VariableRole::kCellContinuous
                                          : VariableRole::kCountryContinuous;
    variables.push_back({"v" + std::to_string(i), role});
  }

  std::vector<GridPanel::Record> records;
  for (int period = 0; period < periods; ++period) {
    for (int row = 0; row < height; ++row) {
      for (int col = 0; col < width; ++col) {
        if (rng.uniform() >= options.occupancy) continue;
        std::vector<double> values;
        values.reserve(variables.size());
        for (const auto& var : variables) {
          if (rng.uniform() < options.missing_rate) {
            values.push_back(kMissing);
          } else if (gridsweep::is_binary_role(var.role)) {
            values.push_back(rng.uniform() < 0.3 ? 1.0 : 0.0);
          } else {
            values.push_back(rng.normal());
          }
        }
        records.emplace_back(CellKey{row, col, period}, std::move(values));
      }
    }
  }
  if (records.empty()) {
    records.emplace_back(CellKey{0, 0, 0},
                         std::vector<double>(variables.size(), 0.0));
  }
  return GridPanel(std::move(variables), 55.0, std::move(records));
}

}  // namespace testsupport
