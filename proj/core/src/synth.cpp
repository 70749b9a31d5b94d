#include "gridsweep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace gridsweep {

namespace {

void check_cell(int width, int height, std::pair<int, int> cell, const char* what) {
  const auto [row, col] = cell;
  if (row < 0 || row >= height || col < 0 || col >= width) {
    std::ostringstream msg;
    msg << what << " (" << row << ", " << col << ") outside " << height << "x"
        << width << " map";
    throw InvalidArgumentError(msg.str());
  }
}

const std::set<std::pair<int, int>>& outcome_cells(const PlantedMap& map,
                                                   OutcomeView view) {
  return view == OutcomeView::kObserved ? map.y_cells : map.y_true_cells;
}

// Uniform double in [0, 1) from the top 53 bits; portable across platforms.
double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ConcordanceCount concordance(const PlantedMap& map, const AggregationSpec& spec,
                             OutcomeView view) {
  if (map.width <= 0 || map.height <= 0) {
    throw InvalidArgumentError("planted map has no cells");
  }

  const auto n_blocks_along = [&](int extent) {
    const CellKey last{extent - 1, 0, 0};
    return block_of(last, spec).block_row + 1;  // first block index is 0
  };
  ConcordanceCount count;
  count.total_blocks = n_blocks_along(map.height) * n_blocks_along(map.width);

  std::set<BlockKey> x_blocks;
  for (const auto& [row, col] : map.x_cells) {
    check_cell(map.width, map.height, {row, col}, "treatment cell");
    x_blocks.insert(block_of(CellKey{row, col, 0}, spec));
  }
  std::set<BlockKey> y_blocks;
  for (const auto& [row, col] : outcome_cells(map, view)) {
    check_cell(map.width, map.height, {row, col}, "outcome cell");
    y_blocks.insert(block_of(CellKey{row, col, 0}, spec));
  }

  std::int64_t discordant = 0;
  for (const auto& block : x_blocks) {
    if (!y_blocks.count(block)) ++discordant;
  }
  for (const auto& block : y_blocks) {
    if (!x_blocks.count(block)) ++discordant;
  }
  count.concordant = count.total_blocks - discordant;
  return count;
}

PlantedMap plant_measurement_error(int width, int height,
                                   std::pair<int, int> x_at,
                                   std::pair<int, int> y_true_at,
                                   std::pair<int, int> y_observed_at) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgumentError("map dimensions must be positive");
  }
  check_cell(width, height, x_at, "treatment cell");
  check_cell(width, height, y_true_at, "true outcome cell");
  check_cell(width, height, y_observed_at, "observed outcome cell");
  PlantedMap map;
  map.width = width;
  map.height = height;
  map.x_cells = {x_at};
  map.y_true_cells = {y_true_at};
  map.y_cells = {y_observed_at};
  return map;
}

GridPanel to_panel(const PlantedMap& map, OutcomeView view, std::int64_t period,
                   double base_side_km) {
  if (map.width <= 0 || map.height <= 0) {
    throw InvalidArgumentError("planted map has no cells");
  }
  const auto& y_set = outcome_cells(map, view);
  std::vector<GridPanel::Record> records;
  records.reserve(static_cast<std::size_t>(map.width) * map.height);
  for (int row = 0; row < map.height; ++row) {
    for (int col = 0; col < map.width; ++col) {
      const double y = y_set.count({row, col}) ? 1.0 : 0.0;
      const double x = map.x_cells.count({row, col}) ? 1.0 : 0.0;
      records.emplace_back(CellKey{row, col, period}, std::vector<double>{y, x});
    }
  }
  return GridPanel({{"y", VariableRole::kOutcomeBinary},
                    {"x", VariableRole::kTreatmentBinary}},
                   base_side_km, std::move(records));
}

PlantedMap concordance_demo_map() {
  // Searched over single-pair and pair-plus-cooccurrence layouts for counts of
  // 14/16 at k=1 and 2/4 at (k=2, s=0); see the synth tests for the oracle.
  PlantedMap map;
  map.width = 4;
  map.height = 4;
  map.x_cells = {{0, 0}, {2, 1}};
  map.y_cells = {{0, 2}, {2, 1}};
  map.y_true_cells = map.y_cells;
  return map;
}

PlantedMap dividing_line_demo_map() {
  // x and y in diagonally adjacent cells: separated by the (k=2, s=0)
  // dividing line, joined once the partition shifts by one.
  PlantedMap map;
  map.width = 4;
  map.height = 4;
  map.x_cells = {{1, 1}};
  map.y_cells = {{2, 2}};
  map.y_true_cells = map.y_cells;
  return map;
}

PlantedMap measurement_error_demo_map() {
  return plant_measurement_error(2, 2, {0, 0}, {0, 0}, {0, 1});
}

GridPanel make_planted_effect_panel(const PlantedEffectParams& params) {
  if (params.width <= 0 || params.height <= 0 || params.periods <= 0) {
    throw InvalidArgumentError("panel dimensions must be positive");
  }
  if (params.treated_per_period < 0 ||
      params.treated_per_period > params.width * params.height) {
    throw InvalidArgumentError("treated_per_period out of range");
  }

  std::mt19937_64 rng(params.seed);
  const int n_cells = params.width * params.height;

  std::vector<GridPanel::Record> records;
  records.reserve(static_cast<std::size_t>(n_cells) * params.periods);

  std::vector<int> cells(static_cast<std::size_t>(n_cells));
  for (int i = 0; i < n_cells; ++i) cells[static_cast<std::size_t>(i)] = i;

  for (int period = 0; period < params.periods; ++period) {
    // Partial Fisher-Yates pick of treated cells for this period.
    for (int i = 0; i < params.treated_per_period; ++i) {
      const auto span = static_cast<std::uint64_t>(n_cells - i);
      const std::uint64_t threshold = (0ULL - span) % span;
      std::uint64_t draw = rng();
      while (draw < threshold) draw = rng();
      std::swap(cells[static_cast<std::size_t>(i)],
                cells[static_cast<std::size_t>(i + static_cast<int>(draw % span))]);
    }
    std::vector<bool> treated(static_cast<std::size_t>(n_cells), false);
    for (int i = 0; i < params.treated_per_period; ++i) {
      treated[static_cast<std::size_t>(cells[static_cast<std::size_t>(i)])] = true;
    }

    // True events, then displacement one cell east; events pushed off the
    // map are lost.
    std::vector<bool> observed(static_cast<std::size_t>(n_cells), false);
    for (int cell = 0; cell < n_cells; ++cell) {
      const double rate = treated[static_cast<std::size_t>(cell)]
                              ? params.event_rate_treated
                              : params.event_rate_background;
      if (next_uniform(rng) >= rate) continue;
      const int col = cell % params.width;
      if (col + 1 >= params.width) continue;
      observed[static_cast<std::size_t>(cell + 1)] = true;
    }

    for (int row = 0; row < params.height; ++row) {
      for (int col = 0; col < params.width; ++col) {
        const int cell = row * params.width + col;
        // Box-Muller; one normal per record keeps the stream aligned.
        const double u1 = next_uniform(rng);
        const double u2 = next_uniform(rng);
        double z = std::sqrt(-2.0 * std::log(1.0 - u1)) *
                   std::cos(2.0 * 3.14159265358979323846 * u2);
        if (next_uniform(rng) < params.covariate_missing_rate) z = kMissing;
        records.emplace_back(
            CellKey{row, col, period},
            std::vector<double>{observed[static_cast<std::size_t>(cell)] ? 1.0 : 0.0,
                                treated[static_cast<std::size_t>(cell)] ? 1.0 : 0.0,
                                z});
      }
    }
  }

  return GridPanel({{"y", VariableRole::kOutcomeBinary},
                    {"x", VariableRole::kTreatmentBinary},
                    {"z1", VariableRole::kCellContinuous}},
                   params.base_side_km, std::move(records));
}

std::vector<std::string> scenario_names() {
  return {"concordance", "dividing-line", "measurement-error", "planted-effect"};
}

GridPanel make_scenario(const std::string& name) {
  if (name == "concordance") return to_panel(concordance_demo_map());
  if (name == "dividing-line") return to_panel(dividing_line_demo_map());
  if (name == "measurement-error") return to_panel(measurement_error_demo_map());
  if (name == "planted-effect") return make_planted_effect_panel();
  std::ostringstream msg;
  msg << "unknown scenario '" << name << "'; available:";
  for (const auto& known : scenario_names()) msg << " " << known;
  throw ConfigError(msg.str());
}

}  // namespace gridsweep
