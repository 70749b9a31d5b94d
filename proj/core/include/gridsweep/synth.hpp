#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gridsweep/aggregate.hpp"
#include "gridsweep/grid.hpp"

namespace gridsweep {

/// A synthetic map with planted binary treatment and outcome locations.
/// `y_true_cells` carries the true outcome locations when locational
/// measurement error is modeled; `y_cells` is what an observer records.
struct PlantedMap {
  int width = 0;
  int height = 0;
  std::set<std::pair<int, int>> x_cells;       // (row, col) with treatment 1
  std::set<std::pair<int, int>> y_cells;       // observed outcome 1
  std::set<std::pair<int, int>> y_true_cells;  // true outcome 1
};

enum class OutcomeView { kObserved, kTrue };

struct ConcordanceCount {
  std::int64_t concordant = 0;
  std::int64_t total_blocks = 0;
};

/// Aggregate the planted map under `spec` with the binary any-rule and count
/// blocks where aggregated X equals aggregated Y (both 1 or both 0). The
/// denominator covers every block of the width x height rectangle, including
/// blocks where both are 0.
ConcordanceCount concordance(const PlantedMap& map, const AggregationSpec& spec,
                             OutcomeView view = OutcomeView::kObserved);

/// Plant a single treatment cell, a true outcome cell, and a displaced
/// observed outcome cell. y_true_at == y_observed_at models zero error.
PlantedMap plant_measurement_error(int width, int height,
                                   std::pair<int, int> x_at,
                                   std::pair<int, int> y_true_at,
                                   std::pair<int, int> y_observed_at);

/// Materialize a planted map as a one-period panel with variables
/// y (outcome) and x (treatment), one record per cell of the rectangle.
GridPanel to_panel(const PlantedMap& map, OutcomeView view = OutcomeView::kObserved,
                   std::int64_t period = 0, double base_side_km = 55.0);

// Frozen demonstration fixtures. Layouts were found by enumerating small
// planted configurations until the block-level concordance counts matched the
// targets; tests re-verify the counts with an exhaustive block oracle.

/// 4x4 map: 14 of 16 cells concordant at k=1 but only 2 of 4 blocks at
/// (k=2, s=0). Coarsening weakens the apparent association.
PlantedMap concordance_demo_map();

/// 4x4 map whose block-level concordance depends on the shift: discordant
/// everywhere at (k=2, s=0), fully concordant at (k=2, s=1).
PlantedMap dividing_line_demo_map();

/// 2x2 map where the observed outcome is displaced one cell east of its true
/// location: discordant at k=1, concordant at (k=2, s=0).
PlantedMap measurement_error_demo_map();

/// Parameters of the planted-effect generator: a treatment raises the chance
/// of an event in the same cell, and every event is recorded one cell east of
/// where it happened (events displaced off the map are lost). A standard
/// normal covariate with sparse missingness exercises listwise deletion.
struct PlantedEffectParams {
  int width = 50;
  int height = 40;
  int periods = 5;
  int treated_per_period = 60;
  double event_rate_treated = 0.35;
  double event_rate_background = 0.008;
  double covariate_missing_rate = 0.01;
  std::uint64_t seed = 7;
  double base_side_km = 55.0;
};

/// Deterministic synthetic panel with a planted positive local effect hidden
/// behind one-cell outcome displacement. Variables: y (outcome binary),
/// x (treatment binary), z1 (cell continuous).
GridPanel make_planted_effect_panel(const PlantedEffectParams& params = {});

/// Scenario registry backing the `synth` CLI subcommand.
std::vector<std::string> scenario_names();
GridPanel make_scenario(const std::string& name);

}  // namespace gridsweep
