#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridsweep/glm.hpp"
#include "gridsweep/grid.hpp"
#include "gridsweep/sampling.hpp"

namespace gridsweep {

struct SweepConfig {
  int max_multiplier = 6;
  SubsamplePlan plan;
  std::vector<std::string> model_variables;  // covariates, treatment included
  std::string treatment_name;
};

enum class FitErrorCode {
  kNone,
  kEmptyDesign,
  kDegenerateResponse,
  kSingularDesign,
  kSeparation,
};

std::string_view to_string(FitErrorCode code);
FitErrorCode fit_error_code_from_string(std::string_view text);

/// One (k, s, m) cell of the sweep. Failed fits carry an error code and
/// MISSING estimates; they are rows, not omissions.
struct SweepRow {
  int multiplier = 1;
  int shift = 0;
  int subsample_index = 0;
  std::uint64_t seed = 0;
  int n_obs = 0;
  double coefficient = kMissing;
  double standard_error = kMissing;
  double z_value = kMissing;
  double p_one_tailed = kMissing;
  bool converged = false;
  FitErrorCode error = FitErrorCode::kNone;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // canonical (k, s, m) order
};

/// All specifications up to multiplier K: [(k, s) for k in 1..K, s in 0..k-1],
/// ordered by k then s. K multipliers yield K*(K+1)/2 specifications.
std::vector<AggregationSpec> enumerate_specs(int max_multiplier);

/// Run the full robustness sweep. For each specification the panel is
/// aggregated exactly once; each subsample m is drawn with
/// derive_seed(base_seed, k, s, m), reduced to complete cases, and fit.
/// The treatment coefficient's statistics populate the row. Per-fit failures
/// are recorded, never fatal. The result is a pure function of
/// (panel, config); `jobs` only sets the parallelism (0 = all cores).
SweepResult run_sweep(const GridPanel& panel, const SweepConfig& config, int jobs = 1);

}  // namespace gridsweep
