#include "gridsweep/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "gridsweep/aggregate.hpp"

namespace gridsweep {

std::string_view to_string(FitErrorCode code) {
  switch (code) {
    case FitErrorCode::kNone: return "";
    case FitErrorCode::kEmptyDesign: return "empty_design";
    case FitErrorCode::kDegenerateResponse: return "degenerate_response";
    case FitErrorCode::kSingularDesign: return "singular_design";
    case FitErrorCode::kSeparation: return "separation";
  }
  return "";
}

FitErrorCode fit_error_code_from_string(std::string_view text) {
  if (text.empty()) return FitErrorCode::kNone;
  if (text == "empty_design") return FitErrorCode::kEmptyDesign;
  if (text == "degenerate_response") return FitErrorCode::kDegenerateResponse;
  if (text == "singular_design") return FitErrorCode::kSingularDesign;
  if (text == "separation") return FitErrorCode::kSeparation;
  throw DataError("unknown fit error code '" + std::string(text) + "'");
}

std::vector<AggregationSpec> enumerate_specs(int max_multiplier) {
  if (max_multiplier < 1) {
    throw InvalidArgumentError("max multiplier must be >= 1");
  }
  std::vector<AggregationSpec> specs;
  specs.reserve(static_cast<std::size_t>(max_multiplier) *
                (static_cast<std::size_t>(max_multiplier) + 1) / 2);
  for (int k = 1; k <= max_multiplier; ++k) {
    for (int s = 0; s < k; ++s) specs.emplace_back(k, s);
  }
  return specs;
}

namespace {

void validate_config(const GridPanel& panel, const SweepConfig& config) {
  if (config.max_multiplier < 1) {
    throw InvalidArgumentError("max multiplier must be >= 1");
  }
  validate(config.plan);
  if (config.model_variables.empty()) {
    throw ConfigError("no model variables configured");
  }
  for (const auto& name : config.model_variables) {
    if (!panel.index_of(name)) {
      throw ConfigError("model variable '" + name + "' not in panel");
    }
  }
  if (std::find(config.model_variables.begin(), config.model_variables.end(),
                config.treatment_name) == config.model_variables.end()) {
    throw ConfigError("treatment '" + config.treatment_name +
                      "' is not among the model variables");
  }
  if (!panel.outcome_index()) {
    throw ConfigError("panel has no outcome variable");
  }
}

std::vector<SweepRow> run_spec(const GridPanel& panel, const SweepConfig& config,
                               const AggregationSpec& spec) {
  const GridPanel aggregated = aggregate(panel, spec);

  // Position of the reported coefficient: intercept first, covariates after.
  const auto treatment_pos = static_cast<int>(
      std::find(config.model_variables.begin(), config.model_variables.end(),
                config.treatment_name) -
      config.model_variables.begin() + 1);

  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(config.plan.n_subsamples));
  for (int m = 0; m < config.plan.n_subsamples; ++m) {
    SweepRow row;
    row.multiplier = spec.multiplier;
    row.shift = spec.shift;
    row.subsample_index = m;
    row.seed = derive_seed(config.plan.base_seed, spec.multiplier, spec.shift, m);
    try {
      const GridPanel sample = subsample(aggregated, config.plan.keep_rate, row.seed);
      const DesignMatrix design = listwise_delete(sample, config.model_variables);
      row.n_obs = static_cast<int>(design.n_rows());
      const FitResult fit = fit_logit(design);
      row.coefficient = fit.coefficients[treatment_pos];
      row.standard_error = fit.standard_errors[treatment_pos];
      row.z_value = fit.z_values[treatment_pos];
      row.p_one_tailed = fit.p_one_tailed_positive[treatment_pos];
      row.converged = fit.converged;
    } catch (const EmptyDesignError&) {
      row.error = FitErrorCode::kEmptyDesign;
      row.n_obs = 0;
    } catch (const DegenerateResponseError&) {
      row.error = FitErrorCode::kDegenerateResponse;
    } catch (const SingularDesignError&) {
      row.error = FitErrorCode::kSingularDesign;
    } catch (const SeparationError&) {
      row.error = FitErrorCode::kSeparation;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

SweepResult run_sweep(const GridPanel& panel, const SweepConfig& config, int jobs) {
  validate_config(panel, config);

  const std::vector<AggregationSpec> specs = enumerate_specs(config.max_multiplier);
  std::vector<std::vector<SweepRow>> per_spec(specs.size());

  unsigned n_threads = jobs > 0 ? static_cast<unsigned>(jobs)
                                : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(specs.size()));

  if (n_threads <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      per_spec[i] = run_spec(panel, config, specs[i]);
    }
  } else {
    // Specs are independent work units writing to disjoint slots; the merge
    // below is canonical regardless of which thread finishes first.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < specs.size();
             i = next.fetch_add(1)) {
          try {
            per_spec[i] = run_spec(panel, config, specs[i]);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& worker : workers) worker.join();
    if (failure) std::rethrow_exception(failure);
  }

  SweepResult result;
  result.rows.reserve(specs.size() *
                      static_cast<std::size_t>(config.plan.n_subsamples));
  for (auto& rows : per_spec) {
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  return result;
}

}  // namespace gridsweep
