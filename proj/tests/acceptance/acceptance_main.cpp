// Acceptance suite: runs every contract criterion end to end and prints one
// pass/fail line per criterion. Invoke with the CLI binary as argv[1]; the
// end-to-end criterion is skipped (and fails) without it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gridsweep/aggregate.hpp"
#include "gridsweep/glm.hpp"
#include "gridsweep/grid.hpp"
#include "gridsweep/io.hpp"
#include "gridsweep/report.hpp"
#include "gridsweep/sampling.hpp"
#include "gridsweep/sweep.hpp"
#include "gridsweep/synth.hpp"

#include "logit_oracle.hpp"
#include "naive.hpp"
#include "temp_dir.hpp"
#include "test_rng.hpp"

using namespace gridsweep;

namespace {

struct AcceptanceFailure {
  std::string message;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw AcceptanceFailure{message};
}

int g_failures = 0;

template <typename Body>
void criterion(int number, const std::string& title, Body&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    body();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::cout << "[PASS] criterion " << number << ": " << title << " (" << ms
              << " ms)\n";
  } catch (const AcceptanceFailure& failure) {
    ++g_failures;
    std::cout << "[FAIL] criterion " << number << ": " << title << " -- "
              << failure.message << "\n";
  } catch (const std::exception& e) {
    ++g_failures;
    std::cout << "[FAIL] criterion " << number << ": " << title
              << " -- unexpected error: " << e.what() << "\n";
  }
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

// ---------------------------------------------------------------- criterion 1

void geometry_arithmetic() {
  require(aggregated_area_km2(55.0, 1) == 3025.0, "area(55, 1) != 3025");
  require(aggregated_area_km2(55.0, 2) == 12100.0, "area(55, 2) != 12100");
  require(aggregated_area_km2(55.0, 6) == 108900.0, "area(55, 6) != 108900");
  const double diagonal = block_diagonal_km(55.0, 6);
  require(std::abs(diagonal - 467.0) < 0.5,
          "diagonal(55, 6) = " + fmt(diagonal) + " not within 0.5 of 467");
}

// ---------------------------------------------------------------- criterion 2

void spec_enumeration_and_row_count() {
  require(enumerate_specs(6).size() == 21, "enumerate_specs(6) != 21 specs");

  const GridPanel panel = make_planted_effect_panel();  // 50 x 40 x 5 = 10,000
  require(panel.size() == 10000, "synthetic panel is not 10,000 cells");

  SweepConfig config;
  config.max_multiplier = 6;
  config.plan = {0.05, 30, 42};
  config.model_variables = {"x", "z1"};
  config.treatment_name = "x";
  const SweepResult result = run_sweep(panel, config, 0);
  require(result.rows.size() == 630,
          "default sweep produced " + std::to_string(result.rows.size()) +
              " rows, expected 630");

  std::set<std::tuple<int, int, int>> distinct;
  for (const auto& row : result.rows) {
    distinct.insert({row.multiplier, row.shift, row.subsample_index});
  }
  require(distinct.size() == 630, "sweep rows are not unique per (k, s, m)");
}

// ---------------------------------------------------------------- criterion 3

void aggregation_rule_suite() {
  int cases = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const GridPanel panel = testsupport::random_panel(90000 + seed);
    testsupport::TestRng rng(seed);
    const int k = rng.int_in(1, 6);
    const int s = rng.int_in(0, k - 1);
    const AggregationSpec spec(k, s);
    const GridPanel out = aggregate(panel, spec);

    // membership map, built independently of the implementation
    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>,
             std::vector<std::size_t>>
        members;
    for (std::size_t r = 0; r < panel.size(); ++r) {
      members[testsupport::naive_block(panel.key(r), k, s)].push_back(r);
    }

    require(out.size() == members.size(),
            "block count mismatch: output " + std::to_string(out.size()) +
                " vs " + std::to_string(members.size()));

    std::size_t covered = 0;
    std::size_t out_index = 0;
    for (const auto& [block, rows] : members) {
      require(rows.size() <= static_cast<std::size_t>(k) * k,
              "block holds more than k^2 cells");
      covered += rows.size();
      require(out.key(out_index) == CellKey{std::get<0>(block), std::get<1>(block),
                                            std::get<2>(block)},
              "output keys not aligned with the block partition");

      for (std::size_t v = 0; v < panel.n_variables(); ++v) {
        double max_value = -1.0;
        double min_cont = 0.0;
        double max_cont = 0.0;
        int present = 0;
        for (const std::size_t r : rows) {
          const double value = panel.value(r, v);
          if (is_missing(value)) continue;
          if (present == 0) {
            min_cont = max_cont = value;
          } else {
            min_cont = std::min(min_cont, value);
            max_cont = std::max(max_cont, value);
          }
          max_value = std::max(max_value, value);
          ++present;
        }
        const double got = out.value(out_index, v);
        if (present == 0) {
          require(is_missing(got), "all-MISSING block did not aggregate to MISSING");
        } else if (is_binary_role(panel.variables()[v].role)) {
          require(got == max_value, "binary any-rule != max over non-missing");
        } else {
          require(got >= min_cont - 1e-12 && got <= max_cont + 1e-12,
                  "mean left the [min, max] envelope");
        }
      }
      ++out_index;
    }
    require(covered == panel.size(), "partition lost or duplicated cells");

    // identity at k = 1
    if (k == 1) {
      require(out == panel, "aggregate with k=1 is not the identity");
    }

    // shift periodicity: s and s+k group cells identically
    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>,
             std::vector<std::size_t>>
        shifted;
    for (std::size_t r = 0; r < panel.size(); ++r) {
      shifted[testsupport::naive_block(panel.key(r), k, s + k)].push_back(r);
    }
    require(shifted.size() == members.size(), "s+k changed the block count");
    auto it = shifted.begin();
    for (const auto& [block, rows] : members) {
      require(it->second == rows, "s+k changed the grouping of cells");
      ++it;
    }

    // full-rule agreement with the naive oracle
    require(out == testsupport::aggregate_naive(panel, k, s),
            "aggregate disagrees with the naive oracle");
    ++cases;
  }
  require(cases == 1000, "expected 1000 randomized cases");
}

// ---------------------------------------------------------------- criterion 4

void concordance_phenomena() {
  const PlantedMap demo = concordance_demo_map();
  const auto fine = concordance(demo, AggregationSpec(1, 0));
  const auto coarse = concordance(demo, AggregationSpec(2, 0));
  require(fine.concordant == 14 && fine.total_blocks == 16,
          "fine partition is not 14/16 concordant");
  require(coarse.concordant == 2 && coarse.total_blocks == 4,
          "coarse partition is not 2/4 concordant");
  require(testsupport::concordance_naive(demo, 1, 0) ==
              std::pair<std::int64_t, std::int64_t>{14, 16},
          "oracle disagrees at k=1");
  require(testsupport::concordance_naive(demo, 2, 0) ==
              std::pair<std::int64_t, std::int64_t>{2, 4},
          "oracle disagrees at k=2");

  const PlantedMap displaced = measurement_error_demo_map();
  const auto observed_fine = concordance(displaced, AggregationSpec(1, 0));
  require(observed_fine.concordant < observed_fine.total_blocks,
          "measurement-error map should be discordant at k=1");
  const auto observed_coarse = concordance(displaced, AggregationSpec(2, 0));
  require(observed_coarse.concordant == observed_coarse.total_blocks,
          "measurement-error map should be fully concordant at k=2");
  const auto true_fine =
      concordance(displaced, AggregationSpec(1, 0), OutcomeView::kTrue);
  require(true_fine.concordant == true_fine.total_blocks,
          "true-outcome view should be fully concordant at k=1");

  const PlantedMap lines = dividing_line_demo_map();
  const auto s0 = concordance(lines, AggregationSpec(2, 0));
  const auto s1 = concordance(lines, AggregationSpec(2, 1));
  const double ratio0 = static_cast<double>(s0.concordant) / s0.total_blocks;
  const double ratio1 = static_cast<double>(s1.concordant) / s1.total_blocks;
  require(ratio0 != ratio1, "no shift dependence in the dividing-line fixture");

  // oracle equivalence across random small maps, every admissible spec
  testsupport::TestRng rng(5150);
  for (int trial = 0; trial < 150; ++trial) {
    PlantedMap map;
    map.width = rng.int_in(1, 8);
    map.height = rng.int_in(1, 8);
    const int n_marks = rng.int_in(0, 5);
    for (int i = 0; i < n_marks; ++i) {
      map.x_cells.insert(
          {rng.int_in(0, map.height - 1), rng.int_in(0, map.width - 1)});
      map.y_cells.insert(
          {rng.int_in(0, map.height - 1), rng.int_in(0, map.width - 1)});
    }
    map.y_true_cells = map.y_cells;
    for (int k = 1; k <= std::max(map.width, map.height); ++k) {
      for (int s = 0; s < k; ++s) {
        const auto got = concordance(map, AggregationSpec(k, s));
        const auto expected = testsupport::concordance_naive(map, k, s);
        require(got.concordant == expected.first &&
                    got.total_blocks == expected.second,
                "concordance disagrees with exhaustive enumeration");
      }
    }
  }
}

// ---------------------------------------------------------------- criterion 5

void glm_correctness() {
  testsupport::TestRng rng(77001);
  int fits = 0;
  while (fits < 200) {
    const int n = rng.int_in(30, 200);
    const int n_cov = rng.int_in(1, 5);

    std::vector<std::vector<double>> rows;
    std::vector<double> response;
    std::vector<double> truth(static_cast<std::size_t>(n_cov) + 1);
    for (auto& b : truth) b = rng.normal() * 0.7;
    for (int i = 0; i < n; ++i) {
      std::vector<double> row{1.0};
      for (int j = 0; j < n_cov; ++j) row.push_back(rng.normal());
      double eta = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) eta += truth[j] * row[j];
      response.push_back(rng.uniform() < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0);
      rows.push_back(std::move(row));
    }
    double ones = 0.0;
    for (const double y : response) ones += y;
    if (ones < 5.0 || ones > n - 5.0) continue;

    DesignMatrix design;
    design.column_names.emplace_back("(Intercept)");
    for (int j = 0; j < n_cov; ++j) {
      design.column_names.push_back("x" + std::to_string(j));
    }
    design.predictors.resize(n, n_cov + 1);
    design.response.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= n_cov; ++j) {
        design.predictors(i, j) = rows[static_cast<std::size_t>(i)]
                                      [static_cast<std::size_t>(j)];
      }
      design.response(i) = response[static_cast<std::size_t>(i)];
    }

    FitOptions options;
    options.max_iter = 200;  // near-separated draws converge slowly
    FitResult fit;
    try {
      fit = fit_logit(design, options);
    } catch (const SeparationError&) {
      continue;  // no finite optimum to compare against
    }
    require(fit.converged, "fit did not converge on a well-posed design");

    const auto oracle = testsupport::fit_logit_newton(rows, response);
    require(oracle.converged, "oracle did not converge");
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
      require(std::abs(fit.coefficients[j] - oracle.coefficients[j]) < 1e-6,
              "coefficient " + std::to_string(j) + " differs from the oracle by " +
                  fmt(std::abs(fit.coefficients[j] - oracle.coefficients[j])));
    }

    const auto score = testsupport::logit_score(rows, response, fit.coefficients);
    for (const double g : score) {
      require(std::abs(g) <= 1e-8,
              "score max-norm " + fmt(std::abs(g)) + " exceeds 1e-8 at the optimum");
    }

    // scale equivariance: rescale one covariate by 10
    DesignMatrix scaled = design;
    const int target = 1;
    scaled.predictors.col(target) *= 10.0;
    const FitResult refit = fit_logit(scaled, options);
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
      const double expected = j == static_cast<std::size_t>(target)
                                  ? fit.coefficients[j] / 10.0
                                  : fit.coefficients[j];
      require(std::abs(refit.coefficients[j] - expected) < 1e-8,
              "coefficients not scale equivariant within 1e-8");
      require(std::abs(refit.z_values[j] - fit.z_values[j]) < 1e-8,
              "z values changed under rescaling");
    }
    ++fits;
  }

  for (int i = 0; i <= 50; ++i) {
    const double z = -6.0 + 12.0 * static_cast<double>(i) / 50.0;
    const double expected =
        static_cast<double>(testsupport::normal_upper_tail_series(z));
    require(std::abs(one_tailed_p_positive(z) - expected) < 1e-10,
            "one_tailed_p_positive deviates from the series oracle at z=" + fmt(z));
  }
}

// ---------------------------------------------------------------- criterion 6

void sampling_exactness() {
  std::vector<GridPanel::Record> records;
  std::int64_t row = 0;
  for (int i = 0; i < 1000; ++i) records.push_back({{row++, 0, 0}, {0.0, 0.0}});
  for (int i = 0; i < 7; ++i) records.push_back({{row++, 0, 0}, {1.0, 1.0}});
  const GridPanel panel({{"y", VariableRole::kOutcomeBinary},
                         {"x", VariableRole::kTreatmentBinary}},
                        55.0, std::move(records));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GridPanel sample = subsample(panel, 0.05, seed);
    int positives = 0;
    int negatives = 0;
    for (std::size_t r = 0; r < sample.size(); ++r) {
      if (sample.value(r, 0) == 1.0) {
        ++positives;
      } else {
        ++negatives;
      }
    }
    require(positives == 7, "a positive record was dropped");
    require(negatives == 50, "retained " + std::to_string(negatives) +
                                 " negatives, expected exactly 50");
  }
}

// ---------------------------------------------------------------- criterion 7

void end_to_end_determinism(const std::string& cli) {
  require(!cli.empty(), "CLI binary path not provided (argv[1])");
  testsupport::TempDir dir("gridsweep-accept");
  const auto q = [](const std::filesystem::path& p) {
    return "'" + p.string() + "'";
  };

  require(testsupport::run_command(cli + " synth --scenario planted-effect --out " +
                                   q(dir.file("p.csv")) + " > /dev/null") == 0,
          "synth invocation failed");

  const std::string base = cli + " sweep --panel " + q(dir.file("p.csv")) +
                           " --config " + q(dir.file("p.config.json")) +
                           " -K 3 --keep-rate 0.25 --subsamples 8 --seed 2201";
  require(testsupport::run_command(base + " --jobs 1 --out " + q(dir.file("a")) +
                                   " > /dev/null") == 0,
          "first sweep failed");
  require(testsupport::run_command(base + " --jobs 1 --out " + q(dir.file("b")) +
                                   " > /dev/null") == 0,
          "second sweep failed");
  require(testsupport::run_command(base + " --jobs 4 --out " + q(dir.file("c")) +
                                   " > /dev/null") == 0,
          "parallel sweep failed");

  for (const char* name : {"results.csv", "summary.csv", "estimates_pshade.svg",
                           "estimates_significance.svg", "manifest.json"}) {
    const std::string a = testsupport::read_file(dir.file("a") / name);
    require(!a.empty(), std::string(name) + " missing or empty");
    require(a == testsupport::read_file(dir.file("b") / name),
            std::string(name) + " differs between identical invocations");
    require(a == testsupport::read_file(dir.file("c") / name),
            std::string(name) + " differs under a different --jobs setting");
  }
}

// ---------------------------------------------------------------- criterion 8

void planted_effect_recovery() {
  const GridPanel panel = make_planted_effect_panel();

  SweepConfig config;
  config.max_multiplier = 3;
  config.plan = {0.25, 10, 7};
  config.model_variables = {"x", "z1"};
  config.treatment_name = "x";
  const SweepResult result = run_sweep(panel, config, 0);

  std::map<int, std::vector<double>> by_multiplier;
  std::map<std::pair<int, int>, std::vector<double>> by_spec;
  std::size_t failures = 0;
  for (const auto& row : result.rows) {
    if (row.error != FitErrorCode::kNone) {
      ++failures;
      continue;
    }
    by_multiplier[row.multiplier].push_back(row.coefficient);
    by_spec[{row.multiplier, row.shift}].push_back(row.coefficient);
  }
  require(failures <= result.rows.size() / 10,
          "too many failed fits for a meaningful comparison");

  const auto mean = [](const std::vector<double>& values) {
    double sum = 0.0;
    for (const double v : values) sum += v;
    return sum / static_cast<double>(values.size());
  };
  require(!by_multiplier[1].empty() && !by_multiplier[2].empty(),
          "missing estimates at k=1 or k=2");
  const double mean_k1 = mean(by_multiplier[1]);
  const double mean_k2 = mean(by_multiplier[2]);
  require(mean_k2 > mean_k1,
          "mean estimate did not increase from k=1 (" + fmt(mean_k1) +
              ") to k=2 (" + fmt(mean_k2) + ")");

  for (const int k : {2, 3}) {
    std::vector<double> shift_means;
    for (int s = 0; s < k; ++s) {
      const auto& coefs = by_spec[{k, s}];
      require(!coefs.empty(), "no estimates for a shift at k=" + std::to_string(k));
      shift_means.push_back(mean(coefs));
    }
    const auto [lo, hi] = std::minmax_element(shift_means.begin(), shift_means.end());
    require(*hi - *lo > 0.0,
            "between-shift variance is zero at k=" + std::to_string(k));
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, "geometry arithmetic", geometry_arithmetic);
  criterion(2, "spec enumeration and sweep row count", spec_enumeration_and_row_count);
  criterion(3, "aggregation-rule property suite (1000 cases)", aggregation_rule_suite);
  criterion(4, "concordance phenomena with exhaustive oracle", concordance_phenomena);
  criterion(5, "logistic regression vs independent oracle", glm_correctness);
  criterion(6, "rare-event sampling exactness (100 seeds)", sampling_exactness);
  criterion(7, "end-to-end determinism across runs and --jobs",
            [&] { end_to_end_determinism(cli); });
  criterion(8, "planted effect recovered by coarsening", planted_effect_recovery);

  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
