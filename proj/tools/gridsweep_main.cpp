#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridsweep/aggregate.hpp"
#include "gridsweep/errors.hpp"
#include "gridsweep/io.hpp"
#include "gridsweep/report.hpp"
#include "gridsweep/sweep.hpp"
#include "gridsweep/synth.hpp"
#include "gridsweep/version.hpp"

namespace fs = std::filesystem;

namespace {

struct SweepArgs {
  std::string panel_path;
  std::string config_path;
  std::string manifest_path;
  std::string out_dir;
  int max_multiplier = 6;
  double keep_rate = 0.05;
  int n_subsamples = 30;
  std::uint64_t base_seed = 42;
  double alpha = 0.05;
  std::string tail = "two";
  int jobs = 0;
};

nlohmann::json build_manifest(const SweepArgs& args,
                              const std::vector<std::string>& model_variables,
                              const gridsweep::RoleConfig& config) {
  // Parallelism is deliberately absent: results do not depend on it.
  return nlohmann::json{
      {"tool_version", std::string(gridsweep::kToolName) + " " + gridsweep::kVersion},
      {"panel", args.panel_path},
      {"config", args.config_path},
      {"max_multiplier", args.max_multiplier},
      {"keep_rate", args.keep_rate},
      {"n_subsamples", args.n_subsamples},
      {"base_seed", args.base_seed},
      {"alpha", args.alpha},
      {"tail", args.tail},
      {"model_variables", model_variables},
      {"outcome", config.outcome},
      {"treatment", config.treatment},
  };
}

void load_manifest(SweepArgs& args) {
  std::ifstream in(args.manifest_path);
  if (!in) {
    throw gridsweep::IoError("cannot open manifest '" + args.manifest_path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
    args.panel_path = doc.at("panel").get<std::string>();
    args.config_path = doc.at("config").get<std::string>();
    args.max_multiplier = doc.at("max_multiplier").get<int>();
    args.keep_rate = doc.at("keep_rate").get<double>();
    args.n_subsamples = doc.at("n_subsamples").get<int>();
    args.base_seed = doc.at("base_seed").get<std::uint64_t>();
    args.alpha = doc.at("alpha").get<double>();
    args.tail = doc.at("tail").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw gridsweep::ConfigError("manifest '" + args.manifest_path +
                                 "' is malformed: " + e.what());
  }
}

int run_aggregate(const std::string& panel_path, const std::string& config_path,
                  int multiplier, int shift, const std::string& out_path) {
  const gridsweep::GridPanel panel = gridsweep::load_panel(panel_path, config_path);
  const gridsweep::AggregationSpec spec(multiplier, shift);
  gridsweep::write_panel(gridsweep::aggregate(panel, spec), out_path);
  return 0;
}

int run_sweep_cmd(SweepArgs args) {
  if (!args.manifest_path.empty()) load_manifest(args);

  const gridsweep::RoleConfig config = gridsweep::load_role_config(args.config_path);
  const gridsweep::GridPanel panel =
      gridsweep::load_panel(args.panel_path, args.config_path);
  const gridsweep::Tail tail = gridsweep::tail_from_string(args.tail);
  if (!(args.alpha > 0.0) || !(args.alpha < 1.0)) {
    throw gridsweep::InvalidArgumentError("alpha must be in (0, 1)");
  }

  // Model covariates: every declared variable except the outcome, in file
  // (header) order.
  std::vector<std::string> model_variables;
  for (const auto& var : panel.variables()) {
    if (var.role != gridsweep::VariableRole::kOutcomeBinary) {
      model_variables.push_back(var.name);
    }
  }

  gridsweep::SweepConfig sweep_config;
  sweep_config.max_multiplier = args.max_multiplier;
  sweep_config.plan = {args.keep_rate, args.n_subsamples, args.base_seed};
  sweep_config.model_variables = model_variables;
  sweep_config.treatment_name = config.treatment;

  const gridsweep::SweepResult result =
      gridsweep::run_sweep(panel, sweep_config, args.jobs);

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  gridsweep::write_results(result, out_dir / "results.csv");
  gridsweep::write_summary(gridsweep::summarize(result, args.alpha),
                           out_dir / "summary.csv");

  gridsweep::PlotSpec shade;
  shade.mode = gridsweep::PlotMode::kPShade;
  shade.alpha = args.alpha;
  shade.tail = tail;
  gridsweep::PlotSpec significance = shade;
  significance.mode = gridsweep::PlotMode::kSignificance;

  const auto write_text = [](const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gridsweep::IoError("cannot open '" + path.string() + "'");
    out << text;
    if (!out) throw gridsweep::IoError("failed writing '" + path.string() + "'");
  };
  write_text(out_dir / "estimates_pshade.svg",
             gridsweep::render_scatter(result, shade));
  write_text(out_dir / "estimates_significance.svg",
             gridsweep::render_scatter(result, significance));
  write_text(out_dir / "manifest.json",
             build_manifest(args, model_variables, config).dump(2) + "\n");

  std::size_t failed = 0;
  for (const auto& row : result.rows) {
    if (row.error != gridsweep::FitErrorCode::kNone) ++failed;
  }
  std::cout << result.rows.size() << " fits (" << failed << " failed) -> "
            << out_dir.string() << "\n";
  return 0;
}

int run_synth(const std::string& scenario, const std::string& out_path,
              std::string config_out) {
  const gridsweep::GridPanel panel = gridsweep::make_scenario(scenario);
  gridsweep::write_panel(panel, out_path);

  if (config_out.empty()) {
    config_out = fs::path(out_path).replace_extension(".config.json").string();
  }
  gridsweep::RoleConfig config;
  config.base_side_km = panel.base_side_km();
  for (const auto& var : panel.variables()) {
    config.roles.emplace(var.name, var.role);
    if (var.role == gridsweep::VariableRole::kOutcomeBinary) config.outcome = var.name;
    if (var.role == gridsweep::VariableRole::kTreatmentBinary) {
      config.treatment = var.name;
    }
  }
  gridsweep::write_role_config(config, config_out);
  std::cout << out_path << " " << config_out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-cell aggregation robustness sweeps for gridded panel data"};
  app.set_version_flag("--version",
                       std::string(gridsweep::kToolName) + " " + gridsweep::kVersion);
  app.require_subcommand(1);

  // aggregate
  std::string agg_panel;
  std::string agg_config;
  std::string agg_out;
  int agg_multiplier = 2;
  int agg_shift = 0;
  CLI::App* aggregate_cmd =
      app.add_subcommand("aggregate", "Aggregate a panel into k x k blocks");
  aggregate_cmd->add_option("--panel", agg_panel, "panel CSV")->required();
  aggregate_cmd->add_option("--config", agg_config, "role config JSON")->required();
  aggregate_cmd->add_option("--multiplier,-k", agg_multiplier, "cell-size multiplier")
      ->required();
  aggregate_cmd->add_option("--shift,-s", agg_shift, "diagonal shift (0 <= s < k)");
  aggregate_cmd->add_option("--out", agg_out, "output panel CSV")->required();

  // sweep
  SweepArgs sweep_args;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run the full (k, s, subsample) robustness sweep");
  sweep_cmd->add_option("--panel", sweep_args.panel_path, "panel CSV");
  sweep_cmd->add_option("--config", sweep_args.config_path, "role config JSON");
  sweep_cmd->add_option("--manifest", sweep_args.manifest_path,
                        "re-run parameters from a previous manifest.json");
  sweep_cmd->add_option("--max-multiplier,-K", sweep_args.max_multiplier,
                        "largest cell-size multiplier");
  sweep_cmd->add_option("--keep-rate", sweep_args.keep_rate,
                        "retained fraction of negative-outcome records");
  sweep_cmd->add_option("--subsamples", sweep_args.n_subsamples,
                        "subsamples per specification");
  sweep_cmd->add_option("--seed", sweep_args.base_seed, "base seed");
  sweep_cmd->add_option("--alpha", sweep_args.alpha, "significance threshold");
  sweep_cmd->add_option("--tail", sweep_args.tail, "one or two")
      ->check(CLI::IsMember({"one", "two"}));
  sweep_cmd->add_option("--jobs,-j", sweep_args.jobs,
                        "worker threads (0 = all cores)");
  sweep_cmd->add_option("--out", sweep_args.out_dir, "output directory")->required();

  // synth
  std::string synth_scenario;
  std::string synth_out;
  std::string synth_config_out;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Emit a synthetic demonstration panel");
  synth_cmd->add_option("--scenario", synth_scenario, "scenario name")->required();
  synth_cmd->add_option("--out", synth_out, "output panel CSV")->required();
  synth_cmd->add_option("--config-out", synth_config_out,
                        "role config path (default: <out>.config.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (aggregate_cmd->parsed()) {
      return run_aggregate(agg_panel, agg_config, agg_multiplier, agg_shift, agg_out);
    }
    if (sweep_cmd->parsed()) {
      if (sweep_args.manifest_path.empty() &&
          (sweep_args.panel_path.empty() || sweep_args.config_path.empty())) {
        std::cerr << "error: sweep requires --panel and --config (or --manifest)\n";
        return 2;
      }
      return run_sweep_cmd(sweep_args);
    }
    if (synth_cmd->parsed()) {
      return run_synth(synth_scenario, synth_out, synth_config_out);
    }
  } catch (const gridsweep::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
