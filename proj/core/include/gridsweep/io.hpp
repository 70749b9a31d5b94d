#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "gridsweep/grid.hpp"
#include "gridsweep/sweep.hpp"

namespace gridsweep {

/// Variable-role configuration, read from a JSON document of the form
///   {
///     "base_side_km": 55.0,
///     "variables": {"onset": "outcome_binary", "drought": "treatment_binary", ...},
///     "outcome": "onset",
///     "treatment": "drought"
///   }
/// Exactly one variable must carry the outcome role and one the treatment
/// role, and the explicit designations must agree with the role map.
struct RoleConfig {
  double base_side_km = 0.0;
  std::map<std::string, VariableRole> roles;
  std::string outcome;
  std::string treatment;
};

RoleConfig load_role_config(const std::filesystem::path& path);
void write_role_config(const RoleConfig& config, const std::filesystem::path& path);

/// Load a panel from a delimited text file with mandatory leading columns
/// row,col,period and one column per configured variable. An empty field or
/// the literal NA denotes MISSING. Variable order follows the file header.
///
/// Throws SchemaError for a malformed header or a column set that does not
/// match the config; DataError (with line numbers) for duplicate keys and
/// unparseable fields; ValidationError (naming column and line) for
/// out-of-domain binary values.
GridPanel load_panel(const std::filesystem::path& panel_path,
                     const std::filesystem::path& config_path);

/// Inverse of load_panel for a panel already in memory: canonical record
/// order, MISSING written as an empty field, floats with up to 17 significant
/// digits so values round-trip exactly.
void write_panel(const GridPanel& panel, const std::filesystem::path& path);

/// Write the sweep table with columns
///   k,s,m,seed,n_obs,coefficient,se,z,p_one_tailed,converged,error_code
/// in canonical (k, s, m) order. Floats carry 17 significant digits; failed
/// fits have empty estimate fields and a non-empty error_code.
void write_results(const SweepResult& result, const std::filesystem::path& path);

SweepResult read_results(const std::filesystem::path& path);

/// %.17g rendering shared by every writer; MISSING becomes the empty string.
std::string format_value(double v);

}  // namespace gridsweep
