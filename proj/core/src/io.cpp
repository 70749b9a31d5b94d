#include "gridsweep/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace gridsweep {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::int64_t parse_int(const std::string& field, const std::string& column,
                       std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(field.c_str(), &end, 10);
  if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE) {
    throw DataError("line " + std::to_string(line_no) + ": cannot parse '" +
                    field + "' as integer in column " + column);
  }
  return value;
}

double parse_value(const std::string& field, const std::string& column,
                   std::size_t line_no) {
  if (field.empty() || field == "NA") return kMissing;
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || errno == ERANGE) {
    throw DataError("line " + std::to_string(line_no) + ": cannot parse '" +
                    field + "' as number in column " + column);
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

struct KeyHash {
  std::size_t operator()(const CellKey& key) const {
    std::size_t h = std::hash<std::int64_t>{}(key.row);
    h ^= std::hash<std::int64_t>{}(key.col) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<std::int64_t>{}(key.period) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace

std::string format_value(double v) {
  if (is_missing(v)) return "";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

RoleConfig load_role_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse '" + path.string() + "': " + e.what());
  }

  RoleConfig config;
  try {
    config.base_side_km = doc.at("base_side_km").get<double>();
    config.outcome = doc.at("outcome").get<std::string>();
    config.treatment = doc.at("treatment").get<std::string>();
    for (const auto& [name, role] : doc.at("variables").items()) {
      config.roles.emplace(name, role_from_string(role.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is malformed: " + e.what());
  }

  if (config.base_side_km <= 0.0) {
    throw ConfigError("base_side_km must be positive");
  }
  std::size_t n_outcome = 0;
  std::size_t n_treatment = 0;
  for (const auto& [name, role] : config.roles) {
    if (role == VariableRole::kOutcomeBinary) ++n_outcome;
    if (role == VariableRole::kTreatmentBinary) ++n_treatment;
  }
  if (n_outcome != 1) {
    throw ConfigError("config must declare exactly one outcome_binary variable");
  }
  if (n_treatment != 1) {
    throw ConfigError("config must declare exactly one treatment_binary variable");
  }
  const auto outcome_it = config.roles.find(config.outcome);
  if (outcome_it == config.roles.end() ||
      outcome_it->second != VariableRole::kOutcomeBinary) {
    throw ConfigError("outcome designation '" + config.outcome +
                      "' does not name the outcome_binary variable");
  }
  const auto treatment_it = config.roles.find(config.treatment);
  if (treatment_it == config.roles.end() ||
      treatment_it->second != VariableRole::kTreatmentBinary) {
    throw ConfigError("treatment designation '" + config.treatment +
                      "' does not name the treatment_binary variable");
  }
  return config;
}

void write_role_config(const RoleConfig& config, const std::filesystem::path& path) {
  nlohmann::json variables = nlohmann::json::object();
  for (const auto& [name, role] : config.roles) {
    variables[name] = std::string(to_string(role));
  }
  const nlohmann::json doc = {
      {"base_side_km", config.base_side_km},
      {"variables", variables},
      {"outcome", config.outcome},
      {"treatment", config.treatment},
  };
  auto out = open_output(path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

GridPanel load_panel(const std::filesystem::path& panel_path,
                     const std::filesystem::path& config_path) {
  const RoleConfig config = load_role_config(config_path);
  auto in = open_input(panel_path);

  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("'" + panel_path.string() + "' is empty; header required");
  }
  const auto header = split_fields(strip_cr(line));
  if (header.size() < 3 || header[0] != "row" || header[1] != "col" ||
      header[2] != "period") {
    throw SchemaError("header must start with row,col,period; got '" +
                      strip_cr(line) + "'");
  }

  std::vector<VariableSpec> variables;
  for (std::size_t i = 3; i < header.size(); ++i) {
    const auto role = config.roles.find(header[i]);
    if (role == config.roles.end()) {
      throw SchemaError("column '" + header[i] + "' has no configured role");
    }
    variables.push_back({header[i], role->second});
  }
  if (variables.size() != config.roles.size()) {
    for (const auto& [name, role] : config.roles) {
      if (std::find_if(variables.begin(), variables.end(), [&](const auto& v) {
            return v.name == name;
          }) == variables.end()) {
        throw SchemaError("configured variable '" + name + "' missing from file");
      }
    }
  }

  std::vector<GridPanel::Record> records;
  std::unordered_map<CellKey, std::size_t, KeyHash> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    CellKey key{parse_int(fields[0], "row", line_no),
                parse_int(fields[1], "col", line_no),
                parse_int(fields[2], "period", line_no)};
    const auto [it, inserted] = seen.emplace(key, line_no);
    if (!inserted) {
      throw DataError("line " + std::to_string(line_no) + ": duplicate key (" +
                      fields[0] + "," + fields[1] + "," + fields[2] +
                      "), first seen at line " + std::to_string(it->second));
    }
    std::vector<double> values(variables.size());
    for (std::size_t v = 0; v < variables.size(); ++v) {
      const double value = parse_value(fields[v + 3], variables[v].name, line_no);
      if (is_binary_role(variables[v].role) && !is_missing(value) &&
          value != 0.0 && value != 1.0) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": binary column '" + variables[v].name +
                              "' has value '" + fields[v + 3] +
                              "' outside {0, 1, NA}");
      }
      values[v] = value;
    }
    records.emplace_back(key, std::move(values));
  }

  return GridPanel(std::move(variables), config.base_side_km, std::move(records));
}

void write_panel(const GridPanel& panel, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "row,col,period";
  for (const auto& var : panel.variables()) out << "," << var.name;
  out << "\n";
  for (std::size_t r = 0; r < panel.size(); ++r) {
    const auto& key = panel.key(r);
    out << key.row << "," << key.col << "," << key.period;
    for (const double v : panel.values(r)) out << "," << format_value(v);
    out << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_results(const SweepResult& result, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "k,s,m,seed,n_obs,coefficient,se,z,p_one_tailed,converged,error_code\n";
  for (const auto& row : result.rows) {
    out << row.multiplier << "," << row.shift << "," << row.subsample_index << ","
        << row.seed << "," << row.n_obs << "," << format_value(row.coefficient)
        << "," << format_value(row.standard_error) << ","
        << format_value(row.z_value) << "," << format_value(row.p_one_tailed)
        << "," << (row.converged ? "1" : "0") << "," << to_string(row.error)
        << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

SweepResult read_results(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("'" + path.string() + "' is empty; header required");
  }
  if (strip_cr(line) !=
      "k,s,m,seed,n_obs,coefficient,se,z,p_one_tailed,converged,error_code") {
    throw SchemaError("unexpected results header in '" + path.string() + "'");
  }

  SweepResult result;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 11) {
      throw DataError("line " + std::to_string(line_no) + ": expected 11 fields");
    }
    SweepRow row;
    row.multiplier = static_cast<int>(parse_int(fields[0], "k", line_no));
    row.shift = static_cast<int>(parse_int(fields[1], "s", line_no));
    row.subsample_index = static_cast<int>(parse_int(fields[2], "m", line_no));
    row.seed = static_cast<std::uint64_t>(
        std::strtoull(fields[3].c_str(), nullptr, 10));
    row.n_obs = static_cast<int>(parse_int(fields[4], "n_obs", line_no));
    row.coefficient = parse_value(fields[5], "coefficient", line_no);
    row.standard_error = parse_value(fields[6], "se", line_no);
    row.z_value = parse_value(fields[7], "z", line_no);
    row.p_one_tailed = parse_value(fields[8], "p_one_tailed", line_no);
    row.converged = parse_int(fields[9], "converged", line_no) != 0;
    row.error = fit_error_code_from_string(fields[10]);
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace gridsweep
