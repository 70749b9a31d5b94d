#include "gridsweep/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gridsweep {

bool is_binary_role(VariableRole role) {
  switch (role) {
    case VariableRole::kOutcomeBinary:
    case VariableRole::kTreatmentBinary:
    case VariableRole::kCellBinary:
      return true;
    case VariableRole::kCellContinuous:
    case VariableRole::kCountryContinuous:
      return false;
  }
  return false;
}

std::string_view to_string(VariableRole role) {
  switch (role) {
    case VariableRole::kOutcomeBinary: return "outcome_binary";
    case VariableRole::kTreatmentBinary: return "treatment_binary";
    case VariableRole::kCellBinary: return "cell_binary";
    case VariableRole::kCellContinuous: return "cell_continuous";
    case VariableRole::kCountryContinuous: return "country_continuous";
  }
  return "cell_continuous";
}

VariableRole role_from_string(std::string_view text) {
  if (text == "outcome_binary") return VariableRole::kOutcomeBinary;
  if (text == "treatment_binary") return VariableRole::kTreatmentBinary;
  if (text == "cell_binary") return VariableRole::kCellBinary;
  if (text == "cell_continuous") return VariableRole::kCellContinuous;
  if (text == "country_continuous") return VariableRole::kCountryContinuous;
  throw ConfigError("unknown variable role '" + std::string(text) +
                    "' (expected one of outcome_binary, treatment_binary, "
                    "cell_binary, cell_continuous, country_continuous)");
}

AggregationSpec::AggregationSpec(int multiplier_in, int shift_in)
    : multiplier(multiplier_in), shift(shift_in) {
  if (multiplier < 1) {
    throw InvalidArgumentError("aggregation multiplier must be >= 1, got " +
                               std::to_string(multiplier));
  }
  if (shift < 0 || shift >= multiplier) {
    throw InvalidArgumentError("aggregation shift must satisfy 0 <= s < k, got s=" +
                               std::to_string(shift) + " with k=" +
                               std::to_string(multiplier));
  }
}

namespace {

std::string key_to_string(const CellKey& key) {
  std::ostringstream out;
  out << "(" << key.row << ", " << key.col << ", " << key.period << ")";
  return out.str();
}

}  // namespace

GridPanel::GridPanel(std::vector<VariableSpec> variables, double base_side_km,
                     std::vector<Record> records)
    : variables_(std::move(variables)), base_side_km_(base_side_km) {
  if (base_side_km_ <= 0.0 || !std::isfinite(base_side_km_)) {
    throw InvalidArgumentError("base_side_km must be positive and finite");
  }
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& var = variables_[i];
    if (var.name.empty()) throw ConfigError("variable with empty name");
    if (!name_index_.emplace(var.name, i).second) {
      throw ConfigError("duplicate variable name '" + var.name + "'");
    }
    if (var.role == VariableRole::kOutcomeBinary) {
      if (outcome_index_) {
        throw ConfigError("more than one outcome variable ('" +
                          variables_[*outcome_index_].name + "' and '" + var.name + "')");
      }
      outcome_index_ = i;
    }
    if (var.role == VariableRole::kTreatmentBinary) {
      if (treatment_index_) {
        throw ConfigError("more than one treatment variable ('" +
                          variables_[*treatment_index_].name + "' and '" + var.name + "')");
      }
      treatment_index_ = i;
    }
  }

  std::sort(records.begin(), records.end(),
            [](const Record& a, const Record& b) { return a.first < b.first; });

  keys_.reserve(records.size());
  values_.reserve(records.size() * variables_.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& [key, vals] = records[r];
    if (key.row < 0 || key.col < 0) {
      throw InvalidArgumentError("cell indices must be non-negative, got " +
                                 key_to_string(key));
    }
    if (r > 0 && key == keys_.back()) {
      throw DataError("duplicate cell key " + key_to_string(key));
    }
    if (vals.size() != variables_.size()) {
      throw ValidationError("record " + key_to_string(key) + " has " +
                            std::to_string(vals.size()) + " values, expected " +
                            std::to_string(variables_.size()));
    }
    for (std::size_t v = 0; v < vals.size(); ++v) {
      const double value = vals[v];
      if (is_binary_role(variables_[v].role) && !is_missing(value) &&
          value != 0.0 && value != 1.0) {
        throw ValidationError("binary variable '" + variables_[v].name +
                              "' has value outside {0, 1, MISSING} at " +
                              key_to_string(key));
      }
    }
    keys_.push_back(key);
    values_.insert(values_.end(), vals.begin(), vals.end());
  }
}

std::optional<std::size_t> GridPanel::index_of(std::string_view name) const {
  auto it = name_index_.find(std::string(name));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const GridPanel& a, const GridPanel& b) {
  if (a.variables_ != b.variables_) return false;
  if (a.base_side_km_ != b.base_side_km_) return false;
  if (a.keys_ != b.keys_) return false;
  if (a.values_.size() != b.values_.size()) return false;
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    if (!value_equal(a.values_[i], b.values_[i])) return false;
  }
  return true;
}

double aggregated_area_km2(double base_side_km, int multiplier) {
  if (base_side_km <= 0.0 || !std::isfinite(base_side_km)) {
    throw InvalidArgumentError("base_side_km must be positive and finite");
  }
  if (multiplier < 1) {
    throw InvalidArgumentError("multiplier must be >= 1, got " +
                               std::to_string(multiplier));
  }
  const double side = base_side_km * multiplier;
  return side * side;
}

double block_diagonal_km(double base_side_km, int multiplier) {
  if (base_side_km <= 0.0 || !std::isfinite(base_side_km)) {
    throw InvalidArgumentError("base_side_km must be positive and finite");
  }
  if (multiplier < 1) {
    throw InvalidArgumentError("multiplier must be >= 1, got " +
                               std::to_string(multiplier));
  }
  return base_side_km * multiplier * std::sqrt(2.0);
}

}  // namespace gridsweep
