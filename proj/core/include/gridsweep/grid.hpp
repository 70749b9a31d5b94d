#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridsweep/errors.hpp"

namespace gridsweep {

/// Sentinel for a missing observation. Stored as quiet NaN so every variable,
/// binary or continuous, fits in one double slot.
inline const double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

/// Equality that treats MISSING as equal to itself.
inline bool value_equal(double a, double b) {
  if (is_missing(a) && is_missing(b)) return true;
  return a == b;
}

/// Identifies one observation: grid cell (row, col) in one period.
/// Row 0 is the northern edge, column 0 the western edge.
struct CellKey {
  std::int64_t row = 0;
  std::int64_t col = 0;
  std::int64_t period = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

enum class VariableRole {
  kOutcomeBinary,
  kTreatmentBinary,
  kCellBinary,
  kCellContinuous,
  kCountryContinuous,
};

bool is_binary_role(VariableRole role);

/// Canonical spelling used in config files and diagnostics
/// ("outcome_binary", "treatment_binary", ...).
std::string_view to_string(VariableRole role);
VariableRole role_from_string(std::string_view text);

struct VariableSpec {
  std::string name;
  VariableRole role = VariableRole::kCellContinuous;

  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

/// One grid-cell specification: blocks of k x k original cells with the
/// partition origin shifted s original cells toward the south-east.
/// Shifts repeat with period k, so only 0 <= s < k is admitted.
struct AggregationSpec {
  AggregationSpec() = default;
  AggregationSpec(int multiplier, int shift);

  int multiplier = 1;
  int shift = 0;

  friend auto operator<=>(const AggregationSpec&, const AggregationSpec&) = default;
};

/// A panel of grid-cell observations. Immutable after construction; safe to
/// share across threads.
///
/// Construction validates the panel invariants:
///   - (row, col, period) unique, row and col non-negative
///   - every record has one value slot per declared variable
///   - binary-role values are 0, 1, or MISSING
///   - at most one OUTCOME_BINARY and at most one TREATMENT_BINARY variable
class GridPanel {
 public:
  using Record = std::pair<CellKey, std::vector<double>>;

  GridPanel(std::vector<VariableSpec> variables, double base_side_km,
            std::vector<Record> records);

  const std::vector<VariableSpec>& variables() const { return variables_; }
  double base_side_km() const { return base_side_km_; }

  std::size_t size() const { return keys_.size(); }
  std::size_t n_variables() const { return variables_.size(); }

  /// Records are stored in canonical (row, col, period) order.
  const CellKey& key(std::size_t record) const { return keys_[record]; }
  std::span<const double> values(std::size_t record) const {
    return {values_.data() + record * variables_.size(), variables_.size()};
  }
  double value(std::size_t record, std::size_t variable) const {
    return values_[record * variables_.size() + variable];
  }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::optional<std::size_t> outcome_index() const { return outcome_index_; }
  std::optional<std::size_t> treatment_index() const { return treatment_index_; }

  /// Structural equality; MISSING compares equal to MISSING.
  friend bool operator==(const GridPanel& a, const GridPanel& b);

 private:
  std::vector<VariableSpec> variables_;
  double base_side_km_ = 1.0;
  std::vector<CellKey> keys_;
  std::vector<double> values_;  // row-major, size() * n_variables()
  std::unordered_map<std::string, std::size_t> name_index_;
  std::optional<std::size_t> outcome_index_;
  std::optional<std::size_t> treatment_index_;
};

/// Area of one aggregated block: (base_side_km * k)^2.
double aggregated_area_km2(double base_side_km, int multiplier);

/// Diagonal of one aggregated block: base_side_km * k * sqrt(2).
double block_diagonal_km(double base_side_km, int multiplier);

}  // namespace gridsweep
