#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gridsweep/sweep.hpp"

namespace gridsweep {

enum class PlotMode { kPShade, kSignificance };
enum class Tail { kOneTailed, kTwoTailed };

std::string_view to_string(Tail tail);
Tail tail_from_string(std::string_view text);

/// Rendering options for the estimate-by-specification scatter.
/// kPShade maps the one-tailed p-value monotonically to symbol darkness
/// (p = 0 darkest); kSignificance colors symbols by p < alpha under the
/// chosen tail. Failed fits render as hollow markers either way.
struct PlotSpec {
  PlotMode mode = PlotMode::kPShade;
  double alpha = 0.05;
  Tail tail = Tail::kTwoTailed;
  int width = 920;
  int height = 520;
  int margin_left = 70;
  int margin_right = 180;
  int margin_top = 30;
  int margin_bottom = 64;
};

/// Render the sweep as an SVG 1.1 document: one column of symbols per (k, s)
/// in canonical order, y position on the log-odds scale. Deterministic
/// byte-for-byte for a given (result, spec). Degenerate inputs produce a
/// valid document with axes and legend only.
std::string render_scatter(const SweepResult& result, const PlotSpec& spec);

struct SummaryRow {
  int multiplier = 1;
  int shift = 0;
  int n_rows = 0;
  int n_failed = 0;
  double coef_mean = kMissing;
  double coef_min = kMissing;
  double coef_max = kMissing;
  double share_sig_one_tailed = kMissing;  // among successful fits, p_one < alpha
  double share_sig_two_tailed = kMissing;  // among successful fits, p_two < alpha
};

/// Per-specification summary: counts, mean and range of the treatment
/// coefficient, and the share of fits significant at `alpha` under each tail.
std::vector<SummaryRow> summarize(const SweepResult& result, double alpha = 0.05);

/// Delimited text mirroring the results-file conventions.
void write_summary(const std::vector<SummaryRow>& rows,
                   const std::filesystem::path& path);

}  // namespace gridsweep
