#include "gridsweep/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "gridsweep/glm.hpp"
#include "gridsweep/io.hpp"

namespace gridsweep {

std::string_view to_string(Tail tail) {
  return tail == Tail::kOneTailed ? "one" : "two";
}

Tail tail_from_string(std::string_view text) {
  if (text == "one") return Tail::kOneTailed;
  if (text == "two") return Tail::kTwoTailed;
  throw ConfigError("tail must be 'one' or 'two', got '" + std::string(text) + "'");
}

namespace {

std::string num(double v, const char* spec = "%.2f") {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), spec, v);
  return buffer;
}

// Symbol darkness for P_SHADE mode: gray level rises linearly with p, so a
// smaller p is strictly darker. Printed at six decimals of a percent.
std::string shade_fill(double p) {
  const double percent = 5.0 + 90.0 * std::clamp(p, 0.0, 1.0);
  const std::string level = num(percent, "%.6f");
  return "rgb(" + level + "%," + level + "%," + level + "%)";
}

struct GroupKey {
  int multiplier;
  int shift;
  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

using Groups = std::map<GroupKey, std::vector<const SweepRow*>>;

Groups group_rows(const SweepResult& result) {
  Groups groups;
  for (const auto& row : result.rows) {
    groups[{row.multiplier, row.shift}].push_back(&row);
  }
  return groups;
}

bool is_success(const SweepRow& row) {
  return row.error == FitErrorCode::kNone && !is_missing(row.coefficient);
}

double p_for_tail(const SweepRow& row, Tail tail) {
  return tail == Tail::kOneTailed ? row.p_one_tailed : two_tailed_p(row.z_value);
}

struct Ticks {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> at;
};

Ticks nice_ticks(double lo, double hi) {
  const double raw_step = (hi - lo) / 6.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw_step)));
  double step = magnitude;
  for (const double mult : {1.0, 2.0, 5.0, 10.0}) {
    step = mult * magnitude;
    if (step >= raw_step) break;
  }
  Ticks ticks;
  ticks.lo = lo;
  ticks.hi = hi;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    ticks.at.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string render_scatter(const SweepResult& result, const PlotSpec& spec) {
  if (!(spec.alpha > 0.0) || !(spec.alpha < 1.0)) {
    throw InvalidArgumentError("alpha must be in (0, 1)");
  }

  const Groups groups = group_rows(result);
  const double plot_left = spec.margin_left;
  const double plot_right = spec.width - spec.margin_right;
  const double plot_top = spec.margin_top;
  const double plot_bottom = spec.height - spec.margin_bottom;
  const double plot_width = plot_right - plot_left;

  // Vertical scale over successful estimates, always spanning zero.
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const auto& row : result.rows) {
    if (!is_success(row)) continue;
    lo = any ? std::min(lo, row.coefficient) : std::min(0.0, row.coefficient);
    hi = any ? std::max(hi, row.coefficient) : std::max(0.0, row.coefficient);
    any = true;
  }
  if (!any) {
    lo = -1.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    const double pad = std::max(1.0, std::abs(hi) * 0.5);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = (hi - lo) * 0.08;
    lo -= pad;
    hi += pad;
  }
  const auto y_of = [&](double value) {
    return plot_bottom - (value - lo) / (hi - lo) * (plot_bottom - plot_top);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << spec.width << "\" height=\"" << spec.height << "\" viewBox=\"0 0 "
      << spec.width << " " << spec.height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" fill=\"white\"/>\n";

  // Axes and ticks.
  svg << "<line x1=\"" << num(plot_left) << "\" y1=\"" << num(plot_top)
      << "\" x2=\"" << num(plot_left) << "\" y2=\"" << num(plot_bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << num(plot_left) << "\" y1=\"" << num(plot_bottom)
      << "\" x2=\"" << num(plot_right) << "\" y2=\"" << num(plot_bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  const Ticks ticks = nice_ticks(lo, hi);
  for (const double t : ticks.at) {
    const double y = y_of(t);
    svg << "<line x1=\"" << num(plot_left - 4) << "\" y1=\"" << num(y)
        << "\" x2=\"" << num(plot_left) << "\" y2=\"" << num(y)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << num(plot_left - 8) << "\" y=\"" << num(y + 3)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
        << num(t, "%.4g") << "</text>\n";
    if (t == 0.0) {
      svg << "<line x1=\"" << num(plot_left) << "\" y1=\"" << num(y)
          << "\" x2=\"" << num(plot_right) << "\" y2=\"" << num(y)
          << "\" stroke=\"#bbbbbb\" stroke-width=\"0.7\" stroke-dasharray=\"4 3\"/>\n";
    }
  }

  const auto n_groups = groups.size();
  std::size_t group_index = 0;
  for (const auto& [key, rows] : groups) {
    const double slot = plot_width / static_cast<double>(n_groups);
    const double center = plot_left + (static_cast<double>(group_index) + 0.5) * slot;
    svg << "<text x=\"" << num(center) << "\" y=\"" << num(plot_bottom + 14)
        << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">"
        << key.multiplier << "." << key.shift << "</text>\n";

    std::size_t i = 0;
    for (const SweepRow* row : rows) {
      const double frac =
          (static_cast<double>(i) + 0.5) / static_cast<double>(rows.size());
      const double x = center + (frac - 0.5) * slot * 0.7;
      if (!is_success(*row)) {
        svg << "<circle class=\"pt failed\" cx=\"" << num(x) << "\" cy=\""
            << num(plot_bottom - 5) << "\" r=\"3.2\" fill=\"none\" "
               "stroke=\"#606060\" stroke-width=\"1\"/>\n";
      } else if (spec.mode == PlotMode::kPShade) {
        svg << "<circle class=\"pt\" cx=\"" << num(x) << "\" cy=\""
            << num(y_of(row->coefficient)) << "\" r=\"3.2\" fill=\""
            << shade_fill(row->p_one_tailed) << "\"/>\n";
      } else {
        const bool significant = p_for_tail(*row, spec.tail) < spec.alpha;
        svg << "<circle class=\"pt " << (significant ? "sig" : "nonsig")
            << "\" cx=\"" << num(x) << "\" cy=\"" << num(y_of(row->coefficient))
            << "\" r=\"3.2\" fill=\"" << (significant ? "#8b0000" : "#c8c8c8")
            << "\"/>\n";
      }
      ++i;
    }
    ++group_index;
  }

  // Axis titles.
  svg << "<text x=\"" << num((plot_left + plot_right) / 2.0) << "\" y=\""
      << num(plot_bottom + 34)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
         "cell-size multiplier k . shift s</text>\n";
  svg << "<text x=\"14\" y=\"" << num((plot_top + plot_bottom) / 2.0)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 14 "
      << num((plot_top + plot_bottom) / 2.0)
      << ")\">treatment estimate (log odds)</text>\n";

  // Legend.
  const double legend_x = plot_right + 16;
  double legend_y = plot_top + 8;
  if (spec.mode == PlotMode::kPShade) {
    svg << "<text x=\"" << num(legend_x) << "\" y=\"" << num(legend_y)
        << "\" font-family=\"sans-serif\" font-size=\"10\">one-tailed p "
           "(positive)</text>\n";
    legend_y += 8;
    for (const double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      legend_y += 14;
      svg << "<circle cx=\"" << num(legend_x + 6) << "\" cy=\"" << num(legend_y)
          << "\" r=\"3.2\" fill=\"" << shade_fill(p) << "\"/>\n";
      svg << "<text x=\"" << num(legend_x + 16) << "\" y=\"" << num(legend_y + 3)
          << "\" font-family=\"sans-serif\" font-size=\"10\">" << num(p, "%.2f")
          << "</text>\n";
    }
  } else {
    svg << "<text x=\"" << num(legend_x) << "\" y=\"" << num(legend_y)
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << to_string(spec.tail)
        << "-tailed, alpha=" << num(spec.alpha, "%.4g") << "</text>\n";
    legend_y += 22;
    svg << "<circle cx=\"" << num(legend_x + 6) << "\" cy=\"" << num(legend_y)
        << "\" r=\"3.2\" fill=\"#8b0000\"/>\n";
    svg << "<text x=\"" << num(legend_x + 16) << "\" y=\"" << num(legend_y + 3)
        << "\" font-family=\"sans-serif\" font-size=\"10\">p &lt; "
        << num(spec.alpha, "%.4g") << "</text>\n";
    legend_y += 14;
    svg << "<circle cx=\"" << num(legend_x + 6) << "\" cy=\"" << num(legend_y)
        << "\" r=\"3.2\" fill=\"#c8c8c8\"/>\n";
    svg << "<text x=\"" << num(legend_x + 16) << "\" y=\"" << num(legend_y + 3)
        << "\" font-family=\"sans-serif\" font-size=\"10\">p &#8805; "
        << num(spec.alpha, "%.4g") << "</text>\n";
  }
  legend_y += 14;
  svg << "<circle cx=\"" << num(legend_x + 6) << "\" cy=\"" << num(legend_y)
      << "\" r=\"3.2\" fill=\"none\" stroke=\"#606060\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << num(legend_x + 16) << "\" y=\"" << num(legend_y + 3)
      << "\" font-family=\"sans-serif\" font-size=\"10\">failed fit</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

std::vector<SummaryRow> summarize(const SweepResult& result, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw InvalidArgumentError("alpha must be in (0, 1)");
  }
  std::vector<SummaryRow> summary;
  for (const auto& [key, rows] : group_rows(result)) {
    SummaryRow out;
    out.multiplier = key.multiplier;
    out.shift = key.shift;
    out.n_rows = static_cast<int>(rows.size());
    double sum = 0.0;
    double min = 0.0;
    double max = 0.0;
    int n_success = 0;
    int n_sig_one = 0;
    int n_sig_two = 0;
    for (const SweepRow* row : rows) {
      if (!is_success(*row)) {
        ++out.n_failed;
        continue;
      }
      if (n_success == 0) {
        min = max = row->coefficient;
      } else {
        min = std::min(min, row->coefficient);
        max = std::max(max, row->coefficient);
      }
      sum += row->coefficient;
      if (row->p_one_tailed < alpha) ++n_sig_one;
      if (two_tailed_p(row->z_value) < alpha) ++n_sig_two;
      ++n_success;
    }
    if (n_success > 0) {
      out.coef_mean = sum / n_success;
      out.coef_min = min;
      out.coef_max = max;
      out.share_sig_one_tailed = static_cast<double>(n_sig_one) / n_success;
      out.share_sig_two_tailed = static_cast<double>(n_sig_two) / n_success;
    }
    summary.push_back(out);
  }
  return summary;
}

void write_summary(const std::vector<SummaryRow>& rows,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "k,s,n,n_failed,coef_mean,coef_min,coef_max,"
         "share_sig_one_tailed,share_sig_two_tailed\n";
  for (const auto& row : rows) {
    out << row.multiplier << "," << row.shift << "," << row.n_rows << ","
        << row.n_failed << "," << format_value(row.coef_mean) << ","
        << format_value(row.coef_min) << "," << format_value(row.coef_max) << ","
        << format_value(row.share_sig_one_tailed) << ","
        << format_value(row.share_sig_two_tailed) << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace gridsweep
