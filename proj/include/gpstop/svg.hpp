#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace gpstop {

struct SvgSeries {
  std::string label;
  std::string color;  // any SVG color
  std::vector<std::pair<double, double>> points;
  bool stepped = false;  // draw as a staircase instead of straight segments
};

/// Minimal static line chart: axes, ticks, legend, one polyline per series.
void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series);

/// Vertical stems from zero, for probability mass functions.
void write_stem_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<std::pair<double, double>>& stems);

}  // namespace gpstop
