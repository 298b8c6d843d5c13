#include "gpstop/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "gpstop/csv.hpp"
#include "gpstop/errors.hpp"

namespace gpstop {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

struct Bounds {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  void include(double x, double y) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  void pad() {
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;
    const double dy = 0.05 * (y_max - y_min);
    y_min -= dy;
    y_max += dy;
  }
  double px(double x) const {
    return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom);
  }
};

Bounds bounds_of(const std::vector<SvgSeries>& series) {
  Bounds b;
  b.x_min = b.y_min = std::numeric_limits<double>::infinity();
  b.x_max = b.y_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) b.include(x, y);
  }
  b.pad();
  return b;
}

void open_svg(std::ofstream& out, const std::filesystem::path& path) {
  out.open(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void draw_frame(std::ofstream& out, const Bounds& b, const std::string& title,
                const std::string& x_label, const std::string& y_label) {
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
      << kWidth - kRight << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = b.x_min + i * (b.x_max - b.x_min) / 4.0;
    const double fy = b.y_min + i * (b.y_max - b.y_min) / 4.0;
    out << "<text x=\"" << b.px(fx) << "\" y=\"" << kHeight - kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double(std::round(fx * 1000.0) / 1000.0) << "</text>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << b.py(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double(std::round(fy * 1000.0) / 1000.0) << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << (kTop + kHeight - kBottom) / 2 << ")\">" << y_label
      << "</text>\n";
}

}  // namespace

void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series) {
  const Bounds b = bounds_of(series);
  std::ofstream out;
  open_svg(out, path);
  draw_frame(out, b, title, x_label, y_label);

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& sr = series[s];
    if (sr.points.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << sr.color << "\" stroke-width=\"1.5\" points=\"";
    double prev_y = 0.0;
    for (std::size_t i = 0; i < sr.points.size(); ++i) {
      const auto& [x, y] = sr.points[i];
      if (sr.stepped && i > 0) {
        out << format_double(b.px(x)) << "," << format_double(b.py(prev_y)) << " ";
      }
      out << format_double(b.px(x)) << "," << format_double(b.py(y)) << " ";
      prev_y = y;
    }
    out << "\"/>\n";
    const double ly = kTop + 14.0 * static_cast<double>(s);
    out << "<line x1=\"" << kWidth - kRight - 120 << "\" y1=\"" << ly << "\" x2=\""
        << kWidth - kRight - 100 << "\" y2=\"" << ly << "\" stroke=\"" << sr.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kWidth - kRight - 95 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << sr.label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_stem_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<std::pair<double, double>>& stems) {
  SvgSeries wrap;
  wrap.points = stems;
  Bounds b = bounds_of({wrap});
  b.y_min = std::min(0.0, b.y_min);
  std::ofstream out;
  open_svg(out, path);
  draw_frame(out, b, title, x_label, y_label);
  for (const auto& [x, y] : stems) {
    out << "<line x1=\"" << format_double(b.px(x)) << "\" y1=\"" << format_double(b.py(0.0))
        << "\" x2=\"" << format_double(b.px(x)) << "\" y2=\"" << format_double(b.py(y))
        << "\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
    out << "<circle cx=\"" << format_double(b.px(x)) << "\" cy=\"" << format_double(b.py(y))
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace gpstop
