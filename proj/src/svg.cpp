#include "epr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "epr/csv.hpp"

namespace epr {

namespace {

constexpr int kWidth = 880;
constexpr int kHeight = 560;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 42;
constexpr int kMarginBottom = 52;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const SvgOptions& options) {
  if (series.empty()) throw std::invalid_argument("no series to plot");
  double x_min = 0.0, x_max = 0.0;
  bool have_x = false;
  for (const Series& s : series) {
    if (s.points.empty()) throw std::invalid_argument("series '" + s.label + "' is empty");
    for (const auto& [theta, value] : s.points) {
      if (!have_x) {
        x_min = x_max = theta;
        have_x = true;
      } else {
        x_min = std::min(x_min, theta);
        x_max = std::max(x_max, theta);
      }
      (void)value;
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  const double y_min = options.y_min;
  const double y_max = options.y_max;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto x_px = [&](double theta) { return kMarginLeft + (theta - x_min) / (x_max - x_min) * plot_w; };
  const auto y_px = [&](double v) { return kMarginTop + (y_max - v) / (y_max - y_min) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"16\">" << escape_xml(options.title) << "</text>\n";
  }

  // axes frame
  svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << format_double(plot_w)
      << "\" height=\"" << format_double(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks every 30 degrees across the domain
  const double x_tick = 30.0;
  const double first_tick = std::ceil(x_min / x_tick) * x_tick;
  const int n_ticks = static_cast<int>(std::floor((x_max + 1e-9 - first_tick) / x_tick)) + 1;
  for (int k = 0; k < n_ticks; ++k) {
    const double t = first_tick + x_tick * k;
    const double px = x_px(t);
    svg << "<line x1=\"" << format_double(px) << "\" y1=\"" << format_double(kMarginTop + plot_h)
        << "\" x2=\"" << format_double(px) << "\" y2=\"" << format_double(kMarginTop + plot_h + 6)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << format_double(px) << "\" y=\"" << format_double(kMarginTop + plot_h + 22)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << format_double(t)
        << "</text>\n";
  }
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">theta (deg)</text>\n";

  // y ticks: 5 divisions
  for (int k = 0; k <= 4; ++k) {
    const double v = y_min + (y_max - y_min) * k / 4.0;
    const double py = y_px(v);
    svg << "<line x1=\"" << format_double(kMarginLeft - 6) << "\" y1=\"" << format_double(py) << "\" x2=\""
        << kMarginLeft << "\" y2=\"" << format_double(py) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << format_double(py) << "\" x2=\""
        << format_double(kMarginLeft + plot_w) << "\" y2=\"" << format_double(py)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << format_double(kMarginLeft - 10) << "\" y=\"" << format_double(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << format_double(v)
        << "</text>\n";
  }
  svg << "<text x=\"16\" y=\"" << format_double(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
      << format_double(kMarginTop + plot_h / 2) << ")\">" << escape_xml(options.y_label) << "</text>\n";

  // series polylines; NaN samples split the line
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string points;
    const auto flush = [&]() {
      if (!points.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points
            << "\"/>\n";
        points.clear();
      }
    };
    for (const auto& [theta, value] : series[si].points) {
      if (std::isnan(value)) {
        flush();
        continue;
      }
      if (!points.empty()) points.push_back(' ');
      points += format_double(x_px(theta));
      points.push_back(',');
      points += format_double(y_px(value));
    }
    flush();
  }

  // legend, top-right inside the frame
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const double ly = kMarginTop + 16 + 18.0 * static_cast<double>(si);
    const double lx = kMarginLeft + plot_w - 190;
    svg << "<line x1=\"" << format_double(lx) << "\" y1=\"" << format_double(ly - 4) << "\" x2=\""
        << format_double(lx + 24) << "\" y2=\"" << format_double(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << format_double(lx + 30) << "\" y=\"" << format_double(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(series[si].label) << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace epr
