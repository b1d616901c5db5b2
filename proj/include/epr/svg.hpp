#pragma once

#include <string>
#include <utility>
#include <vector>

namespace epr {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (theta_deg, value)
};

struct SvgOptions {
  double y_min = -1.0;
  double y_max = 1.0;
  std::string y_label = "E";
  std::string title;
};

// Standalone SVG line plot: axes, one polyline per series, legend.
// Output is byte-deterministic for identical input. Points with undefined
// (NaN) values break the polyline. Throws on empty input.
std::string render_svg(const std::vector<Series>& series, const SvgOptions& options = {});

}  // namespace epr
