#pragma once

#include <string>
#include <vector>

#include "epr/engine.hpp"

namespace epr {

// Shortest locale-free representation that round-trips the double exactly.
std::string format_double(double v);
double parse_double(const std::string& s);

// Canonical curve format. Header:
//   theta_deg,n_pairs,n_coincident,n_same,n_diff,E,rate,stderr
// one row per grid point, '\n' newlines, `nan` for undefined estimates.
std::string curve_to_csv(const std::vector<SweepPoint>& curve);  // throws on empty curve
std::vector<SweepPoint> parse_curve_csv(const std::string& text);

// Writes atomically enough for our purposes; failures report the path.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace epr
