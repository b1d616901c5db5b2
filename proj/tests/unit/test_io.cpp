#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "epr/csv.hpp"
#include "epr/svg.hpp"

using namespace epr;

TEST_CASE("format_double round-trips exactly") {
  const double values[] = {0.0, -1.0, 1.0 / 3.0, 0.1234567890123456, -0.9093524025976772, 1e-300};
  for (double v : values) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::isnan(parse_double("nan")));
}

TEST_CASE("csv emit basics") {
  SUBCASE("single point is exactly two lines") {
    const std::string csv = curve_to_csv({SweepPoint{0.0, CorrelationEstimate{100, 50, 0, 50}}});
    CHECK(csv == "theta_deg,n_pairs,n_coincident,n_same,n_diff,E,rate,stderr\n0,100,50,0,50,-1,0,0\n");
  }
  SUBCASE("undefined bins emit nan sentinels") {
    const std::string csv = curve_to_csv({SweepPoint{10.0, CorrelationEstimate{100, 0, 0, 0}}});
    CHECK(csv.find("10,100,0,0,0,nan,nan,nan") != std::string::npos);
  }
  SUBCASE("empty curves are rejected") {
    CHECK_THROWS_AS(curve_to_csv({}), std::invalid_argument);
  }
}

TEST_CASE("csv round trip preserves counts exactly and statistics to 1e-12") {
  std::vector<SweepPoint> curve;
  curve.push_back({0.0, {1000000, 499913, 0, 499913}});
  curve.push_back({45.5, {1000000, 274880, 12453, 262427}});
  curve.push_back({90.0, {1000000, 181711, 90855, 90856}});
  curve.push_back({135.0, {1000000, 0, 0, 0}});  // undefined bin

  const std::string csv = curve_to_csv(curve);
  const std::vector<SweepPoint> parsed = parse_curve_csv(csv);
  REQUIRE(parsed.size() == curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(parsed[i].theta_deg == curve[i].theta_deg);
    CHECK(parsed[i].est.n_pairs == curve[i].est.n_pairs);
    CHECK(parsed[i].est.n_coincident == curve[i].est.n_coincident);
    CHECK(parsed[i].est.n_same == curve[i].est.n_same);
    CHECK(parsed[i].est.n_diff == curve[i].est.n_diff);
    if (curve[i].est.defined()) {
      CHECK(std::abs(parsed[i].est.e() - curve[i].est.e()) < 1e-12);
      CHECK(std::abs(parsed[i].est.rate() - curve[i].est.rate()) < 1e-12);
      CHECK(std::abs(parsed[i].est.stderr_e() - curve[i].est.stderr_e()) < 1e-12);
    } else {
      CHECK_FALSE(parsed[i].est.defined());
    }
  }
}

TEST_CASE("csv parser rejects malformed input") {
  CHECK_THROWS_AS(parse_curve_csv(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_curve_csv("wrong,header\n1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse_curve_csv("theta_deg,n_pairs,n_coincident,n_same,n_diff,E,rate,stderr\n1,2,3\n"),
      std::invalid_argument);
}

namespace {
// Pulls every polyline points attribute out of an SVG document.
std::vector<std::vector<std::pair<double, double>>> extract_polylines(const std::string& svg) {
  std::vector<std::vector<std::pair<double, double>>> polylines;
  std::size_t pos = 0;
  while ((pos = svg.find("points=\"", pos)) != std::string::npos) {
    pos += 8;
    const std::size_t end = svg.find('"', pos);
    std::istringstream in(svg.substr(pos, end - pos));
    std::vector<std::pair<double, double>> points;
    std::string token;
    while (in >> token) {
      const std::size_t comma = token.find(',');
      points.emplace_back(parse_double(token.substr(0, comma)), parse_double(token.substr(comma + 1)));
    }
    polylines.push_back(std::move(points));
    pos = end;
  }
  return polylines;
}
}  // namespace

TEST_CASE("svg output") {
  Series linear{"linear", {}};
  for (int d = 0; d <= 180; ++d) {
    linear.points.emplace_back(static_cast<double>(d), 2.0 * d / 180.0 - 1.0);
  }

  SUBCASE("deterministic bytes for identical input") {
    CHECK(render_svg({linear}) == render_svg({linear}));
  }
  SUBCASE("emitted y coordinates are affine in theta to 1e-9") {
    const auto polylines = extract_polylines(render_svg({linear}));
    REQUIRE(polylines.size() == 1);
    const auto& pts = polylines.front();
    REQUIRE(pts.size() == 181);
    // Fit y = alpha + beta * theta by least squares and check residuals.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pts.size());
    std::vector<double> thetas;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double theta = static_cast<double>(i);
      sx += theta;
      sy += pts[i].second;
      sxx += theta * theta;
      sxy += theta * pts[i].second;
    }
    const double beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double alpha = (sy - beta * sx) / n;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      REQUIRE(std::abs(alpha + beta * static_cast<double>(i) - pts[i].second) < 1e-9);
    }
  }
  SUBCASE("181 polyline points for a 1-degree curve") {
    Series qm{"reference", {}};
    for (int d = 0; d <= 180; ++d) {
      qm.points.emplace_back(static_cast<double>(d), -std::cos(d * kPi / 180.0));
    }
    const auto polylines = extract_polylines(render_svg({qm}));
    REQUIRE(polylines.size() == 1);
    CHECK(polylines.front().size() == 181);
  }
  SUBCASE("three overlaid series emit three polylines") {
    Series a = linear, b = linear, c = linear;
    b.label = "b";
    c.label = "c";
    CHECK(extract_polylines(render_svg({a, b, c})).size() == 3);
  }
  SUBCASE("NaN samples split the polyline") {
    Series gap{"gap", {{0.0, -1.0}, {10.0, std::nan("")}, {20.0, 1.0}, {30.0, 0.5}}};
    const auto polylines = extract_polylines(render_svg({gap}));
    REQUIRE(polylines.size() == 2);
    CHECK(polylines[0].size() == 1);
    CHECK(polylines[1].size() == 2);
  }
  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(render_svg({}), std::invalid_argument);
    CHECK_THROWS_AS(render_svg({Series{"empty", {}}}), std::invalid_argument);
  }
}
