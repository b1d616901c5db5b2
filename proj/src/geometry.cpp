#include "epr/geometry.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace epr {

double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

double normalize_deg(double deg) {
  if (!std::isfinite(deg)) {
    throw std::invalid_argument("angle must be finite");
  }
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;  // fmod of a tiny negative can round back up to 360
  return r;
}

double line_deg(double deg) {
  double r = std::fmod(normalize_deg(deg), 180.0);
  if (r >= 180.0) r = 0.0;
  return r;
}

double separation_deg(double a_deg, double b_deg) {
  const double d = normalize_deg(a_deg - b_deg);
  return d <= 180.0 ? d : 360.0 - d;
}

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

void validate(const Aperture& aperture) {
  std::visit(overloaded{
                 [](const Slit& s) {
                   if (!(s.epsilon_deg >= 0.0) || !std::isfinite(s.epsilon_deg)) {
                     throw std::invalid_argument("slit epsilon must be a finite non-negative angle");
                   }
                 },
                 [](const Circle& c) {
                   if (!(c.d >= 0.0 && c.d <= 1.0)) {
                     throw std::invalid_argument("circle clearance fraction must be in [0, 1]");
                   }
                 },
                 [](const FigureEight&) {},
                 [](const Rose&) {},
             },
             aperture);
}

double clearance(const Aperture& aperture, double misalignment_deg) {
  const double phi = line_deg(misalignment_deg);  // [0, 180)
  return std::visit(
      overloaded{
          [&](const Slit& s) -> double {
            const double off = std::min(phi, 180.0 - phi);
            return off <= s.epsilon_deg ? 1.0 : 0.0;
          },
          [&](const Circle& c) -> double { return c.d; },
          [&](const FigureEight&) -> double {
            // Half-angle form keeps the zeros exact at phi = 90.
            return 0.5 * (1.0 + std::cos(deg_to_rad(2.0 * phi)));
          },
          [&](const Rose&) -> double { return std::abs(std::cos(deg_to_rad(2.0 * phi))); },
      },
      aperture);
}

bool four_sector(const Aperture& aperture) { return std::holds_alternative<Rose>(aperture); }

namespace {
std::string short_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}
}  // namespace

std::string aperture_name(const Aperture& aperture) {
  return std::visit(overloaded{
                        [](const Slit& s) { return "slit:" + short_number(s.epsilon_deg); },
                        [](const Circle& c) { return "circle:" + short_number(c.d); },
                        [](const FigureEight&) { return std::string("figure-eight"); },
                        [](const Rose&) { return std::string("rose"); },
                    },
                    aperture);
}

}  // namespace epr
