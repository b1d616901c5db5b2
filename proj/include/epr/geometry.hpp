#pragma once

#include <string>
#include <variant>

namespace epr {

inline constexpr double kPi = 3.14159265358979323846;

double deg_to_rad(double deg);

// Normalizes a finite angle to its representative in [0, 360).
// Throws std::invalid_argument for non-finite input.
double normalize_deg(double deg);

// Representative of the undirected line through the origin, in [0, 180).
// A line at 10 degrees is the same line as one at 190 degrees.
double line_deg(double deg);

// Angular separation between two directions, folded to [0, 180].
double separation_deg(double a_deg, double b_deg);

// A direction in the target plane, degrees, normalized on construction.
struct Angle {
  double deg = 0.0;

  static Angle of(double raw_deg) { return Angle{normalize_deg(raw_deg)}; }
  double line() const { return line_deg(deg); }
};

// Target openings. `clearance` is the chord through the opening's center
// along a given line orientation, as a fraction of the maximum chord
// (= knife length).
struct Slit {
  double epsilon_deg = 1.0;  // half-width tolerance around the long axis
};
struct Circle {
  double d = 0.5;  // constant clearance fraction in [0, 1]
};
struct FigureEight {};  // polar curve (1 + cos 2t)/2, clearance cos^2
struct Rose {};         // polar curve cos 2t, four petals, clearance |cos 2t|

using Aperture = std::variant<Slit, Circle, FigureEight, Rose>;

// Throws std::invalid_argument when shape parameters are out of range.
void validate(const Aperture& aperture);

// Clearance fraction in [0, 1] for a knife whose line orientation is
// misalignment_deg away from the opening's long axis.
double clearance(const Aperture& aperture, double misalignment_deg);

// True for openings whose color sectors are the four 90-degree cones
// (V/H outcomes) rather than the two half-planes (green/red).
bool four_sector(const Aperture& aperture);

std::string aperture_name(const Aperture& aperture);

}  // namespace epr
