#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "epr/geometry.hpp"

namespace epr {

// HeadToToe throwers face each other upside down: the right tip points
// opposite the shared roll. BackToBack tips coincide.
enum class Pairing { HeadToToe, BackToBack };

enum class Particle { SpinHalf, Photon };

enum class Color : std::uint8_t { Green, Red, V, H };

const char* color_name(Color c);

// Deterministic random stream. Uniform doubles take the top 53 bits of the
// raw output, so sequences are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::mt19937_64 eng_;
};

// Stream seed for an indexed substream (shard, grid point, job).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

// Per-pair hidden variables. Fixed at creation; both sides share them.
struct HiddenPair {
  double rho_deg = 0.0;  // shared roll (tip direction of the left knife)
  double s = 0.0;        // projected-length fraction of the pitch
  Pairing pairing = Pairing::HeadToToe;

  double left_tip_deg() const { return rho_deg; }
  double right_tip_deg() const {
    return pairing == Pairing::HeadToToe ? rho_deg + 180.0 : rho_deg;
  }
};

// rho uniform on [0,360), s uniform on [0,1], independent of any later
// setting choice. Draw order: rho, then s.
HiddenPair sample_pair(Pairing pairing, Rng& rng);

// Color sector the tip lands in, given the tip-to-axis offset.
// Two-sector shapes: Green iff cos(delta) >= 0. Rose: V iff cos(2 delta) >= 0.
// Exact boundary hits count as Green/V.
Color sector_color(const Aperture& aperture, double delta_deg);

struct Attempt {
  bool passed = false;
  Color color = Color::Green;  // meaningful only when passed
};

// One side's throw: passes iff s <= clearance at the knife's misalignment
// (ties pass), color from the tip sector. Throws if s is outside [0,1].
Attempt attempt(const Aperture& aperture, Angle target_axis, double tip_deg, double s);

struct ApertureModel {
  Aperture aperture;
  Pairing pairing = Pairing::HeadToToe;
};

struct CoincidenceRecord {
  bool passed_left = false;
  bool passed_right = false;
  std::optional<Color> color_left;   // present only when the side passed
  std::optional<Color> color_right;

  bool coincident() const { return passed_left && passed_right; }
};

// Applies `attempt` on both sides with tip directions from the pairing.
// Only records where both sides passed enter correlation statistics.
CoincidenceRecord measure_pair(const ApertureModel& model, const HiddenPair& pair,
                               Angle setting_left, Angle setting_right);

// Analytic quantum correlation coefficient: -cos(theta) for spin-1/2 pairs,
// cos(2 theta) for photon pairs.
double qm_correlation(Particle particle, double theta_deg);

// Transmission probability: cos^2(theta) for photons, cos^2(theta/2) for
// spin-1/2.
double malus(double theta_deg, Particle particle);

// Closed-form correlation of the circular-aperture model over theta in
// [0, 180]; anti-correlated at 0 for HeadToToe, correlated for BackToBack.
// Throws if theta is outside [0, 180].
double linear_correlation(double theta_deg, Pairing pairing);

const char* pairing_name(Pairing p);
const char* particle_name(Particle p);

}  // namespace epr
