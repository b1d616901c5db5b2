#include "epr/models.hpp"

#include <cmath>
#include <stdexcept>

namespace epr {

const char* color_name(Color c) {
  switch (c) {
    case Color::Green: return "green";
    case Color::Red: return "red";
    case Color::V: return "V";
    case Color::H: return "H";
  }
  return "?";
}

const char* pairing_name(Pairing p) {
  return p == Pairing::HeadToToe ? "head-to-toe" : "back-to-back";
}

const char* particle_name(Particle p) {
  return p == Particle::SpinHalf ? "spin-half" : "photon";
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the (seed, stream) pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

HiddenPair sample_pair(Pairing pairing, Rng& rng) {
  HiddenPair pair;
  pair.rho_deg = rng.uniform(0.0, 360.0);
  pair.s = rng.uniform01();
  pair.pairing = pairing;
  return pair;
}

Color sector_color(const Aperture& aperture, double delta_deg) {
  if (four_sector(aperture)) {
    return std::cos(deg_to_rad(2.0 * delta_deg)) >= 0.0 ? Color::V : Color::H;
  }
  return std::cos(deg_to_rad(delta_deg)) >= 0.0 ? Color::Green : Color::Red;
}

Attempt attempt(const Aperture& aperture, Angle target_axis, double tip_deg, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("pitch fraction s must be in [0, 1]");
  }
  const double delta = tip_deg - target_axis.deg;
  Attempt a;
  a.passed = s <= clearance(aperture, delta);
  a.color = sector_color(aperture, delta);
  return a;
}

CoincidenceRecord measure_pair(const ApertureModel& model, const HiddenPair& pair,
                               Angle setting_left, Angle setting_right) {
  const Attempt left = attempt(model.aperture, setting_left, pair.left_tip_deg(), pair.s);
  const Attempt right = attempt(model.aperture, setting_right, pair.right_tip_deg(), pair.s);

  CoincidenceRecord rec;
  rec.passed_left = left.passed;
  rec.passed_right = right.passed;
  if (left.passed) rec.color_left = left.color;
  if (right.passed) rec.color_right = right.color;
  return rec;
}

double qm_correlation(Particle particle, double theta_deg) {
  const double t = deg_to_rad(theta_deg);
  return particle == Particle::SpinHalf ? -std::cos(t) : std::cos(2.0 * t);
}

double malus(double theta_deg, Particle particle) {
  const double t = deg_to_rad(theta_deg);
  const double c = particle == Particle::Photon ? std::cos(t) : std::cos(t / 2.0);
  return c * c;
}

double linear_correlation(double theta_deg, Pairing pairing) {
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
    throw std::invalid_argument("theta must be in [0, 180] degrees");
  }
  const double e = 2.0 * theta_deg / 180.0 - 1.0;
  return pairing == Pairing::HeadToToe ? e : -e;
}

}  // namespace epr
