#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "epr/engine.hpp"

namespace epr {

// The seven Venn regions of three categories X, Y, Z over a finite universe:
//   A: X only         D: X and Y only     G: X and Y and Z
//   B: Y only         E: Y and Z only
//   C: Z only         F: X and Z only
// so |X| = A+D+F+G, |Y| = B+D+E+G, |Z| = C+E+F+G.
struct RegionCounts {
  long long a = 0, b = 0, c = 0, d = 0, e = 0, f = 0, g = 0;
  long long outside = 0;

  long long total() const { return a + b + c + d + e + f + g + outside; }
  long long size_x() const { return a + d + f + g; }
  long long size_y() const { return b + d + e + g; }
  long long size_z() const { return c + e + f + g; }
};

struct Membership {
  bool x = false, y = false, z = false;
};

RegionCounts venn_regions(const std::vector<Membership>& universe);

// Generic form over any range and three pure predicates.
template <typename Range, typename PX, typename PY, typename PZ>
RegionCounts venn_regions(const Range& universe, PX&& in_x, PY&& in_y, PZ&& in_z) {
  RegionCounts r;
  for (const auto& item : universe) {
    const bool x = in_x(item), y = in_y(item), z = in_z(item);
    if (x && y && z) ++r.g;
    else if (x && y) ++r.d;
    else if (y && z) ++r.e;
    else if (x && z) ++r.f;
    else if (x) ++r.a;
    else if (y) ++r.b;
    else if (z) ++r.c;
    else ++r.outside;
  }
  return r;
}

// The counting inequality n[X,-Y] + n[Y,-Z] >= n[X,-Z] over simultaneous
// counts. Its slack reduces to B + F, which cannot be negative.
struct BellCount {
  long long lhs = 0;    // (A+F) + (B+D)
  long long rhs = 0;    // A + D
  long long slack = 0;  // lhs - rhs = B + F
  bool holds = true;
};

BellCount bell_count(const RegionCounts& r);

// A destructive sequential count: each of the three terms may be evaluated
// against a different membership snapshot, because measuring one category
// mutates another between counts.
struct PerturbedScenario {
  std::vector<Membership> snap_x_not_y;  // state when n[X,-Y] is tallied
  std::vector<Membership> snap_y_not_z;  // state when n[Y,-Z] is tallied
  std::vector<Membership> snap_x_not_z;  // state when n[X,-Z] is tallied
};

struct PerturbedResult {
  long long naive_lhs = 0;
  long long naive_rhs = 0;
  bool violated = false;  // naive_lhs < naive_rhs
};

// Throws ConfigError when the snapshots disagree on universe size.
PerturbedResult perturbed_bell_demo(const PerturbedScenario& scenario);

// Everyone is a magician wearing a hat with nothing under it. Checking who
// wears a hat removes the hats before the second count is tallied, so the
// last count sees a room with no hats at all.
PerturbedScenario hat_rabbit_scenario(int people = 10);

// --- CHSH --------------------------------------------------------------------

struct ChshCorrelations {
  double q_b1d2 = 0.0;
  double q_a1d2 = 0.0;
  double q_b1c2 = 0.0;
  double q_a1c2 = 0.0;
};

// S = |q(b1,d2) - q(a1,d2)| + |q(b1,c2) + q(a1,c2)|. S > 2 reads as a
// violation; the caller interprets.
double chsh(const ChshCorrelations& q);

struct ChshSettings {
  double a1_deg = 0.0;
  double b1_deg = 90.0;
  double c2_deg = 45.0;
  double d2_deg = 135.0;
};

// Canonical settings: {0, 90, 45, 135} for the spin-half convention,
// {0, 45, 22.5, 67.5} for the photon convention.
ChshSettings default_chsh_settings(Particle particle);
ChshSettings default_chsh_settings(Pairing pairing);

// Assembles the four correlations from any curve E(theta).
ChshCorrelations correlations_from_curve(const std::function<double(double)>& e_of_theta,
                                         const ChshSettings& settings);

struct ChshEstimate {
  double s = 0.0;
  double stderr_s = 0.0;  // root-sum-square of the four correlation errors
  bool defined = false;
  ChshSettings settings;
  std::array<CorrelationEstimate, 4> parts;  // b1d2, a1d2, b1c2, a1c2
};

// Four engine jobs, one per setting pair, on post-selected coincidences.
// Requires pairs >= 10^4.
ChshEstimate chsh_from_model(const ApertureModel& model, const ChshSettings& settings,
                             long long pairs, std::uint64_t seed, int shards = 1);

}  // namespace epr
