#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "epr/menu.hpp"
#include "epr/models.hpp"
#include "epr/programs.hpp"

namespace epr {

// Configuration problems surface as this; the CLI maps it to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FixedSettings {
  double left_deg = 0.0;
  double right_deg = 0.0;
};

struct SweepProtocol {
  double start_deg = 0.0;
  double end_deg = 180.0;
  double step_deg = 1.0;
};

struct ThreeSettingProtocol {
  std::array<double, 3> options_deg{0.0, 22.5, 67.5};
};

struct Random360Protocol {
  double bin_width_deg = 5.0;  // must divide 180
};

using Protocol = std::variant<FixedSettings, SweepProtocol, ThreeSettingProtocol, Random360Protocol>;

using ModelConfig = std::variant<ApertureModel, ProgramModel, MenuWorld>;

struct ExperimentConfig {
  ModelConfig model = ApertureModel{FigureEight{}, Pairing::HeadToToe};
  Protocol protocol = SweepProtocol{};
  long long pairs = 1'000'000;
  std::uint64_t seed = 0;
  int shards = 1;

  void validate() const;  // throws ConfigError
};

// Counts plus the derived correlation statistics for one condition.
// Zero coincidences is a represented state: E/rate/stderr are NaN and
// defined() is false.
struct CorrelationEstimate {
  long long n_pairs = 0;
  long long n_coincident = 0;
  long long n_same = 0;
  long long n_diff = 0;

  bool defined() const { return n_coincident > 0; }
  double e() const;       // (n_same - n_diff) / n_coincident
  double rate() const;    // (1 + e) / 2, exactly
  double stderr_e() const;  // sqrt((1 - e^2) / n_coincident)

  CorrelationEstimate& operator+=(const CorrelationEstimate& other);
};

struct SweepPoint {
  double theta_deg = 0.0;
  CorrelationEstimate est;
};

struct PassRates {
  long long pairs = 0;
  long long left_passes = 0;
  long long right_passes = 0;
  // Green/V fraction among the side's passes (the marginal color rate).
  double left_primary_rate = 0.0;
  double right_primary_rate = 0.0;

  double left() const;
  double right() const;
};

struct ThreeSettingResult {
  std::array<double, 3> options_deg{};
  std::array<std::array<CorrelationEstimate, 3>, 3> matrix{};  // [left][right]
  CorrelationEstimate pooled;             // all setting pairs together
  long long equal_setting_coincidences = 0;
  long long equal_setting_same_color = 0;

  double overall_match_rate() const { return pooled.rate(); }
};

struct Random360Result {
  double bin_width_deg = 0.0;
  std::vector<SweepPoint> bins;  // theta_deg = bin center
  long long pairs = 0;
  long long double_passes = 0;

  double double_pass_fraction() const;
};

// --- Aperture-model runners -------------------------------------------------

// N pairs at fixed settings; deterministic for fixed (seed, shards).
CorrelationEstimate run_fixed(const ApertureModel& model, FixedSettings settings,
                              long long pairs, std::uint64_t seed, int shards = 1);

// One run_fixed per grid point, left setting 0 and right setting theta.
std::vector<SweepPoint> run_sweep(const ApertureModel& model, SweepProtocol grid,
                                  long long pairs_per_point, std::uint64_t seed, int shards = 1);

// Per-pair independent uniform setting choice on each side.
ThreeSettingResult run_three_setting(const ApertureModel& model, ThreeSettingProtocol protocol,
                                     long long pairs, std::uint64_t seed, int shards = 1);

// Both settings uniform on [0,360); records binned by the mod-180 difference.
Random360Result run_random_360(const ApertureModel& model, Random360Protocol protocol,
                               long long pairs, std::uint64_t seed, int shards = 1);

// Single-side pass fractions and color marginals, before coincidence filtering.
PassRates pass_rate_side(const ApertureModel& model, FixedSettings settings,
                         long long pairs, std::uint64_t seed, int shards = 1);

// --- Program-model runners ---------------------------------------------------

// Every pair is counted (no aperture); outcomes come from the shared program.
ThreeSettingResult run_three_setting(const ProgramModel& model, long long pairs,
                                     std::uint64_t seed, int shards = 1);

CorrelationEstimate run_fixed(const ProgramModel& model, FixedSettings settings,
                              long long pairs, std::uint64_t seed, int shards = 1);

// Analytic overall same-outcome probability of the quantum curve over the 9
// ordered setting pairs; what the three-setting protocol converges to.
double qm_overall_match(Particle particle, const std::array<double, 3>& options_deg);

// --- Menu-model runner --------------------------------------------------------

struct MenuRunResult {
  std::vector<std::string> chains;
  long long days = 0;
  // matches[i][j]: days on which chain i's diner and chain j's diner ate the
  // same meal, using that day's shared numbers.
  std::vector<std::vector<long long>> matches;

  double match_rate(int i, int j) const;
};

// Simulates `days` days; each day draws one pair of shared numbers and serves
// every chain pairing with it.
MenuRunResult run_menu(const MenuWorld& world, long long days, std::uint64_t seed);

}  // namespace epr
