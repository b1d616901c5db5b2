#pragma once

#include <string>
#include <vector>

#include "epr/engine.hpp"

namespace epr {

// Deterministic quadrature reference for the aperture model. The pitch
// integral is taken analytically: over uniform s, both sides pass with
// probability min(clearance_left, clearance_right), so only the roll
// integral remains.
struct QuadratureSpec {
  int rho_steps = 14400;  // base grid over [0, 360); must be >= 360
};

struct OracleValue {
  double e = 0.0;
  bool defined = false;
  double double_pass = 0.0;  // probability that both sides pass
};

// E(theta) = [integral of w(rho) sigma(rho)] / [integral of w(rho)], with
// w = min of the two clearances and sigma the same/different color sign.
// Trapezoid rule over the rho grid, subdivided at the integrand's
// breakpoints so piecewise-constant shapes integrate exactly.
OracleValue quadrature_correlation(const ApertureModel& model, double theta_deg,
                                   const QuadratureSpec& spec = {});

// Double-pass probability averaged over independent uniform settings.
double quadrature_double_pass_random(const ApertureModel& model, const QuadratureSpec& spec = {},
                                     int theta_steps = 720);

struct ClaimPoint {
  double theta_deg = 0.0;
  double oracle_e = 0.0;
  bool oracle_defined = false;
  CorrelationEstimate mc;
  double qm_e = 0.0;
};

// The three curves side by side plus the two deviation metrics. The verdict
// is an output of the comparison, never an assertion.
struct ClaimReport {
  Particle particle = Particle::SpinHalf;
  std::string model_name;
  std::vector<ClaimPoint> points;
  double max_abs_dev_model_vs_qm = 0.0;   // oracle curve vs analytic QM curve
  double max_abs_dev_mc_vs_oracle = 0.0;  // Monte Carlo vs oracle
  double tolerance = 0.02;
  std::string verdict;
};

ClaimReport claim_report(const ApertureModel& model, Particle particle, SweepProtocol grid,
                         long long pairs_per_point, std::uint64_t seed, int shards = 1,
                         const QuadratureSpec& spec = {}, double tolerance = 0.02);

}  // namespace epr
