#include "epr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epr {

namespace {

// Pushes base + k*period for every representative inside [0, 360).
void add_mod(std::vector<double>& v, double base, double period) {
  double b = std::fmod(base, period);
  if (b < 0.0) b += period;
  for (int k = 0;; ++k) {
    const double x = b + period * k;
    if (x >= 360.0 - 1e-12) break;
    v.push_back(x);
  }
}

// rho values where the integrand can kink or jump: color-sector boundaries,
// slit edges, and the crossings where the two clearances swap roles in the
// min. Between consecutive breakpoints both w and sigma are smooth.
std::vector<double> integrand_breakpoints(const ApertureModel& model, double axis_left_deg,
                                          double axis_right_deg) {
  const double off_right = model.pairing == Pairing::HeadToToe ? 180.0 : 0.0;
  // Effective axes in rho space: side functions depend on rho - u.
  const double u_left = axis_left_deg;
  const double u_right = axis_right_deg - off_right;

  std::vector<double> pts;
  pts.push_back(0.0);
  if (four_sector(model.aperture)) {
    add_mod(pts, u_left + 45.0, 90.0);
    add_mod(pts, u_right + 45.0, 90.0);
    add_mod(pts, (u_left + u_right) / 2.0, 45.0);
  } else {
    add_mod(pts, u_left + 90.0, 180.0);
    add_mod(pts, u_right + 90.0, 180.0);
    if (std::holds_alternative<FigureEight>(model.aperture)) {
      add_mod(pts, (u_left + u_right) / 2.0, 90.0);
    } else if (const auto* slit = std::get_if<Slit>(&model.aperture)) {
      add_mod(pts, u_left + slit->epsilon_deg, 180.0);
      add_mod(pts, u_left - slit->epsilon_deg, 180.0);
      add_mod(pts, u_right + slit->epsilon_deg, 180.0);
      add_mod(pts, u_right - slit->epsilon_deg, 180.0);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }),
            pts.end());
  return pts;
}

struct Integrals {
  double num = 0.0;  // integral of w * sigma, degrees measure
  double den = 0.0;  // integral of w
};

Integrals integrate(const ApertureModel& model, double axis_left_deg, double axis_right_deg,
                    int rho_steps) {
  const double off_right = model.pairing == Pairing::HeadToToe ? 180.0 : 0.0;
  const auto w_at = [&](double rho) {
    return std::min(clearance(model.aperture, rho - axis_left_deg),
                    clearance(model.aperture, rho + off_right - axis_right_deg));
  };
  const auto same_color_at = [&](double rho) {
    return sector_color(model.aperture, rho - axis_left_deg) ==
           sector_color(model.aperture, rho + off_right - axis_right_deg);
  };

  const std::vector<double> breaks = integrand_breakpoints(model, axis_left_deg, axis_right_deg);
  Integrals out;
  const std::size_t n_pieces = breaks.size();
  for (std::size_t p = 0; p < n_pieces; ++p) {
    const double lo = breaks[p];
    const double hi = p + 1 < n_pieces ? breaks[p + 1] : breaks[0] + 360.0;
    const double len = hi - lo;
    if (len < 1e-12) continue;

    const int n_sub = std::max(1, static_cast<int>(std::ceil(rho_steps * len / 360.0)));
    const double h = len / n_sub;
    const double nudge = 1e-9 * len;  // keep endpoint samples inside the piece
    double sum = 0.0;
    for (int k = 0; k <= n_sub; ++k) {
      double x = lo + h * k;
      if (k == 0) x += nudge;
      if (k == n_sub) x -= nudge;
      const double wk = w_at(x);
      sum += (k == 0 || k == n_sub) ? 0.5 * wk : wk;
    }
    const double piece = h * sum;
    const double sigma = same_color_at((lo + hi) / 2.0) ? 1.0 : -1.0;
    out.den += piece;
    out.num += sigma * piece;
  }
  return out;
}

}  // namespace

OracleValue quadrature_correlation(const ApertureModel& model, double theta_deg,
                                   const QuadratureSpec& spec) {
  if (spec.rho_steps < 360) throw ConfigError("quadrature needs at least 360 rho steps");
  validate(model.aperture);

  const Integrals integrals = integrate(model, 0.0, theta_deg, spec.rho_steps);
  OracleValue out;
  out.double_pass = integrals.den / 360.0;
  if (integrals.den > 360.0 * 1e-14) {
    out.defined = true;
    out.e = integrals.num / integrals.den;
  }
  return out;
}

double quadrature_double_pass_random(const ApertureModel& model, const QuadratureSpec& spec,
                                     int theta_steps) {
  // Periodic trapezoid over theta; the integrand is continuous in theta.
  double sum = 0.0;
  for (int k = 0; k < theta_steps; ++k) {
    const double theta = 360.0 * (k + 0.5) / theta_steps;
    sum += quadrature_correlation(model, theta, spec).double_pass;
  }
  return sum / theta_steps;
}

ClaimReport claim_report(const ApertureModel& model, Particle particle, SweepProtocol grid,
                         long long pairs_per_point, std::uint64_t seed, int shards,
                         const QuadratureSpec& spec, double tolerance) {
  ClaimReport report;
  report.particle = particle;
  report.model_name = aperture_name(model.aperture) + "/" + pairing_name(model.pairing);
  report.tolerance = tolerance;

  const std::vector<SweepPoint> mc = run_sweep(model, grid, pairs_per_point, seed, shards);
  double worst_qm = 0.0, worst_mc = 0.0;
  double worst_qm_theta = 0.0;
  for (const SweepPoint& point : mc) {
    ClaimPoint cp;
    cp.theta_deg = point.theta_deg;
    cp.mc = point.est;
    cp.qm_e = qm_correlation(particle, point.theta_deg);
    const OracleValue oracle = quadrature_correlation(model, point.theta_deg, spec);
    cp.oracle_e = oracle.e;
    cp.oracle_defined = oracle.defined;
    if (oracle.defined) {
      const double dev_qm = std::abs(cp.oracle_e - cp.qm_e);
      if (dev_qm > worst_qm) {
        worst_qm = dev_qm;
        worst_qm_theta = cp.theta_deg;
      }
      if (cp.mc.defined()) {
        worst_mc = std::max(worst_mc, std::abs(cp.mc.e() - cp.oracle_e));
      }
    }
    report.points.push_back(cp);
  }
  report.max_abs_dev_model_vs_qm = worst_qm;
  report.max_abs_dev_mc_vs_oracle = worst_mc;

  std::ostringstream verdict;
  verdict.precision(6);
  if (worst_qm <= tolerance) {
    verdict << "REPRODUCED: " << report.model_name << " stays within " << tolerance
            << " of the " << particle_name(particle) << " quantum curve (max |model - QM| = "
            << worst_qm << ")";
  } else {
    verdict << "NOT REPRODUCED: " << report.model_name << " deviates from the "
            << particle_name(particle) << " quantum curve by up to " << worst_qm << " (at theta = "
            << worst_qm_theta << " deg), beyond the " << tolerance << " tolerance";
  }
  verdict << "; Monte Carlo tracks the quadrature reference within " << worst_mc << ".";
  report.verdict = verdict.str();
  return report;
}

}  // namespace epr
