// Acceptance suite: every release criterion in one binary, one line per
// criterion. Exit code 0 only when all criteria pass within their stated
// tolerances and runtime budgets.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "epr/csv.hpp"
#include "epr/engine.hpp"
#include "epr/inequalities.hpp"
#include "epr/oracle.hpp"

using namespace epr;

namespace {

int g_failures = 0;

bool expect(std::ostream& log, bool condition, const std::string& what) {
  if (!condition) log << "    FAILED: " << what << "\n";
  return condition;
}

void criterion(int id, const std::string& name, double budget_s,
               const std::function<bool(std::ostream&)>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream log;
  bool ok = false;
  try {
    ok = fn(log);
  } catch (const std::exception& e) {
    log << "    exception: " << e.what() << "\n";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (ok && secs > budget_s) {
    ok = false;
    log << "    runtime " << secs << " s exceeds the " << budget_s << " s budget\n";
  }
  if (!ok) ++g_failures;
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << name << " (" << std::fixed
            << std::setprecision(2) << secs << " s)\n"
            << log.str();
  std::cout.flush();
}

constexpr long long kMillion = 1'000'000;

const ApertureModel kFig8Htt{FigureEight{}, Pairing::HeadToToe};
const ApertureModel kRoseBtb{Rose{}, Pairing::BackToBack};
const ApertureModel kCircleHtt{Circle{0.5}, Pairing::HeadToToe};

bool c1_program_tables(std::ostream& log) {
  const ProgramModel model({0.0, 22.5, 67.5});
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Rational expected = (i == j) ? Rational::of(0, 1) : Rational::of(1, 2);
      ok &= expect(log, model.match_probability_by_index(i, j) == expected,
                   "match probability (" + std::to_string(i) + "," + std::to_string(j) + ") exact");
    }
  }
  ok &= expect(log, model.overall() == Rational::of(1, 3), "overall exactly 1/3");
  ok &= expect(log, model.overall().str() == "1/3", "overall renders as the exact rational string");
  return ok;
}

bool c2_best_program(std::ostream& log) {
  const Rational best = ProgramModel::best_single_program();
  bool ok = expect(log, best == Rational::of(4, 9), "best single program exactly 4/9");
  ok &= expect(log, best.value() < 0.5, "4/9 < 1/2");
  // exhaustive enumeration over all 8 programs
  long long max_matches = 0;
  for (const Program& p : all_programs()) {
    long long matches = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (p.left(i) == p.right(j)) ++matches;
      }
    }
    max_matches = std::max(max_matches, matches);
  }
  ok &= expect(log, max_matches == 4, "enumeration confirms the maximum of 4 matching pairs of 9");
  return ok;
}

bool c3_chsh_analytic(std::ostream& log) {
  bool ok = true;
  for (Particle particle : {Particle::SpinHalf, Particle::Photon}) {
    const ChshSettings st = default_chsh_settings(particle);
    const double s = chsh(correlations_from_curve(
        [&](double t) { return qm_correlation(particle, t); }, st));
    ok &= expect(log, std::abs(s - 2.0 * std::sqrt(2.0)) < 1e-9,
                 std::string("S = 2*sqrt(2) within 1e-9 for ") + particle_name(particle) +
                     " defaults (got " + format_double(s) + ")");
  }
  return ok;
}

bool c4_counting_inequality(std::ostream& log) {
  Rng rng(20240604);
  long long held = 0;
  const int universes = 10000;
  for (int u = 0; u < universes; ++u) {
    const std::uint32_t size = rng.below(61);
    const double px = rng.uniform01(), py = rng.uniform01(), pz = rng.uniform01();
    std::vector<Membership> universe(size);
    for (Membership& m : universe) {
      m.x = rng.uniform01() < px;
      m.y = rng.uniform01() < py;
      m.z = rng.uniform01() < pz;
    }
    if (bell_count(venn_regions(universe)).holds) ++held;
  }
  bool ok = expect(log, held == universes,
                   "all " + std::to_string(universes) + " random universes satisfy the inequality");

  const PerturbedScenario scenario = hat_rabbit_scenario(10);
  const PerturbedResult r = perturbed_bell_demo(scenario);
  ok &= expect(log, r.violated, "the destructive-measurement scenario produces a naive violation");
  ok &= expect(log, r.naive_lhs == 0 && r.naive_rhs == 10, "hat demo counts are 0 + 0 < 10");
  ok &= expect(log,
               bell_count(venn_regions(scenario.snap_x_not_y)).holds &&
                   bell_count(venn_regions(scenario.snap_y_not_z)).holds &&
                   bell_count(venn_regions(scenario.snap_x_not_z)).holds,
               "each single consistent snapshot still satisfies the inequality");
  return ok;
}

bool c5_circle_line(std::ostream& log) {
  const std::vector<SweepPoint> curve = run_sweep(kCircleHtt, {0.0, 180.0, 1.0}, kMillion, 501, 2);
  bool ok = expect(log, curve.size() == 181, "181 grid points");
  double worst = 0.0;
  for (const SweepPoint& p : curve) {
    if (!expect(log, p.est.defined(), "estimate defined at theta " + format_double(p.theta_deg))) {
      return false;
    }
    const double residual = std::abs(p.est.rate() - p.theta_deg / 180.0);
    worst = std::max(worst, residual);
    if (residual > std::max(0.005, 4.0 * p.est.stderr_e())) {
      ok = expect(log, false,
                  "rate residual " + format_double(residual) + " at theta " +
                      format_double(p.theta_deg) + " within max(0.005, 4*stderr)");
    }
  }
  log << "    max |rate - theta/180| = " << format_double(worst) << "\n";

  const PassRates rates = pass_rate_side(kCircleHtt, {0.0, 0.0}, kMillion, 502, 2);
  const double sigma = std::sqrt(0.25 / static_cast<double>(rates.pairs));
  ok &= expect(log, std::abs(rates.left() - 0.5) <= 4.0 * sigma,
               "left pass rate 0.5 within 4 sigma (got " + format_double(rates.left()) + ")");
  ok &= expect(log, std::abs(rates.right() - 0.5) <= 4.0 * sigma,
               "right pass rate 0.5 within 4 sigma (got " + format_double(rates.right()) + ")");
  return ok;
}

bool c6_figure_eight_endpoints(std::ostream& log) {
  const CorrelationEstimate at0 = run_fixed(kFig8Htt, {0.0, 0.0}, kMillion, 601, 2);
  const CorrelationEstimate at90 = run_fixed(kFig8Htt, {0.0, 90.0}, kMillion, 602, 2);
  const CorrelationEstimate at180 = run_fixed(kFig8Htt, {0.0, 180.0}, kMillion, 603, 2);
  bool ok = expect(log, at0.defined() && at0.e() == -1.0, "E(0) = -1 exactly");
  ok &= expect(log, at180.defined() && at180.e() == 1.0, "E(180) = +1 exactly");
  ok &= expect(log, at90.defined() && std::abs(at90.e()) <= 4.0 * at90.stderr_e(),
               "|E(90)| within 4 sigma of zero (got " + format_double(at90.e()) + ")");

  const CorrelationEstimate equal = run_fixed(kFig8Htt, {22.5, 22.5}, kMillion, 604, 2);
  ok &= expect(log, equal.n_same == 0,
               "equal settings: zero same-colored coincidences over 1e6 trials (got " +
                   std::to_string(equal.n_same) + " of " + std::to_string(equal.n_coincident) + ")");
  return ok;
}

bool c7_mc_vs_oracle(std::ostream& log) {
  bool ok = true;
  double worst = 0.0;
  double worst_grid = 0.0;
  for (int d = 0; d <= 180; d += 5) {
    const std::uint64_t point_seed = substream_seed(700, static_cast<std::uint64_t>(d));
    const CorrelationEstimate mc = run_fixed(kFig8Htt, {0.0, static_cast<double>(d)}, kMillion,
                                             point_seed, 2);
    const OracleValue oracle = quadrature_correlation(kFig8Htt, d, QuadratureSpec{14400});
    if (!expect(log, mc.defined() && oracle.defined, "both defined at theta " + std::to_string(d))) {
      return false;
    }
    const double dev = std::abs(mc.e() - oracle.e);
    worst = std::max(worst, dev);
    if (dev > std::max(0.005, 4.0 * mc.stderr_e())) {
      ok = expect(log, false,
                  "|E_MC - E_oracle| = " + format_double(dev) + " at theta " + std::to_string(d) +
                      " within max(0.005, 4*stderr)");
    }
    const double fine = quadrature_correlation(kFig8Htt, d, QuadratureSpec{28800}).e;
    worst_grid = std::max(worst_grid, std::abs(oracle.e - fine));
    if (std::abs(oracle.e - fine) >= 1e-6) {
      ok = expect(log, false, "grid doubling moves the oracle by < 1e-6 at theta " + std::to_string(d));
    }
  }
  log << "    max |E_MC - E_oracle| = " << format_double(worst)
      << ", max grid-doubling shift = " << format_double(worst_grid) << "\n";
  return ok;
}

bool c8_claim_reports(std::ostream& log) {
  bool ok = true;
  const struct {
    ApertureModel model;
    Particle particle;
  } cases[] = {{kFig8Htt, Particle::SpinHalf}, {kRoseBtb, Particle::Photon}};
  for (const auto& c : cases) {
    const ClaimReport report =
        claim_report(c.model, c.particle, {0.0, 180.0, 5.0}, kMillion, 801, 2);
    const std::string tag = report.model_name + " vs " + particle_name(c.particle);
    ok &= expect(log, report.points.size() == 37, tag + ": 37 grid points");
    ok &= expect(log, std::isfinite(report.max_abs_dev_model_vs_qm) &&
                          report.max_abs_dev_model_vs_qm >= 0.0,
                 tag + ": model-vs-QM deviation metric populated");
    ok &= expect(log, std::isfinite(report.max_abs_dev_mc_vs_oracle) &&
                          report.max_abs_dev_mc_vs_oracle > 0.0,
                 tag + ": MC-vs-oracle deviation metric populated");
    ok &= expect(log, !report.verdict.empty(), tag + ": verdict text present");
    for (double endpoint : {0.0, 90.0, 180.0}) {
      const double oracle = quadrature_correlation(c.model, endpoint).e;
      const double qm = qm_correlation(c.particle, endpoint);
      ok &= expect(log, std::abs(oracle - qm) <= 1e-9,
                   tag + ": oracle endpoint at " + format_double(endpoint) +
                       " agrees with the quantum value to 1e-9");
    }
    log << "    " << tag << ": max |model - QM| = " << format_double(report.max_abs_dev_model_vs_qm)
        << ", max |MC - oracle| = " << format_double(report.max_abs_dev_mc_vs_oracle) << "\n";
    log << "    verdict: " << report.verdict << "\n";
  }
  return ok;
}

bool c9_menu_model(std::ostream& log) {
  const MenuRunResult result = run_menu(default_menu_world(), 100000, 901);
  bool ok = true;
  for (std::size_t i = 0; i < result.chains.size(); ++i) {
    ok &= expect(log, result.match_rate(static_cast<int>(i), static_cast<int>(i)) == 1.0,
                 result.chains[i] + ": same-chain match rate exactly 1.0");
    for (std::size_t j = 0; j < result.chains.size(); ++j) {
      if (i != j) {
        ok &= expect(log, result.match_rate(static_cast<int>(i), static_cast<int>(j)) == 0.0,
                     result.chains[i] + "/" + result.chains[j] +
                         ": disjoint-menu match rate exactly 0");
      }
    }
  }
  return ok;
}

bool c10_determinism(std::ostream& log) {
  const SweepProtocol grid{0.0, 180.0, 5.0};
  const std::string csv_a = curve_to_csv(run_sweep(kFig8Htt, grid, 100000, 1001, 3));
  const std::string csv_b = curve_to_csv(run_sweep(kFig8Htt, grid, 100000, 1001, 3));
  bool ok = expect(log, csv_a == csv_b, "identical (config, seed, shards) produce byte-identical CSV");

  for (int shards : {1, 2, 4}) {
    const CorrelationEstimate est = run_fixed(kFig8Htt, {0.0, 45.0}, 200000, 1002, shards);
    ok &= expect(log, est.n_pairs == 200000, "shard merge preserves the pair count");
    ok &= expect(log, est.n_same + est.n_diff == est.n_coincident,
                 "n_same + n_diff = n_coincident under " + std::to_string(shards) + " shards");
    ok &= expect(log, est.n_coincident <= est.n_pairs, "n_coincident <= n_pairs");
    ok &= expect(log, est.rate() == (1.0 + est.e()) / 2.0, "rate = (1+E)/2 exactly");
    const double expected_stderr =
        std::sqrt((1.0 - est.e() * est.e()) / static_cast<double>(est.n_coincident));
    ok &= expect(log, std::abs(est.stderr_e() - expected_stderr) < 1e-15, "stderr formula");
  }

  const CorrelationEstimate one = run_fixed(kFig8Htt, {0.0, 45.0}, 400000, 1003, 1);
  const CorrelationEstimate four = run_fixed(kFig8Htt, {0.0, 45.0}, 400000, 1003, 4);
  ok &= expect(log,
               std::abs(one.e() - four.e()) <= 5.0 * std::hypot(one.stderr_e(), four.stderr_e()),
               "different shard counts agree within 5 sigma");
  return ok;
}

}  // namespace

int main() {
  std::cout << "acceptance criteria\n===================\n";
  criterion(1, "program-model tables exact in rational arithmetic", 1.0, c1_program_tables);
  criterion(2, "best deterministic program reaches exactly 4/9", 1.0, c2_best_program);
  criterion(3, "CHSH assembler on the quantum curve gives 2*sqrt(2)", 1.0, c3_chsh_analytic);
  criterion(4, "counting-inequality tautology and destructive-demo violation", 5.0,
            c4_counting_inequality);
  criterion(5, "circle aperture reproduces the straight line at N=1e6/point", 120.0, c5_circle_line);
  criterion(6, "figure-eight endpoints exact, zero same-color at equal settings", 60.0,
            c6_figure_eight_endpoints);
  criterion(7, "Monte Carlo tracks the quadrature oracle on a 5-degree grid", 300.0, c7_mc_vs_oracle);
  criterion(8, "claim reports with measured verdicts and exact oracle endpoints", 300.0,
            c8_claim_reports);
  criterion(9, "menu model: exact 1.0 same-chain, exact 0 disjoint cross-chain", 5.0, c9_menu_model);
  criterion(10, "byte-identical reruns and shard-invariant estimators", 60.0, c10_determinism);

  if (g_failures == 0) {
    std::cout << "RESULT: all 10 criteria passed\n";
    return 0;
  }
  std::cout << "RESULT: " << (10 - g_failures) << "/10 criteria passed\n";
  return 1;
}
