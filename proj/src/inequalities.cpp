#include "epr/inequalities.hpp"

#include <cmath>

namespace epr {

RegionCounts venn_regions(const std::vector<Membership>& universe) {
  return venn_regions(
      universe, [](const Membership& m) { return m.x; }, [](const Membership& m) { return m.y; },
      [](const Membership& m) { return m.z; });
}

BellCount bell_count(const RegionCounts& r) {
  BellCount out;
  out.lhs = (r.a + r.f) + (r.b + r.d);
  out.rhs = r.a + r.d;
  out.slack = out.lhs - out.rhs;  // = B + F
  out.holds = out.slack >= 0;
  return out;
}

namespace {
long long count_x_not_y(const std::vector<Membership>& snap) {
  long long n = 0;
  for (const Membership& m : snap) n += (m.x && !m.y) ? 1 : 0;
  return n;
}
long long count_y_not_z(const std::vector<Membership>& snap) {
  long long n = 0;
  for (const Membership& m : snap) n += (m.y && !m.z) ? 1 : 0;
  return n;
}
long long count_x_not_z(const std::vector<Membership>& snap) {
  long long n = 0;
  for (const Membership& m : snap) n += (m.x && !m.z) ? 1 : 0;
  return n;
}
}  // namespace

PerturbedResult perturbed_bell_demo(const PerturbedScenario& scenario) {
  if (scenario.snap_x_not_y.size() != scenario.snap_y_not_z.size() ||
      scenario.snap_x_not_y.size() != scenario.snap_x_not_z.size()) {
    throw ConfigError("scenario snapshots must cover the same universe");
  }
  PerturbedResult result;
  result.naive_lhs = count_x_not_y(scenario.snap_x_not_y) + count_y_not_z(scenario.snap_y_not_z);
  result.naive_rhs = count_x_not_z(scenario.snap_x_not_z);
  result.violated = result.naive_lhs < result.naive_rhs;
  return result;
}

PerturbedScenario hat_rabbit_scenario(int people) {
  PerturbedScenario scenario;
  const std::size_t n = static_cast<std::size_t>(people);
  // Before any measurement: all magicians, all hatted, no rabbits.
  scenario.snap_x_not_y.assign(n, Membership{true, true, false});
  // The hat check removed the hats before this tally.
  scenario.snap_y_not_z.assign(n, Membership{true, false, false});
  // Final count sees the same hatless room.
  scenario.snap_x_not_z.assign(n, Membership{true, false, false});
  return scenario;
}

double chsh(const ChshCorrelations& q) {
  return std::abs(q.q_b1d2 - q.q_a1d2) + std::abs(q.q_b1c2 + q.q_a1c2);
}

ChshSettings default_chsh_settings(Particle particle) {
  return particle == Particle::SpinHalf ? ChshSettings{0.0, 90.0, 45.0, 135.0}
                                        : ChshSettings{0.0, 45.0, 22.5, 67.5};
}

ChshSettings default_chsh_settings(Pairing pairing) {
  return default_chsh_settings(pairing == Pairing::HeadToToe ? Particle::SpinHalf : Particle::Photon);
}

ChshCorrelations correlations_from_curve(const std::function<double(double)>& e_of_theta,
                                         const ChshSettings& st) {
  ChshCorrelations q;
  q.q_b1d2 = e_of_theta(separation_deg(st.b1_deg, st.d2_deg));
  q.q_a1d2 = e_of_theta(separation_deg(st.a1_deg, st.d2_deg));
  q.q_b1c2 = e_of_theta(separation_deg(st.b1_deg, st.c2_deg));
  q.q_a1c2 = e_of_theta(separation_deg(st.a1_deg, st.c2_deg));
  return q;
}

ChshEstimate chsh_from_model(const ApertureModel& model, const ChshSettings& st,
                             long long pairs, std::uint64_t seed, int shards) {
  if (pairs < 10'000) throw ConfigError("CHSH estimation needs at least 10^4 pairs");

  const std::array<FixedSettings, 4> jobs{
      FixedSettings{st.b1_deg, st.d2_deg},
      FixedSettings{st.a1_deg, st.d2_deg},
      FixedSettings{st.b1_deg, st.c2_deg},
      FixedSettings{st.a1_deg, st.c2_deg},
  };

  ChshEstimate out;
  out.settings = st;
  double var = 0.0;
  bool all_defined = true;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    out.parts[k] = run_fixed(model, jobs[k], pairs, substream_seed(seed, k), shards);
    all_defined = all_defined && out.parts[k].defined();
    if (out.parts[k].defined()) {
      const double se = out.parts[k].stderr_e();
      var += se * se;
    }
  }
  out.defined = all_defined;
  if (all_defined) {
    out.s = chsh({out.parts[0].e(), out.parts[1].e(), out.parts[2].e(), out.parts[3].e()});
    out.stderr_s = std::sqrt(var);
  }
  return out;
}

}  // namespace epr
