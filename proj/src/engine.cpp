#include "epr/engine.hpp"

#include <cmath>
#include <future>
#include <limits>

namespace epr {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Raw per-shard counters; estimates are derived after the merge.
struct Tally {
  long long pairs = 0;
  long long coinc = 0;
  long long same = 0;
  long long diff = 0;
  long long left_pass = 0;
  long long right_pass = 0;
  long long left_primary = 0;   // Green/V among left passes
  long long right_primary = 0;

  Tally& operator+=(const Tally& o) {
    pairs += o.pairs;
    coinc += o.coinc;
    same += o.same;
    diff += o.diff;
    left_pass += o.left_pass;
    right_pass += o.right_pass;
    left_primary += o.left_primary;
    right_primary += o.right_primary;
    return *this;
  }
};

void tally_record(Tally& t, const CoincidenceRecord& rec) {
  ++t.pairs;
  if (rec.passed_left) {
    ++t.left_pass;
    if (*rec.color_left == Color::Green || *rec.color_left == Color::V) ++t.left_primary;
  }
  if (rec.passed_right) {
    ++t.right_pass;
    if (*rec.color_right == Color::Green || *rec.color_right == Color::V) ++t.right_primary;
  }
  if (rec.coincident()) {
    ++t.coinc;
    if (*rec.color_left == *rec.color_right) {
      ++t.same;
    } else {
      ++t.diff;
    }
  }
}

CorrelationEstimate to_estimate(const Tally& t) {
  return CorrelationEstimate{t.pairs, t.coinc, t.same, t.diff};
}

// Splits `pairs` across shards, runs each shard on its own stream, merges in
// shard order. Sequential and threaded execution give identical totals.
template <typename T, typename Fn>
T run_sharded(long long pairs, std::uint64_t seed, int shards, Fn&& shard_fn) {
  if (shards < 1) throw ConfigError("shards must be >= 1");
  const long long base = pairs / shards;
  const long long rem = pairs % shards;
  auto shard_pairs = [&](int k) { return base + (k < rem ? 1 : 0); };

  if (shards == 1) {
    return shard_fn(substream_seed(seed, 0), pairs);
  }
  std::vector<std::future<T>> futures;
  futures.reserve(static_cast<std::size_t>(shards));
  for (int k = 0; k < shards; ++k) {
    futures.push_back(std::async(std::launch::async, shard_fn,
                                 substream_seed(seed, static_cast<std::uint64_t>(k)), shard_pairs(k)));
  }
  T total{};
  for (auto& f : futures) total += f.get();
  return total;
}

int sweep_point_count(const SweepProtocol& grid) {
  return static_cast<int>(std::floor((grid.end_deg - grid.start_deg) / grid.step_deg + 1e-9)) + 1;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (pairs < 1) throw ConfigError("pairs must be >= 1");
  if (shards < 1) throw ConfigError("shards must be >= 1");
  if (const auto* ap = std::get_if<ApertureModel>(&model)) {
    try {
      epr::validate(ap->aperture);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (const auto* sweep = std::get_if<SweepProtocol>(&protocol)) {
    if (!(sweep->step_deg > 0.0)) throw ConfigError("sweep step must be > 0");
    if (sweep->end_deg < sweep->start_deg) throw ConfigError("sweep end must be >= start");
  } else if (const auto* rnd = std::get_if<Random360Protocol>(&protocol)) {
    const double w = rnd->bin_width_deg;
    if (!(w > 0.0)) throw ConfigError("bin width must be > 0");
    const double k = 180.0 / w;
    if (std::abs(k - std::round(k)) > 1e-9) throw ConfigError("bin width must divide 180");
  } else if (const auto* three = std::get_if<ThreeSettingProtocol>(&protocol)) {
    ProgramModel check(three->options_deg);  // validates distinctness
    (void)check;
  }
}

double CorrelationEstimate::e() const {
  if (!defined()) return kNan;
  return static_cast<double>(n_same - n_diff) / static_cast<double>(n_coincident);
}

double CorrelationEstimate::rate() const {
  if (!defined()) return kNan;
  return (1.0 + e()) / 2.0;
}

double CorrelationEstimate::stderr_e() const {
  if (!defined()) return kNan;
  const double ee = e();
  return std::sqrt(std::max(0.0, 1.0 - ee * ee) / static_cast<double>(n_coincident));
}

CorrelationEstimate& CorrelationEstimate::operator+=(const CorrelationEstimate& other) {
  n_pairs += other.n_pairs;
  n_coincident += other.n_coincident;
  n_same += other.n_same;
  n_diff += other.n_diff;
  return *this;
}

double PassRates::left() const {
  return pairs > 0 ? static_cast<double>(left_passes) / static_cast<double>(pairs) : kNan;
}

double PassRates::right() const {
  return pairs > 0 ? static_cast<double>(right_passes) / static_cast<double>(pairs) : kNan;
}

double Random360Result::double_pass_fraction() const {
  return pairs > 0 ? static_cast<double>(double_passes) / static_cast<double>(pairs) : kNan;
}

double MenuRunResult::match_rate(int i, int j) const {
  return days > 0
             ? static_cast<double>(matches[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) /
                   static_cast<double>(days)
             : kNan;
}

CorrelationEstimate run_fixed(const ApertureModel& model, FixedSettings settings,
                              long long pairs, std::uint64_t seed, int shards) {
  const Angle left = Angle::of(settings.left_deg);
  const Angle right = Angle::of(settings.right_deg);
  const Tally total = run_sharded<Tally>(pairs, seed, shards, [&](std::uint64_t shard_seed, long long n) {
    Rng rng(shard_seed);
    Tally t;
    for (long long i = 0; i < n; ++i) {
      const HiddenPair pair = sample_pair(model.pairing, rng);
      tally_record(t, measure_pair(model, pair, left, right));
    }
    return t;
  });
  return to_estimate(total);
}

std::vector<SweepPoint> run_sweep(const ApertureModel& model, SweepProtocol grid,
                                  long long pairs_per_point, std::uint64_t seed, int shards) {
  if (!(grid.step_deg > 0.0)) throw ConfigError("sweep step must be > 0");
  if (grid.end_deg < grid.start_deg) throw ConfigError("sweep end must be >= start");
  const int points = sweep_point_count(grid);
  std::vector<SweepPoint> curve;
  curve.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double theta = grid.start_deg + grid.step_deg * k;
    const std::uint64_t point_seed = substream_seed(seed, static_cast<std::uint64_t>(k));
    curve.push_back({theta, run_fixed(model, {0.0, theta}, pairs_per_point, point_seed, shards)});
  }
  return curve;
}

namespace {

// Matrix tally for the three-setting protocol, merged across shards.
struct ThreeTally {
  std::array<std::array<Tally, 3>, 3> cells{};
  long long eq_coinc = 0;
  long long eq_same = 0;

  ThreeTally& operator+=(const ThreeTally& o) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            o.cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
    eq_coinc += o.eq_coinc;
    eq_same += o.eq_same;
    return *this;
  }
};

ThreeSettingResult assemble_three(const ThreeTally& total, const std::array<double, 3>& options) {
  ThreeSettingResult result;
  result.options_deg = options;
  Tally pooled;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Tally& cell = total.cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      result.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = to_estimate(cell);
      pooled += cell;
    }
  }
  result.pooled = to_estimate(pooled);
  result.equal_setting_coincidences = total.eq_coinc;
  result.equal_setting_same_color = total.eq_same;
  return result;
}

}  // namespace

ThreeSettingResult run_three_setting(const ApertureModel& model, ThreeSettingProtocol protocol,
                                     long long pairs, std::uint64_t seed, int shards) {
  const std::array<double, 3> options = ProgramModel(protocol.options_deg).options_deg();
  std::array<Angle, 3> axes;
  for (int i = 0; i < 3; ++i) axes[static_cast<std::size_t>(i)] = Angle::of(options[static_cast<std::size_t>(i)]);

  const ThreeTally total = run_sharded<ThreeTally>(pairs, seed, shards, [&](std::uint64_t shard_seed, long long n) {
    Rng rng(shard_seed);
    ThreeTally t;
    for (long long k = 0; k < n; ++k) {
      // Hidden variables first, then the free setting choices.
      const HiddenPair pair = sample_pair(model.pairing, rng);
      const std::uint32_t i = rng.below(3);
      const std::uint32_t j = rng.below(3);
      Tally& cell = t.cells[i][j];
      const CoincidenceRecord rec = measure_pair(model, pair, axes[i], axes[j]);
      tally_record(cell, rec);
      if (i == j && rec.coincident()) {
        ++t.eq_coinc;
        if (*rec.color_left == *rec.color_right) ++t.eq_same;
      }
    }
    return t;
  });
  return assemble_three(total, options);
}

ThreeSettingResult run_three_setting(const ProgramModel& model, long long pairs,
                                     std::uint64_t seed, int shards) {
  const std::array<Program, 8> programs = all_programs();
  const ThreeTally total = run_sharded<ThreeTally>(pairs, seed, shards, [&](std::uint64_t shard_seed, long long n) {
    Rng rng(shard_seed);
    ThreeTally t;
    for (long long k = 0; k < n; ++k) {
      const Program& program = programs[rng.below(8)];
      const std::uint32_t i = rng.below(3);
      const std::uint32_t j = rng.below(3);
      Tally& cell = t.cells[i][j];
      ++cell.pairs;
      ++cell.coinc;  // no aperture: every pair is detected
      ++cell.left_pass;
      ++cell.right_pass;
      const bool same = program.left(static_cast<int>(i)) == program.right(static_cast<int>(j));
      if (same) {
        ++cell.same;
      } else {
        ++cell.diff;
      }
      if (i == j) {
        ++t.eq_coinc;
        if (same) ++t.eq_same;
      }
    }
    return t;
  });
  return assemble_three(total, model.options_deg());
}

CorrelationEstimate run_fixed(const ProgramModel& model, FixedSettings settings,
                              long long pairs, std::uint64_t seed, int shards) {
  const int i = model.option_index(settings.left_deg);
  const int j = model.option_index(settings.right_deg);
  const std::array<Program, 8> programs = all_programs();
  const Tally total = run_sharded<Tally>(pairs, seed, shards, [&](std::uint64_t shard_seed, long long n) {
    Rng rng(shard_seed);
    Tally t;
    for (long long k = 0; k < n; ++k) {
      const Program& program = programs[rng.below(8)];
      ++t.pairs;
      ++t.coinc;
      ++t.left_pass;
      ++t.right_pass;
      if (program.left(i) == program.right(j)) {
        ++t.same;
      } else {
        ++t.diff;
      }
    }
    return t;
  });
  return to_estimate(total);
}

namespace {

struct BinsTally {
  std::vector<Tally> bins;
  long long pairs = 0;
  long long double_passes = 0;

  BinsTally& operator+=(const BinsTally& o) {
    if (bins.empty()) bins.resize(o.bins.size());
    for (std::size_t b = 0; b < bins.size(); ++b) bins[b] += o.bins[b];
    pairs += o.pairs;
    double_passes += o.double_passes;
    return *this;
  }
};

}  // namespace

Random360Result run_random_360(const ApertureModel& model, Random360Protocol protocol,
                               long long pairs, std::uint64_t seed, int shards) {
  const double w = protocol.bin_width_deg;
  if (!(w > 0.0) || std::abs(180.0 / w - std::round(180.0 / w)) > 1e-9) {
    throw ConfigError("bin width must be > 0 and divide 180");
  }
  const int n_bins = static_cast<int>(std::round(180.0 / w));

  const BinsTally total = run_sharded<BinsTally>(pairs, seed, shards, [&](std::uint64_t shard_seed, long long n) {
    Rng rng(shard_seed);
    BinsTally t;
    t.bins.resize(static_cast<std::size_t>(n_bins));
    for (long long k = 0; k < n; ++k) {
      const HiddenPair pair = sample_pair(model.pairing, rng);
      const double a = rng.uniform(0.0, 360.0);
      const double b = rng.uniform(0.0, 360.0);
      const double theta = separation_deg(a, b);
      const int bin = std::min(static_cast<int>(theta / w), n_bins - 1);
      const CoincidenceRecord rec = measure_pair(model, pair, Angle::of(a), Angle::of(b));
      tally_record(t.bins[static_cast<std::size_t>(bin)], rec);
      ++t.pairs;
      if (rec.coincident()) ++t.double_passes;
    }
    return t;
  });

  Random360Result result;
  result.bin_width_deg = w;
  result.pairs = total.pairs;
  result.double_passes = total.double_passes;
  result.bins.reserve(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) {
    result.bins.push_back({(b + 0.5) * w, to_estimate(total.bins[static_cast<std::size_t>(b)])});
  }
  return result;
}

PassRates pass_rate_side(const ApertureModel& model, FixedSettings settings,
                         long long pairs, std::uint64_t seed, int shards) {
  const Angle left = Angle::of(settings.left_deg);
  const Angle right = Angle::of(settings.right_deg);
  const Tally total = run_sharded<Tally>(pairs, seed, shards, [&](std::uint64_t shard_seed, long long n) {
    Rng rng(shard_seed);
    Tally t;
    for (long long i = 0; i < n; ++i) {
      const HiddenPair pair = sample_pair(model.pairing, rng);
      tally_record(t, measure_pair(model, pair, left, right));
    }
    return t;
  });

  PassRates rates;
  rates.pairs = total.pairs;
  rates.left_passes = total.left_pass;
  rates.right_passes = total.right_pass;
  rates.left_primary_rate =
      total.left_pass > 0 ? static_cast<double>(total.left_primary) / static_cast<double>(total.left_pass) : kNan;
  rates.right_primary_rate =
      total.right_pass > 0 ? static_cast<double>(total.right_primary) / static_cast<double>(total.right_pass) : kNan;
  return rates;
}

double qm_overall_match(Particle particle, const std::array<double, 3>& options_deg) {
  double sum = 0.0;
  for (double a : options_deg) {
    for (double b : options_deg) {
      sum += (1.0 + qm_correlation(particle, separation_deg(a, b))) / 2.0;
    }
  }
  return sum / 9.0;
}

MenuRunResult run_menu(const MenuWorld& world, long long days, std::uint64_t seed) {
  if (days < 1) throw ConfigError("days must be >= 1");
  if (world.chains.empty()) throw ConfigError("menu world has no chains");

  MenuRunResult result;
  for (const auto& [name, menu] : world.chains) result.chains.push_back(name);
  const std::size_t n = result.chains.size();
  result.days = days;
  result.matches.assign(n, std::vector<long long>(n, 0));

  const int rows = world.max_rows();
  const int cols = world.max_cols();
  Rng rng(substream_seed(seed, 0));
  std::vector<const std::string*> meal(n);
  for (long long day = 0; day < days; ++day) {
    const SharedNumbers shared{static_cast<int>(rng.below(static_cast<std::uint32_t>(rows))),
                               static_cast<int>(rng.below(static_cast<std::uint32_t>(cols)))};
    for (std::size_t i = 0; i < n; ++i) {
      meal[i] = &world.menu_of(result.chains[i]).at_clamped(shared.row, shared.col);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (*meal[i] == *meal[j]) ++result.matches[i][j];
      }
    }
  }
  return result;
}

}  // namespace epr
