#include "epr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <set>
#include <sstream>

#include "epr/csv.hpp"
#include "epr/engine.hpp"
#include "epr/inequalities.hpp"
#include "epr/oracle.hpp"
#include "epr/svg.hpp"
#include "epr/version.hpp"

namespace epr {
namespace {

using nlohmann::json;

// Raised when a required scalar result has no coincidences behind it.
struct UndefinedResultError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// flag parsing

struct ModelSpec {
  enum class Kind { Aperture, Programs, Menu };
  Kind kind = Kind::Aperture;
  Aperture aperture = FigureEight{};
};

ModelSpec parse_model(const std::string& spec) {
  ModelSpec m;
  if (spec == "figure-eight") {
    m.aperture = FigureEight{};
  } else if (spec == "rose") {
    m.aperture = Rose{};
  } else if (spec.rfind("circle:", 0) == 0) {
    m.aperture = Circle{parse_double(spec.substr(7))};
  } else if (spec.rfind("slit:", 0) == 0) {
    m.aperture = Slit{parse_double(spec.substr(5))};
  } else if (spec == "programs") {
    m.kind = ModelSpec::Kind::Programs;
  } else if (spec == "menu") {
    m.kind = ModelSpec::Kind::Menu;
  } else {
    throw ConfigError("unknown model '" + spec +
                      "' (expected figure-eight, rose, circle:<d>, slit:<eps>, programs, menu)");
  }
  if (m.kind == ModelSpec::Kind::Aperture) validate(m.aperture);
  return m;
}

Pairing parse_pairing(const std::string& s) {
  if (s == "head-to-toe") return Pairing::HeadToToe;
  if (s == "back-to-back") return Pairing::BackToBack;
  throw ConfigError("unknown pairing '" + s + "' (expected head-to-toe or back-to-back)");
}

Particle parse_particle(const std::string& s, Pairing pairing) {
  if (s == "spin-half") return Particle::SpinHalf;
  if (s == "photon") return Particle::Photon;
  if (s == "auto") return pairing == Pairing::HeadToToe ? Particle::SpinHalf : Particle::Photon;
  throw ConfigError("unknown particle '" + s + "' (expected spin-half, photon, auto)");
}

std::vector<double> parse_number_list(const std::string& csv, std::size_t expected, const char* what) {
  std::vector<double> values;
  std::string field;
  std::istringstream in(csv);
  while (std::getline(in, field, ',')) values.push_back(parse_double(field));
  if (values.size() != expected) {
    throw ConfigError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated values");
  }
  return values;
}

ApertureModel require_aperture(const ModelSpec& model, Pairing pairing, const char* subcommand) {
  if (model.kind != ModelSpec::Kind::Aperture) {
    throw ConfigError(std::string(subcommand) + " needs an aperture model (figure-eight, rose, circle:<d>, slit:<eps>)");
  }
  return ApertureModel{model.aperture, pairing};
}

// ---------------------------------------------------------------------------
// config file overlay: values act as defaults, explicit flags override

class ConfigBinder {
 public:
  explicit ConfigBinder(const json* config) : config_(config) {}

  template <typename T>
  void bind(const std::string& key, T& value) {
    known_.insert(key);
    if (config_ != nullptr && config_->contains(key)) config_->at(key).get_to(value);
  }

  void finish(const std::string& subcommand) const {
    if (config_ == nullptr) return;
    for (const auto& [key, value] : config_->items()) {
      if (key == "subcommand") continue;
      if (known_.find(key) == known_.end()) {
        throw ConfigError("unknown config key '" + key + "' for subcommand " + subcommand);
      }
    }
  }

 private:
  const json* config_;
  std::set<std::string> known_;
};

// ---------------------------------------------------------------------------
// output helpers

std::string iso_utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json estimate_json(const CorrelationEstimate& e) {
  json j{{"n_pairs", e.n_pairs},
         {"n_coincident", e.n_coincident},
         {"n_same", e.n_same},
         {"n_diff", e.n_diff}};
  if (e.defined()) {
    j["E"] = e.e();
    j["rate"] = e.rate();
    j["stderr"] = e.stderr_e();
  } else {
    j["E"] = nullptr;
    j["rate"] = nullptr;
    j["stderr"] = nullptr;
  }
  return j;
}

json curve_json(const std::vector<SweepPoint>& curve) {
  json rows = json::array();
  for (const SweepPoint& p : curve) {
    json row = estimate_json(p.est);
    row["theta_deg"] = p.theta_deg;
    rows.push_back(row);
  }
  return rows;
}

void deliver(const std::string& out_path, const std::string& payload, const char* what) {
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    write_file(out_path, payload);
    std::cout << what << " written to " << out_path << "\n";
  }
}

// The manifest echoes everything needed to reproduce the run bit for bit.
void write_manifest(const std::string& subcommand, json config_echo, const json& outputs,
                    const std::string& started_utc) {
  if (outputs.empty()) return;
  config_echo["subcommand"] = subcommand;
  const json manifest{{"tool", kToolName},
                      {"version", kToolVersion},
                      {"subcommand", subcommand},
                      {"config", config_echo},
                      {"started_utc", started_utc},
                      {"finished_utc", iso_utc_now()},
                      {"outputs", outputs}};
  std::string anchor;
  for (const auto& [key, path] : outputs.items()) {
    anchor = path.get<std::string>();
    if (key == "data") break;  // prefer the data file as the anchor
  }
  write_file(anchor + ".manifest.json", manifest.dump(2) + "\n");
}

std::string format_choice(const std::string& format, const char* fallback) {
  return format.empty() ? fallback : format;
}

// ---------------------------------------------------------------------------
// subcommand options

struct RunCommon {
  std::string model = "figure-eight";
  std::string pairing = "head-to-toe";
  long long pairs = 1'000'000;
  std::uint64_t seed = 0;
  int shards = 1;
  std::string out;
  std::string svg;
  std::string format;

  void bind(ConfigBinder& b) {
    b.bind("model", model);
    b.bind("pairing", pairing);
    b.bind("pairs", pairs);
    b.bind("seed", seed);
    b.bind("shards", shards);
    b.bind("out", out);
    b.bind("svg", svg);
    b.bind("format", format);
  }
  json echo() const {
    return json{{"model", model}, {"pairing", pairing}, {"pairs", pairs},     {"seed", seed},
                {"shards", shards}, {"out", out},       {"format", format},   {"svg", svg}};
  }
  void add_flags(CLI::App* sub, bool with_svg) {
    sub->add_option("--model", model,
                    "figure-eight | rose | circle:<d> | slit:<eps> | programs | menu")
        ->capture_default_str();
    sub->add_option("--pairing", pairing, "head-to-toe | back-to-back")->capture_default_str();
    sub->add_option("--pairs", pairs, "number of pairs per condition")->capture_default_str();
    sub->add_option("--seed", seed, "64-bit stream seed")->capture_default_str();
    sub->add_option("--shards", shards, "independent RNG shards (deterministic merge)")
        ->capture_default_str();
    sub->add_option("--out", out, "write results to this file");
    sub->add_option("--format", format, "csv | json (default csv for curve outputs)");
    if (with_svg) sub->add_option("--svg", svg, "also write an SVG line plot");
  }
};

// --- sweep -------------------------------------------------------------------

struct SweepOpts {
  RunCommon common;
  double start = 0.0, end = 180.0, step = 1.0;
};

int run_sweep_cmd(const SweepOpts& o) {
  const std::string started = iso_utc_now();
  const ModelSpec model = parse_model(o.common.model);
  const ApertureModel ap = require_aperture(model, parse_pairing(o.common.pairing), "sweep");
  ExperimentConfig config{ap, SweepProtocol{o.start, o.end, o.step}, o.common.pairs, o.common.seed,
                          o.common.shards};
  config.validate();

  const std::vector<SweepPoint> curve =
      run_sweep(ap, SweepProtocol{o.start, o.end, o.step}, o.common.pairs, o.common.seed, o.common.shards);

  const std::string fmt = format_choice(o.common.format, "csv");
  std::string payload;
  if (fmt == "csv") {
    payload = curve_to_csv(curve);
  } else if (fmt == "json") {
    payload = curve_json(curve).dump(2) + "\n";
  } else {
    throw ConfigError("sweep supports --format csv|json");
  }
  deliver(o.common.out, payload, "curve");

  json outputs = json::object();
  if (!o.common.out.empty()) outputs["data"] = o.common.out;
  if (!o.common.svg.empty()) {
    Series mc{"E (" + aperture_name(ap.aperture) + ", " + pairing_name(ap.pairing) + ")", {}};
    for (const SweepPoint& p : curve) mc.points.emplace_back(p.theta_deg, p.est.e());
    write_file(o.common.svg, render_svg({mc}, SvgOptions{-1.0, 1.0, "E", "correlation sweep"}));
    outputs["svg"] = o.common.svg;
  }
  json echo = o.common.echo();
  echo["start"] = o.start;
  echo["end"] = o.end;
  echo["step"] = o.step;
  write_manifest("sweep", echo, outputs, started);
  return 0;
}

// --- fixed ---------------------------------------------------------------------

struct FixedOpts {
  RunCommon common;
  double left = 0.0, right = 0.0;
  std::string options = "0,22.5,67.5";  // used by the program model
};

int run_fixed_cmd(const FixedOpts& o) {
  const std::string started = iso_utc_now();
  const ModelSpec model = parse_model(o.common.model);
  const Pairing pairing = parse_pairing(o.common.pairing);

  CorrelationEstimate est;
  std::string model_label;
  if (model.kind == ModelSpec::Kind::Programs) {
    const auto opts = parse_number_list(o.options, 3, "--options");
    ProgramModel pm({opts[0], opts[1], opts[2]});
    est = run_fixed(pm, FixedSettings{o.left, o.right}, o.common.pairs, o.common.seed, o.common.shards);
    model_label = "programs";
  } else {
    const ApertureModel ap = require_aperture(model, pairing, "fixed");
    ExperimentConfig config{ap, FixedSettings{o.left, o.right}, o.common.pairs, o.common.seed,
                            o.common.shards};
    config.validate();
    est = run_fixed(ap, FixedSettings{o.left, o.right}, o.common.pairs, o.common.seed, o.common.shards);
    model_label = aperture_name(ap.aperture);
  }
  if (!est.defined()) {
    throw UndefinedResultError("no coincidences at settings (" + format_double(o.left) + ", " +
                               format_double(o.right) + ") deg");
  }

  const double theta = separation_deg(o.left, o.right);
  const std::string fmt = format_choice(o.common.format, "csv");
  std::string payload;
  if (fmt == "csv") {
    payload = curve_to_csv({SweepPoint{theta, est}});
  } else if (fmt == "json") {
    json j = estimate_json(est);
    j["left_deg"] = o.left;
    j["right_deg"] = o.right;
    j["theta_deg"] = theta;
    j["model"] = model_label;
    payload = j.dump(2) + "\n";
  } else {
    throw ConfigError("fixed supports --format csv|json");
  }
  deliver(o.common.out, payload, "estimate");
  if (!o.common.out.empty()) {
    std::cout << "E = " << format_double(est.e()) << " +- " << format_double(est.stderr_e()) << " ("
              << est.n_coincident << " coincidences)\n";
  }

  json outputs = json::object();
  if (!o.common.out.empty()) outputs["data"] = o.common.out;
  json echo = o.common.echo();
  echo["left"] = o.left;
  echo["right"] = o.right;
  echo["options"] = o.options;
  write_manifest("fixed", echo, outputs, started);
  return 0;
}

// --- three-setting ----------------------------------------------------------

struct ThreeOpts {
  RunCommon common;
  std::string options = "0,22.5,67.5";
};

int run_three_cmd(const ThreeOpts& o) {
  const std::string started = iso_utc_now();
  const ModelSpec model = parse_model(o.common.model);
  const auto opt_values = parse_number_list(o.options, 3, "--options");
  const std::array<double, 3> options{opt_values[0], opt_values[1], opt_values[2]};

  ThreeSettingResult result;
  bool is_programs = false;
  if (model.kind == ModelSpec::Kind::Programs) {
    result = run_three_setting(ProgramModel(options), o.common.pairs, o.common.seed, o.common.shards);
    is_programs = true;
  } else {
    const ApertureModel ap = require_aperture(model, parse_pairing(o.common.pairing), "three-setting");
    ExperimentConfig config{ap, ThreeSettingProtocol{options}, o.common.pairs, o.common.seed,
                            o.common.shards};
    config.validate();
    result = run_three_setting(ap, ThreeSettingProtocol{options}, o.common.pairs, o.common.seed,
                               o.common.shards);
  }
  if (!result.pooled.defined()) {
    throw UndefinedResultError("no coincidences across the three-setting run");
  }

  const double qm_sh = qm_overall_match(Particle::SpinHalf, result.options_deg);
  const double qm_ph = qm_overall_match(Particle::Photon, result.options_deg);

  const std::string fmt = format_choice(o.common.format, "csv");
  std::string payload;
  if (fmt == "csv") {
    std::string csv = "left_deg,right_deg,n_pairs,n_coincident,n_same,n_diff,E,rate,stderr\n";
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const CorrelationEstimate& e = result.matrix[i][j];
        csv += format_double(result.options_deg[i]) + "," + format_double(result.options_deg[j]) + "," +
               std::to_string(e.n_pairs) + "," + std::to_string(e.n_coincident) + "," +
               std::to_string(e.n_same) + "," + std::to_string(e.n_diff) + "," + format_double(e.e()) +
               "," + format_double(e.rate()) + "," + format_double(e.stderr_e()) + "\n";
      }
    }
    payload = csv;
  } else if (fmt == "json") {
    json matrix = json::array();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        json cell = estimate_json(result.matrix[i][j]);
        cell["left_deg"] = result.options_deg[i];
        cell["right_deg"] = result.options_deg[j];
        matrix.push_back(cell);
      }
    }
    json j{{"options_deg", result.options_deg},
           {"matrix", matrix},
           {"pooled", estimate_json(result.pooled)},
           {"overall_match_rate", result.overall_match_rate()},
           {"equal_setting_coincidences", result.equal_setting_coincidences},
           {"equal_setting_same_color", result.equal_setting_same_color},
           {"qm_overall_spin_half", qm_sh},
           {"qm_overall_photon", qm_ph}};
    if (is_programs) {
      j["exact_overall"] = ProgramModel(options).overall().str();
    }
    payload = j.dump(2) + "\n";
  } else {
    throw ConfigError("three-setting supports --format csv|json");
  }
  deliver(o.common.out, payload, "matrix");

  std::cout << "overall match rate among coincidences: " << format_double(result.overall_match_rate());
  if (is_programs) {
    std::cout << " (exact " << ProgramModel(options).overall().str() << ")";
  }
  std::cout << "\nequal-setting coincidences: " << result.equal_setting_coincidences
            << ", same-colored: " << result.equal_setting_same_color << "\n";
  std::cout << "QM analytic overall at these options: spin-half " << format_double(qm_sh) << ", photon "
            << format_double(qm_ph) << "\n";

  json outputs = json::object();
  if (!o.common.out.empty()) outputs["data"] = o.common.out;
  json echo = o.common.echo();
  echo["options"] = o.options;
  write_manifest("three-setting", echo, outputs, started);
  return 0;
}

// --- random360 ----------------------------------------------------------------

struct Random360Opts {
  RunCommon common;
  double bin_width = 5.0;
};

int run_random360_cmd(const Random360Opts& o) {
  const std::string started = iso_utc_now();
  const ModelSpec model = parse_model(o.common.model);
  const ApertureModel ap = require_aperture(model, parse_pairing(o.common.pairing), "random360");
  ExperimentConfig config{ap, Random360Protocol{o.bin_width}, o.common.pairs, o.common.seed,
                          o.common.shards};
  config.validate();

  const Random360Result result =
      run_random_360(ap, Random360Protocol{o.bin_width}, o.common.pairs, o.common.seed, o.common.shards);
  const double exact_fraction = quadrature_double_pass_random(ap, QuadratureSpec{3600}, 720);

  const std::string fmt = format_choice(o.common.format, "csv");
  std::string payload;
  if (fmt == "csv") {
    payload = curve_to_csv(result.bins);
  } else if (fmt == "json") {
    json j{{"bin_width_deg", result.bin_width_deg},
           {"bins", curve_json(result.bins)},
           {"pairs", result.pairs},
           {"double_passes", result.double_passes},
           {"double_pass_fraction", result.double_pass_fraction()},
           {"double_pass_uniform_exact", exact_fraction}};
    payload = j.dump(2) + "\n";
  } else {
    throw ConfigError("random360 supports --format csv|json");
  }
  deliver(o.common.out, payload, "binned curve");
  std::cout << "double-pass fraction: " << format_double(result.double_pass_fraction())
            << " (uniform-settings quadrature value: " << format_double(exact_fraction) << ")\n";

  json outputs = json::object();
  if (!o.common.out.empty()) outputs["data"] = o.common.out;
  if (!o.common.svg.empty()) {
    Series mc{"E (" + aperture_name(ap.aperture) + ", binned)", {}};
    for (const SweepPoint& p : result.bins) mc.points.emplace_back(p.theta_deg, p.est.e());
    write_file(o.common.svg, render_svg({mc}, SvgOptions{-1.0, 1.0, "E", "random-360 binned correlation"}));
    outputs["svg"] = o.common.svg;
  }
  json echo = o.common.echo();
  echo["bin-width"] = o.bin_width;
  write_manifest("random360", echo, outputs, started);
  return 0;
}

// --- chsh -----------------------------------------------------------------------

struct ChshOpts {
  RunCommon common;
  std::string settings;  // "a1,b1,c2,d2"; empty = defaults for the pairing
  std::string particle = "auto";
};

int run_chsh_cmd(const ChshOpts& o) {
  const std::string started = iso_utc_now();
  const ModelSpec model = parse_model(o.common.model);
  const Pairing pairing = parse_pairing(o.common.pairing);
  const ApertureModel ap = require_aperture(model, pairing, "chsh");
  validate(ap.aperture);
  const Particle particle = parse_particle(o.particle, pairing);

  ChshSettings settings = default_chsh_settings(particle);
  if (!o.settings.empty()) {
    const auto v = parse_number_list(o.settings, 4, "--settings");
    settings = ChshSettings{v[0], v[1], v[2], v[3]};
  }

  const ChshEstimate est =
      chsh_from_model(ap, settings, o.common.pairs, o.common.seed, o.common.shards);
  if (!est.defined) {
    throw UndefinedResultError("a CHSH correlation had no coincidences; S is undefined");
  }

  const double qm_s =
      chsh(correlations_from_curve([&](double t) { return qm_correlation(particle, t); }, settings));
  const double linear_s =
      chsh(correlations_from_curve([&](double t) { return linear_correlation(t, pairing); }, settings));

  const std::string fmt = format_choice(o.common.format, "text");
  std::string payload;
  if (fmt == "json") {
    json parts = json::array();
    const char* labels[4] = {"b1d2", "a1d2", "b1c2", "a1c2"};
    for (int k = 0; k < 4; ++k) {
      json p = estimate_json(est.parts[k]);
      p["pair"] = labels[k];
      parts.push_back(p);
    }
    json j{{"S", est.s},
           {"stderr", est.stderr_s},
           {"violated", est.s > 2.0},
           {"settings_deg", {settings.a1_deg, settings.b1_deg, settings.c2_deg, settings.d2_deg}},
           {"parts", parts},
           {"reference_qm_S", qm_s},
           {"reference_linear_S", linear_s}};
    payload = j.dump(2) + "\n";
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "S = " << format_double(est.s) << " +- " << format_double(est.stderr_s)
        << "  (violated: " << (est.s > 2.0 ? "yes" : "no") << ", bound 2)\n";
    out << "settings (deg): a1=" << format_double(settings.a1_deg) << " b1=" << format_double(settings.b1_deg)
        << " c2=" << format_double(settings.c2_deg) << " d2=" << format_double(settings.d2_deg) << "\n";
    out << "q(b1,d2)=" << format_double(est.parts[0].e()) << " q(a1,d2)=" << format_double(est.parts[1].e())
        << " q(b1,c2)=" << format_double(est.parts[2].e())
        << " q(a1,c2)=" << format_double(est.parts[3].e()) << "\n";
    out << "references at these settings: quantum " << format_double(qm_s) << ", linear "
        << format_double(linear_s) << "\n";
    payload = out.str();
  } else {
    throw ConfigError("chsh supports --format text|json");
  }
  deliver(o.common.out, payload, "chsh result");

  json outputs = json::object();
  if (!o.common.out.empty()) outputs["data"] = o.common.out;
  json echo = o.common.echo();
  echo["settings"] = o.settings;
  echo["particle"] = o.particle;
  write_manifest("chsh", echo, outputs, started);
  return 0;
}

// --- programs ---------------------------------------------------------------

struct ProgramsOpts {
  std::string options = "0,22.5,67.5";
  std::string format;
  std::string out;
};

int run_programs_cmd(const ProgramsOpts& o) {
  const std::string started = iso_utc_now();
  const auto v = parse_number_list(o.options, 3, "--options");
  const ProgramModel pm({v[0], v[1], v[2]});

  const std::string fmt = format_choice(o.format, "text");
  std::string payload;
  if (fmt == "json") {
    json matrix = json::array();
    for (int i = 0; i < 3; ++i) {
      json row = json::array();
      for (int j = 0; j < 3; ++j) row.push_back(pm.match_probability_by_index(i, j).str());
      matrix.push_back(row);
    }
    json j{{"options_deg", pm.options_deg()},
           {"match_matrix", matrix},
           {"overall", pm.overall().str()},
           {"best_single_program", ProgramModel::best_single_program().str()}};
    payload = j.dump(2) + "\n";
  } else if (fmt == "csv") {
    std::string csv = "left_deg,right_deg,match_probability\n";
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        csv += format_double(pm.options_deg()[i]) + "," + format_double(pm.options_deg()[j]) + "," +
               pm.match_probability_by_index(i, j).str() + "\n";
      }
    }
    payload = csv;
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "match probability over the 8 programs (rows: left setting, cols: right setting)\n";
    out << "options (deg):";
    for (double d : pm.options_deg()) out << " " << format_double(d);
    out << "\n";
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) out << (j ? "\t" : "") << pm.match_probability_by_index(i, j).str();
      out << "\n";
    }
    out << "overall: " << pm.overall().str() << "\n";
    out << "best single program: " << ProgramModel::best_single_program().str() << "\n";
    payload = out.str();
  } else {
    throw ConfigError("programs supports --format text|csv|json");
  }
  deliver(o.out, payload, "program tables");

  json outputs = json::object();
  if (!o.out.empty()) outputs["data"] = o.out;
  write_manifest("programs", json{{"options", o.options}, {"format", o.format}, {"out", o.out}},
                 outputs, started);
  return 0;
}

// --- bell-count ---------------------------------------------------------------

struct BellCountOpts {
  long long universes = 10'000;
  int max_items = 60;
  std::uint64_t seed = 0;
  std::string regions;  // "A,B,C,D,E,F,G"
  std::string format;
  std::string out;
};

int run_bell_count_cmd(const BellCountOpts& o) {
  const std::string fmt = format_choice(o.format, "text");

  if (!o.regions.empty()) {
    const auto v = parse_number_list(o.regions, 7, "--regions");
    RegionCounts r;
    r.a = static_cast<long long>(v[0]);
    r.b = static_cast<long long>(v[1]);
    r.c = static_cast<long long>(v[2]);
    r.d = static_cast<long long>(v[3]);
    r.e = static_cast<long long>(v[4]);
    r.f = static_cast<long long>(v[5]);
    r.g = static_cast<long long>(v[6]);
    const BellCount bc = bell_count(r);
    std::string payload;
    if (fmt == "json") {
      payload = json{{"lhs", bc.lhs}, {"rhs", bc.rhs}, {"slack", bc.slack}, {"holds", bc.holds}}.dump(2) +
                "\n";
    } else {
      std::ostringstream out;
      out << "n[X,-Y] + n[Y,-Z] = " << bc.lhs << "  >=  n[X,-Z] = " << bc.rhs << "  (slack " << bc.slack
          << ", holds: " << (bc.holds ? "yes" : "no") << ")\n";
      payload = out.str();
    }
    deliver(o.out, payload, "bell count");
    return 0;
  }

  if (o.universes < 1) throw ConfigError("--universes must be >= 1");
  if (o.max_items < 0) throw ConfigError("--max-items must be >= 0");
  Rng rng(substream_seed(o.seed, 0));
  long long held = 0;
  for (long long u = 0; u < o.universes; ++u) {
    const std::uint32_t size = rng.below(static_cast<std::uint32_t>(o.max_items) + 1);
    const double px = rng.uniform01(), py = rng.uniform01(), pz = rng.uniform01();
    std::vector<Membership> universe(size);
    for (Membership& m : universe) {
      m.x = rng.uniform01() < px;
      m.y = rng.uniform01() < py;
      m.z = rng.uniform01() < pz;
    }
    if (bell_count(venn_regions(universe)).holds) ++held;
  }

  const PerturbedScenario scenario = hat_rabbit_scenario(10);
  const PerturbedResult perturbed = perturbed_bell_demo(scenario);
  const bool snapshots_consistent = bell_count(venn_regions(scenario.snap_x_not_y)).holds &&
                                    bell_count(venn_regions(scenario.snap_y_not_z)).holds &&
                                    bell_count(venn_regions(scenario.snap_x_not_z)).holds;

  std::string payload;
  if (fmt == "json") {
    payload = json{{"universes", o.universes},
                   {"held", held},
                   {"perturbed_demo",
                    {{"naive_lhs", perturbed.naive_lhs},
                     {"naive_rhs", perturbed.naive_rhs},
                     {"violated", perturbed.violated},
                     {"each_snapshot_holds", snapshots_consistent}}}}
                  .dump(2) +
              "\n";
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "checked " << o.universes << " random finite universes: counting inequality held in " << held
        << "\n";
    out << "destructive hat-check demo (10 people): naive lhs=" << perturbed.naive_lhs
        << " rhs=" << perturbed.naive_rhs << " -> violated: " << (perturbed.violated ? "yes" : "no")
        << "\n";
    out << "every single consistent snapshot still satisfies the inequality: "
        << (snapshots_consistent ? "yes" : "no") << "\n";
    payload = out.str();
  } else {
    throw ConfigError("bell-count supports --format text|json");
  }
  deliver(o.out, payload, "bell count report");
  return 0;
}

// --- menu-demo -----------------------------------------------------------------

struct MenuOpts {
  long long days = 100'000;
  std::uint64_t seed = 0;
  bool shared_menu = false;
  std::string format;
  std::string out;
};

int run_menu_cmd(const MenuOpts& o) {
  const MenuWorld world = o.shared_menu ? shared_menu_world() : default_menu_world();
  const MenuRunResult result = run_menu(world, o.days, o.seed);

  const std::string fmt = format_choice(o.format, "text");
  std::string payload;
  if (fmt == "json") {
    json rates = json::object();
    for (std::size_t i = 0; i < result.chains.size(); ++i) {
      for (std::size_t j = 0; j < result.chains.size(); ++j) {
        rates[result.chains[i] + "/" + result.chains[j]] =
            result.match_rate(static_cast<int>(i), static_cast<int>(j));
      }
    }
    payload = json{{"days", result.days}, {"chains", result.chains}, {"match_rates", rates}}.dump(2) + "\n";
  } else if (fmt == "csv") {
    std::string csv = "chain_left,chain_right,days,matches,match_rate\n";
    for (std::size_t i = 0; i < result.chains.size(); ++i) {
      for (std::size_t j = 0; j < result.chains.size(); ++j) {
        csv += result.chains[i] + "," + result.chains[j] + "," + std::to_string(result.days) + "," +
               std::to_string(result.matches[i][j]) + "," +
               format_double(result.match_rate(static_cast<int>(i), static_cast<int>(j))) + "\n";
      }
    }
    payload = csv;
  } else if (fmt == "text") {
    std::ostringstream out;
    out << "same-meal rate per chain pair over " << result.days << " days\n";
    for (std::size_t i = 0; i < result.chains.size(); ++i) {
      for (std::size_t j = 0; j < result.chains.size(); ++j) {
        out << result.chains[i] << "/" << result.chains[j] << ": "
            << format_double(result.match_rate(static_cast<int>(i), static_cast<int>(j))) << "\n";
      }
    }
    payload = out.str();
  } else {
    throw ConfigError("menu-demo supports --format text|csv|json");
  }
  deliver(o.out, payload, "menu demo");
  return 0;
}

// --- claim-report ---------------------------------------------------------------

struct ClaimOpts {
  RunCommon common;
  std::string particle = "auto";
  double start = 0.0, end = 180.0, step = 5.0;
  int rho_steps = 14400;
  double tolerance = 0.02;
};

int run_claim_cmd(const ClaimOpts& o) {
  const std::string started = iso_utc_now();
  const ModelSpec model = parse_model(o.common.model);
  const Pairing pairing = parse_pairing(o.common.pairing);
  const ApertureModel ap = require_aperture(model, pairing, "claim-report");
  const Particle particle = parse_particle(o.particle, pairing);
  ExperimentConfig config{ap, SweepProtocol{o.start, o.end, o.step}, o.common.pairs, o.common.seed,
                          o.common.shards};
  config.validate();
  if (o.rho_steps < 360) throw ConfigError("--rho-steps must be >= 360");

  const ClaimReport report =
      claim_report(ap, particle, SweepProtocol{o.start, o.end, o.step}, o.common.pairs, o.common.seed,
                   o.common.shards, QuadratureSpec{o.rho_steps}, o.tolerance);

  const std::string fmt = format_choice(o.common.format, "csv");
  std::string payload;
  if (fmt == "csv") {
    std::string csv =
        "theta_deg,oracle_E,mc_n_pairs,mc_n_coincident,mc_n_same,mc_n_diff,mc_E,mc_stderr,qm_E\n";
    for (const ClaimPoint& p : report.points) {
      csv += format_double(p.theta_deg) + ",";
      csv += (p.oracle_defined ? format_double(p.oracle_e) : std::string("nan")) + ",";
      csv += std::to_string(p.mc.n_pairs) + "," + std::to_string(p.mc.n_coincident) + "," +
             std::to_string(p.mc.n_same) + "," + std::to_string(p.mc.n_diff) + "," +
             format_double(p.mc.e()) + "," + format_double(p.mc.stderr_e()) + "," +
             format_double(p.qm_e) + "\n";
    }
    payload = csv;
  } else if (fmt == "json") {
    json points = json::array();
    for (const ClaimPoint& p : report.points) {
      json row{{"theta_deg", p.theta_deg}, {"qm_E", p.qm_e}, {"mc", estimate_json(p.mc)}};
      if (p.oracle_defined) {
        row["oracle_E"] = p.oracle_e;
      } else {
        row["oracle_E"] = nullptr;
      }
      points.push_back(row);
    }
    json j{{"model", report.model_name},
           {"particle", particle_name(report.particle)},
           {"points", points},
           {"max_abs_deviation_model_vs_qm", report.max_abs_dev_model_vs_qm},
           {"max_abs_deviation_mc_vs_oracle", report.max_abs_dev_mc_vs_oracle},
           {"tolerance", report.tolerance},
           {"verdict", report.verdict}};
    payload = j.dump(2) + "\n";
  } else {
    throw ConfigError("claim-report supports --format csv|json");
  }
  deliver(o.common.out, payload, "claim report");
  std::cout << "max |oracle - QM| = " << format_double(report.max_abs_dev_model_vs_qm)
            << ", max |MC - oracle| = " << format_double(report.max_abs_dev_mc_vs_oracle) << "\n";
  std::cout << report.verdict << "\n";

  json outputs = json::object();
  if (!o.common.out.empty()) outputs["data"] = o.common.out;
  if (!o.common.svg.empty()) {
    Series oracle{"quadrature oracle", {}};
    Series mc{"Monte Carlo", {}};
    Series qm{"quantum curve", {}};
    for (const ClaimPoint& p : report.points) {
      oracle.points.emplace_back(p.theta_deg,
                                 p.oracle_defined ? p.oracle_e : std::nan(""));
      mc.points.emplace_back(p.theta_deg, p.mc.e());
      qm.points.emplace_back(p.theta_deg, p.qm_e);
    }
    write_file(o.common.svg,
               render_svg({oracle, mc, qm}, SvgOptions{-1.0, 1.0, "E", "model vs quantum correlation"}));
    outputs["svg"] = o.common.svg;
  }
  json echo = o.common.echo();
  echo["particle"] = o.particle;
  echo["start"] = o.start;
  echo["end"] = o.end;
  echo["step"] = o.step;
  echo["rho-steps"] = o.rho_steps;
  echo["tolerance"] = o.tolerance;
  write_manifest("claim-report", echo, outputs, started);
  return 0;
}

// ---------------------------------------------------------------------------

json load_config_file(const std::string& path, const std::string& subcommand) {
  json config = json::parse(read_file(path));
  if (config.contains("config")) config = config.at("config");  // accept manifests
  if (config.contains("subcommand") && config.at("subcommand") != subcommand) {
    throw ConfigError("config file is for subcommand '" +
                      config.at("subcommand").get<std::string>() + "', not '" + subcommand + "'");
  }
  return config;
}

int run_app(const std::vector<std::string>& args) {
  CLI::App app{"EPR correlation-experiment simulator: shaped-aperture and shared-randomness "
               "local models, counting/CHSH inequalities, quadrature oracle, claim reports"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(0, 1);

  // Locate the requested subcommand and an optional --config before the real
  // parse, so config values become defaults that explicit flags override.
  std::string subcommand;
  if (!args.empty() && !args.front().empty() && args.front().front() != '-') subcommand = args.front();
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  json config_json;
  const json* config = nullptr;
  if (!config_path.empty()) {
    if (subcommand.empty()) throw ConfigError("--config requires a subcommand");
    config_json = load_config_file(config_path, subcommand);
    config = &config_json;
  }
  const auto binder_for = [&](const char* name) {
    return ConfigBinder(subcommand == name ? config : nullptr);
  };

  SweepOpts sweep_opts;
  FixedOpts fixed_opts;
  ThreeOpts three_opts;
  Random360Opts random_opts;
  ChshOpts chsh_opts;
  ProgramsOpts programs_opts;
  BellCountOpts bell_opts;
  MenuOpts menu_opts;
  ClaimOpts claim_opts;
  int exit_code = 0;

  {
    ConfigBinder b = binder_for("sweep");
    sweep_opts.common.bind(b);
    b.bind("start", sweep_opts.start);
    b.bind("end", sweep_opts.end);
    b.bind("step", sweep_opts.step);
    b.finish("sweep");
    auto* sub = app.add_subcommand("sweep", "Correlation curve: left target fixed at 0, right swept");
    sweep_opts.common.add_flags(sub, true);
    sub->add_option("--start", sweep_opts.start, "first right-target angle (deg)")->capture_default_str();
    sub->add_option("--end", sweep_opts.end, "last right-target angle (deg)")->capture_default_str();
    sub->add_option("--step", sweep_opts.step, "grid step (deg)")->capture_default_str();
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->callback([&] { exit_code = run_sweep_cmd(sweep_opts); });
  }
  {
    ConfigBinder b = binder_for("fixed");
    fixed_opts.common.bind(b);
    b.bind("left", fixed_opts.left);
    b.bind("right", fixed_opts.right);
    b.bind("options", fixed_opts.options);
    b.finish("fixed");
    auto* sub = app.add_subcommand("fixed", "Single-condition run at fixed target settings");
    fixed_opts.common.add_flags(sub, false);
    sub->add_option("--left", fixed_opts.left, "left target angle (deg)")->capture_default_str();
    sub->add_option("--right", fixed_opts.right, "right target angle (deg)")->capture_default_str();
    sub->add_option("--options", fixed_opts.options, "three options for the program model")
        ->capture_default_str();
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->callback([&] { exit_code = run_fixed_cmd(fixed_opts); });
  }
  {
    ConfigBinder b = binder_for("three-setting");
    three_opts.common.bind(b);
    b.bind("options", three_opts.options);
    b.finish("three-setting");
    auto* sub = app.add_subcommand("three-setting",
                                   "Random independent choice among three settings on each side");
    three_opts.common.add_flags(sub, false);
    sub->add_option("--options", three_opts.options, "the three optional angles, comma separated")
        ->capture_default_str();
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->callback([&] { exit_code = run_three_cmd(three_opts); });
  }
  {
    ConfigBinder b = binder_for("random360");
    random_opts.common.bind(b);
    b.bind("bin-width", random_opts.bin_width);
    b.finish("random360");
    auto* sub = app.add_subcommand("random360", "Both settings uniform over 360 degrees, binned curve");
    random_opts.common.add_flags(sub, true);
    sub->add_option("--bin-width", random_opts.bin_width, "bin width (deg), must divide 180")
        ->capture_default_str();
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->callback([&] { exit_code = run_random360_cmd(random_opts); });
  }
  {
    ConfigBinder b = binder_for("chsh");
    chsh_opts.common.bind(b);
    b.bind("settings", chsh_opts.settings);
    b.bind("particle", chsh_opts.particle);
    b.finish("chsh");
    auto* sub = app.add_subcommand("chsh", "CHSH statistic from four engine jobs");
    chsh_opts.common.add_flags(sub, false);
    sub->add_option("--settings", chsh_opts.settings, "a1,b1,c2,d2 (deg); default depends on pairing")
        ->capture_default_str();
    sub->add_option("--particle", chsh_opts.particle, "spin-half | photon | auto")->capture_default_str();
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->callback([&] { exit_code = run_chsh_cmd(chsh_opts); });
  }
  {
    ConfigBinder b = binder_for("programs");
    b.bind("options", programs_opts.options);
    b.bind("format", programs_opts.format);
    b.bind("out", programs_opts.out);
    b.finish("programs");
    auto* sub = app.add_subcommand("programs", "Exact tables of the eight-program deterministic model");
    sub->add_option("--options", programs_opts.options, "the three optional angles")->capture_default_str();
    sub->add_option("--format", programs_opts.format, "text | csv | json");
    sub->add_option("--out", programs_opts.out, "write to this file");
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->callback([&] { exit_code = run_programs_cmd(programs_opts); });
  }
  {
    ConfigBinder b = binder_for("bell-count");
    b.bind("universes", bell_opts.universes);
    b.bind("max-items", bell_opts.max_items);
    b.bind("seed", bell_opts.seed);
    b.bind("regions", bell_opts.regions);
    b.bind("format", bell_opts.format);
    b.bind("out", bell_opts.out);
    b.finish("bell-count");
    auto* sub = app.add_subcommand("bell-count",
                                   "Counting inequality over random universes, plus the destructive demo");
    sub->add_option("--universes", bell_opts.universes, "random universes to draw")->capture_default_str();
    sub->add_option("--max-items", bell_opts.max_items, "max universe size")->capture_default_str();
    sub->add_option("--seed", bell_opts.seed, "RNG seed")->capture_default_str();
    sub->add_option("--regions", bell_opts.regions, "evaluate one case: A,B,C,D,E,F,G");
    sub->add_option("--format", bell_opts.format, "text | json");
    sub->add_option("--out", bell_opts.out, "write to this file");
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->callback([&] { exit_code = run_bell_count_cmd(bell_opts); });
  }
  {
    ConfigBinder b = binder_for("menu-demo");
    b.bind("days", menu_opts.days);
    b.bind("seed", menu_opts.seed);
    b.bind("shared-menu", menu_opts.shared_menu);
    b.bind("format", menu_opts.format);
    b.bind("out", menu_opts.out);
    b.finish("menu-demo");
    auto* sub = app.add_subcommand("menu-demo", "Shared-randomness restaurant model match rates");
    sub->add_option("--days", menu_opts.days, "simulated days")->capture_default_str();
    sub->add_option("--seed", menu_opts.seed, "RNG seed")->capture_default_str();
    sub->add_flag("--shared-menu", menu_opts.shared_menu, "all chains share one identical menu");
    sub->add_option("--format", menu_opts.format, "text | csv | json");
    sub->add_option("--out", menu_opts.out, "write to this file");
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->callback([&] { exit_code = run_menu_cmd(menu_opts); });
  }
  {
    ConfigBinder b = binder_for("claim-report");
    claim_opts.common.bind(b);
    b.bind("particle", claim_opts.particle);
    b.bind("start", claim_opts.start);
    b.bind("end", claim_opts.end);
    b.bind("step", claim_opts.step);
    b.bind("rho-steps", claim_opts.rho_steps);
    b.bind("tolerance", claim_opts.tolerance);
    b.finish("claim-report");
    auto* sub = app.add_subcommand(
        "claim-report", "Oracle, Monte Carlo and quantum curves side by side, with a measured verdict");
    claim_opts.common.add_flags(sub, true);
    sub->add_option("--particle", claim_opts.particle, "spin-half | photon | auto")->capture_default_str();
    sub->add_option("--start", claim_opts.start, "grid start (deg)")->capture_default_str();
    sub->add_option("--end", claim_opts.end, "grid end (deg)")->capture_default_str();
    sub->add_option("--step", claim_opts.step, "grid step (deg)")->capture_default_str();
    sub->add_option("--rho-steps", claim_opts.rho_steps, "oracle quadrature grid size")
        ->capture_default_str();
    sub->add_option("--tolerance", claim_opts.tolerance, "verdict tolerance on |model - QM|")
        ->capture_default_str();
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->callback([&] { exit_code = run_claim_cmd(claim_opts); });
  }

  std::vector<const char*> argv;
  argv.push_back(kToolName);
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);  // prints the diagnostic and usage hint to stderr
    return 2;
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return 0;
  }
  return exit_code;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  try {
    return run_app(args);
  } catch (const UndefinedResultError& e) {
    std::cerr << kToolName << ": " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << kToolName << ": " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << kToolName << ": config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << kToolName << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << kToolName << ": " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args);
}

}  // namespace epr
