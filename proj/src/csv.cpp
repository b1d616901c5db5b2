#include "epr/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace epr {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad numeric field: '" + s + "'");
  }
  return v;
}

namespace {
long long parse_count(const std::string& s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad count field: '" + s + "'");
  }
  return v;
}

constexpr const char* kHeader = "theta_deg,n_pairs,n_coincident,n_same,n_diff,E,rate,stderr";
}  // namespace

std::string curve_to_csv(const std::vector<SweepPoint>& curve) {
  if (curve.empty()) throw std::invalid_argument("cannot emit an empty curve");
  std::string out(kHeader);
  out.push_back('\n');
  for (const SweepPoint& p : curve) {
    out += format_double(p.theta_deg);
    out.push_back(',');
    out += std::to_string(p.est.n_pairs);
    out.push_back(',');
    out += std::to_string(p.est.n_coincident);
    out.push_back(',');
    out += std::to_string(p.est.n_same);
    out.push_back(',');
    out += std::to_string(p.est.n_diff);
    out.push_back(',');
    out += format_double(p.est.e());
    out.push_back(',');
    out += format_double(p.est.rate());
    out.push_back(',');
    out += format_double(p.est.stderr_e());
    out.push_back('\n');
  }
  return out;
}

std::vector<SweepPoint> parse_curve_csv(const std::string& text) {
  std::vector<SweepPoint> curve;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      if (line != kHeader) throw std::invalid_argument("unexpected CSV header: '" + line + "'");
      first = false;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw std::invalid_argument("expected 8 CSV fields, got line: '" + line + "'");

    SweepPoint p;
    p.theta_deg = parse_double(fields[0]);
    p.est.n_pairs = parse_count(fields[1]);
    p.est.n_coincident = parse_count(fields[2]);
    p.est.n_same = parse_count(fields[3]);
    p.est.n_diff = parse_count(fields[4]);
    // E/rate/stderr re-derive from the counts; the file carries them for
    // spreadsheet use. Parse anyway so malformed files are rejected.
    parse_double(fields[5]);
    parse_double(fields[6]);
    parse_double(fields[7]);
    curve.push_back(p);
  }
  if (first) throw std::invalid_argument("empty CSV input");
  return curve;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace epr
