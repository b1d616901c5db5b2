#include "epr/programs.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "epr/geometry.hpp"

namespace epr {

Rational Rational::of(long long num, long long den) {
  if (den <= 0 || num < 0) throw std::invalid_argument("rational must be non-negative with positive denominator");
  if (num == 0) return Rational{0, 1};
  const long long g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

std::string Rational::str() const {
  if (num == 0) return "0";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::array<Program, 8> all_programs() {
  std::array<Program, 8> programs;
  for (int mask = 0; mask < 8; ++mask) {
    programs[static_cast<std::size_t>(mask)].left_up = {(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
  }
  return programs;
}

ProgramModel::ProgramModel(std::array<double, 3> options_deg) : options_deg_(options_deg) {
  for (int i = 0; i < 3; ++i) {
    options_deg_[static_cast<std::size_t>(i)] = normalize_deg(options_deg[static_cast<std::size_t>(i)]);
    for (int j = 0; j < i; ++j) {
      if (options_deg_[static_cast<std::size_t>(i)] == options_deg_[static_cast<std::size_t>(j)]) {
        throw std::invalid_argument("three-setting options must be distinct");
      }
    }
  }
}

int ProgramModel::option_index(double setting_deg) const {
  const double s = normalize_deg(setting_deg);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(options_deg_[static_cast<std::size_t>(i)] - s) < 1e-9) return i;
  }
  throw std::invalid_argument("setting " + std::to_string(setting_deg) + " is not one of the three options");
}

Rational ProgramModel::match_probability_by_index(int i, int j) const {
  if (i < 0 || i > 2 || j < 0 || j > 2) throw std::invalid_argument("option index out of range");
  long long matches = 0;
  for (const Program& p : all_programs()) {
    if (p.left(i) == p.right(j)) ++matches;
  }
  return Rational::of(matches, 8);
}

Rational ProgramModel::match_probability(double setting_i_deg, double setting_j_deg) const {
  return match_probability_by_index(option_index(setting_i_deg), option_index(setting_j_deg));
}

Rational ProgramModel::overall() const {
  long long matches = 0;
  for (const Program& p : all_programs()) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (p.left(i) == p.right(j)) ++matches;
      }
    }
  }
  return Rational::of(matches, 8LL * 9LL);
}

Rational ProgramModel::best_single_program() {
  long long best = 0;
  for (const Program& p : all_programs()) {
    long long matches = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (p.left(i) == p.right(j)) ++matches;
      }
    }
    best = std::max(best, matches);
  }
  return Rational::of(best, 9);
}

}  // namespace epr
