#pragma once

#include <array>
#include <string>

namespace epr {

// Exact non-negative rational, normalized. Enough for the program tables.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational of(long long num, long long den);
  std::string str() const;  // "0", "1/2", "4/9"
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

// One of the eight ways a pair can be preprogrammed for three settings so
// that equal settings always disagree: the right side is the elementwise
// complement of the left.
struct Program {
  std::array<bool, 3> left_up{};

  bool left(int setting) const { return left_up[static_cast<std::size_t>(setting)]; }
  bool right(int setting) const { return !left_up[static_cast<std::size_t>(setting)]; }
};

std::array<Program, 8> all_programs();

// The shared-program hidden-variable model over a three-setting option list.
class ProgramModel {
 public:
  explicit ProgramModel(std::array<double, 3> options_deg);

  const std::array<double, 3>& options_deg() const { return options_deg_; }

  // Index of a setting in the option list; throws std::invalid_argument when
  // the setting is not an option.
  int option_index(double setting_deg) const;

  // P(left spin at setting i == right spin at setting j) under the uniform
  // distribution over the 8 programs. Exact enumeration, no floats.
  Rational match_probability(double setting_i_deg, double setting_j_deg) const;
  Rational match_probability_by_index(int i, int j) const;

  // Average match probability over the 9 ordered setting pairs when both
  // sides choose uniformly and independently.
  Rational overall() const;

  // The best overall match probability any single fixed program achieves.
  static Rational best_single_program();

 private:
  std::array<double, 3> options_deg_;
};

}  // namespace epr
