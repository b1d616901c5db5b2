#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "epr/models.hpp"

using namespace epr;

TEST_CASE("sample_pair is deterministic for a fixed seed") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const HiddenPair pa = sample_pair(Pairing::HeadToToe, a);
    const HiddenPair pb = sample_pair(Pairing::HeadToToe, b);
    CHECK(pa.rho_deg == pb.rho_deg);
    CHECK(pa.s == pb.s);
  }
}

TEST_CASE("pitch fraction is uniform: mean 0.5 within 0.005 over 1e5 draws") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += sample_pair(Pairing::HeadToToe, rng).s;
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("hidden variables are independent of the subsequent setting choice") {
  // Pearson correlation between each hidden variable and a setting index
  // drawn afterwards, the way the three-setting protocol draws them.
  Rng rng(11);
  const int n = 100000;
  double rx = 0, rxx = 0, px = 0, pxx = 0, sy = 0, syy = 0, rxy = 0, pxy = 0;
  for (int i = 0; i < n; ++i) {
    const HiddenPair pair = sample_pair(Pairing::HeadToToe, rng);
    const double setting = static_cast<double>(rng.below(3));
    rx += pair.rho_deg;
    rxx += pair.rho_deg * pair.rho_deg;
    px += pair.s;
    pxx += pair.s * pair.s;
    sy += setting;
    syy += setting * setting;
    rxy += pair.rho_deg * setting;
    pxy += pair.s * setting;
  }
  const double var_y = syy / n - (sy / n) * (sy / n);
  const auto corr = [&](double sum_x, double sum_xx, double sum_xy) {
    const double cov = sum_xy / n - (sum_x / n) * (sy / n);
    const double var_x = sum_xx / n - (sum_x / n) * (sum_x / n);
    return cov / std::sqrt(var_x * var_y);
  };
  CHECK(std::abs(corr(rx, rxx, rxy)) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(corr(px, pxx, pxy)) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("pairing fixes the right tip") {
  const HiddenPair htt{30.0, 0.5, Pairing::HeadToToe};
  CHECK(htt.left_tip_deg() == 30.0);
  CHECK(htt.right_tip_deg() == 210.0);
  const HiddenPair btb{30.0, 0.5, Pairing::BackToBack};
  CHECK(btb.right_tip_deg() == 30.0);
}

TEST_CASE("attempt: pass rule and colors") {
  const Aperture fig8 = FigureEight{};
  SUBCASE("aligned, full clearance") {
    const Attempt a = attempt(fig8, Angle::of(0.0), 0.0, 0.3);
    CHECK(a.passed);
    CHECK(a.color == Color::Green);
  }
  SUBCASE("45 degrees off, clearance one half") {
    const Attempt a = attempt(fig8, Angle::of(0.0), 45.0, 0.6);
    CHECK_FALSE(a.passed);
  }
  SUBCASE("target at 60, aligned tip, clearance 0.25") {
    const Attempt a = attempt(fig8, Angle::of(60.0), 0.0, 0.2);
    CHECK(a.passed);
    CHECK(a.color == Color::Green);
  }
  SUBCASE("exact tie s == clearance passes") {
    const Attempt a = attempt(fig8, Angle::of(0.0), 0.0, 1.0);
    CHECK(a.passed);
  }
  SUBCASE("tip exactly on the color boundary counts as Green") {
    const Attempt a = attempt(Aperture{Circle{1.0}}, Angle::of(0.0), 90.0, 0.5);
    CHECK(a.passed);
    CHECK(a.color == Color::Green);
  }
  SUBCASE("rose sectors") {
    CHECK(attempt(Aperture{Rose{}}, Angle::of(0.0), 10.0, 0.1).color == Color::V);
    CHECK(attempt(Aperture{Rose{}}, Angle::of(0.0), 60.0, 0.1).color == Color::H);
  }
  SUBCASE("s outside [0,1] is rejected") {
    CHECK_THROWS_AS(attempt(fig8, Angle::of(0.0), 0.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(attempt(fig8, Angle::of(0.0), 0.0, 1.1), std::invalid_argument);
  }
}

TEST_CASE("measure_pair coincidence color rules") {
  Rng rng(3);

  SUBCASE("figure-eight head-to-toe at equal settings: colors always differ") {
    const ApertureModel model{FigureEight{}, Pairing::HeadToToe};
    int coincidences = 0;
    for (int i = 0; i < 1000000; ++i) {
      const HiddenPair pair = sample_pair(model.pairing, rng);
      const CoincidenceRecord rec = measure_pair(model, pair, Angle::of(20.0), Angle::of(20.0));
      CHECK(rec.passed_left == rec.passed_right);  // shared pitch, same clearance
      if (rec.coincident()) {
        ++coincidences;
        REQUIRE(*rec.color_left != *rec.color_right);
      }
    }
    CHECK(coincidences > 0);
  }

  SUBCASE("rose back-to-back at equal settings: colors always match") {
    const ApertureModel model{Rose{}, Pairing::BackToBack};
    int coincidences = 0;
    for (int i = 0; i < 1000000; ++i) {
      const HiddenPair pair = sample_pair(model.pairing, rng);
      const CoincidenceRecord rec = measure_pair(model, pair, Angle::of(77.0), Angle::of(77.0));
      if (rec.coincident()) {
        ++coincidences;
        REQUIRE(*rec.color_left == *rec.color_right);
      }
    }
    CHECK(coincidences > 0);
  }

  SUBCASE("figure-eight head-to-toe at opposite settings: colors always match") {
    const ApertureModel model{FigureEight{}, Pairing::HeadToToe};
    int coincidences = 0;
    for (int i = 0; i < 200000; ++i) {
      const HiddenPair pair = sample_pair(model.pairing, rng);
      const CoincidenceRecord rec = measure_pair(model, pair, Angle::of(0.0), Angle::of(180.0));
      if (rec.coincident()) {
        ++coincidences;
        REQUIRE(*rec.color_left == *rec.color_right);
      }
    }
    CHECK(coincidences > 0);
  }

  SUBCASE("colors are absent when a side is blocked") {
    const ApertureModel model{Slit{0.5}, Pairing::HeadToToe};
    const HiddenPair pair{45.0, 0.9, Pairing::HeadToToe};
    const CoincidenceRecord rec = measure_pair(model, pair, Angle::of(0.0), Angle::of(0.0));
    CHECK_FALSE(rec.passed_left);
    CHECK_FALSE(rec.color_left.has_value());
    CHECK_FALSE(rec.color_right.has_value());
  }
}

TEST_CASE("quantum correlation curves") {
  CHECK(qm_correlation(Particle::SpinHalf, 0.0) == doctest::Approx(-1.0));
  CHECK(qm_correlation(Particle::SpinHalf, 90.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(qm_correlation(Particle::SpinHalf, 180.0) == doctest::Approx(1.0));
  CHECK(qm_correlation(Particle::Photon, 0.0) == doctest::Approx(1.0));
  CHECK(qm_correlation(Particle::Photon, 90.0) == doctest::Approx(-1.0));
}

TEST_CASE("malus variants") {
  CHECK(malus(0.0, Particle::Photon) == doctest::Approx(1.0));
  CHECK(malus(60.0, Particle::Photon) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(malus(180.0, Particle::SpinHalf) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spin-half same-outcome rate equals 1 - malus on a grid") {
  for (int d = 0; d <= 180; ++d) {
    const double rate = (1.0 + qm_correlation(Particle::SpinHalf, d)) / 2.0;
    CHECK(rate == doctest::Approx(1.0 - malus(d, Particle::SpinHalf)).epsilon(1e-12));
  }
}

TEST_CASE("linear correlation closed form") {
  CHECK(linear_correlation(0.0, Pairing::HeadToToe) == doctest::Approx(-1.0));
  CHECK(linear_correlation(90.0, Pairing::HeadToToe) == doctest::Approx(0.0));
  CHECK(linear_correlation(180.0, Pairing::HeadToToe) == doctest::Approx(1.0));
  CHECK(linear_correlation(45.0, Pairing::BackToBack) == doctest::Approx(0.5));
  CHECK_THROWS_AS(linear_correlation(-1.0, Pairing::HeadToToe), std::invalid_argument);
  CHECK_THROWS_AS(linear_correlation(181.0, Pairing::HeadToToe), std::invalid_argument);
}
