#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "dwave/exponents.hpp"

using namespace dwave;

TEST_CASE("fujita and strauss exponents") {
  CHECK(fujita_exponent(1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(fujita_exponent(2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(strauss_exponent(4.0) - 2.0) < 1e-12);
  CHECK(std::isinf(strauss_exponent(1.0)));
  CHECK_THROWS_AS(fujita_exponent(0), std::invalid_argument);
  // gamma vanishes at the strauss exponent
  for (double d : {1.5, 2.0, 3.0, 4.0, 7.25}) CHECK(std::abs(gamma(strauss_exponent(d), d)) < 1e-10);
  CHECK(gamma(1.5, 4.0) == doctest::Approx(2.75));
}

TEST_CASE("mu_0 is exact") {
  CHECK(mu_zero(1) == Rational(4, 3));
  CHECK(mu_zero(2) == Rational(2));
  CHECK(mu_zero(3) == Rational(14, 5));
}

TEST_CASE("rational reconstruction") {
  CHECK(Rational::from_double(5.0 / 3.0) == Rational(5, 3));
  CHECK(Rational::from_double(0.5) == Rational(1, 2));
  CHECK_THROWS_AS(Rational::from_double(std::numbers::pi, 100), std::invalid_argument);
  CHECK(Rational(6, -4) == Rational(-3, 2));
}

TEST_CASE("regime boundary is classified exactly") {
  CHECK(classify_regime(2, 2.0) == Regime::Intermediate);
  CHECK(classify_regime(2, Rational(2)) == Regime::Intermediate);
  CHECK(classify_regime(3, 2.8) == Regime::Intermediate);
  CHECK(classify_regime(2, 1.999) == Regime::WaveLike);
  CHECK(classify_regime(2, 2.001) == Regime::HeatLike);
  CHECK_THROWS_AS(classify_regime(2, 0.0), std::invalid_argument);
}

TEST_CASE("wave-like regime below mu_0 matches p_F < p_S") {
  int violations = 0;
  for (int n = 1; n <= 50; ++n)
    for (int j = 1; j <= 50; ++j) {
      const double mu = 0.2 * j;
      const bool below = classify_regime(n, mu) == Regime::WaveLike;
      const bool ordered = fujita_exponent(n) < strauss_exponent(n + mu);
      if (below != ordered) ++violations;
    }
  CHECK(violations == 0);
}

TEST_CASE("predicted lifespans at n = mu = 2") {
  ModelParams mp;
  mp.p = 1.5;
  auto a = predicted_lifespan(mp, DataClass::NonzeroIntegral);
  CHECK(a.form == LifespanForm::PowerLaw);
  CHECK(a.exponent == doctest::Approx(-0.5));
  auto b = predicted_lifespan(mp, DataClass::ZeroIntegral);
  CHECK(b.exponent == doctest::Approx(-6.0 / 11.0));
  mp.p = 2.0;
  CHECK(predicted_lifespan(mp, DataClass::NonzeroIntegral).form == LifespanForm::ExpPowerLaw);
  CHECK(predicted_lifespan(mp, DataClass::NonzeroIntegral).exponent == doctest::Approx(0.5));
  CHECK(predicted_lifespan(mp, DataClass::ZeroIntegral).exponent == doctest::Approx(2.0 / 3.0));
  mp.p = 2.5;
  CHECK_THROWS_AS(predicted_lifespan(mp, DataClass::ZeroIntegral), std::invalid_argument);
}

TEST_CASE("other damping values need the extended flag") {
  ModelParams mp;
  mp.mu = 1.0;
  mp.p = 1.5;
  CHECK_THROWS_AS(predicted_lifespan(mp, DataClass::NonzeroIntegral), std::invalid_argument);
  const auto pred = predicted_lifespan(mp, DataClass::NonzeroIntegral, true);
  CHECK_FALSE(pred.theorem_backed);
}
