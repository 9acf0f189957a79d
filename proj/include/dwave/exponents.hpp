// Critical exponents, regime classification and predicted lifespan laws for
// the semilinear wave equation with scale-invariant damping mu/(1+t) v_t.
#pragma once

#include <cstdint>
#include <string>

namespace dwave {

/// Exact rational number with positive denominator, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  /// Nearest rational with denominator <= max_den within 1e-12, found by
  /// continued fractions. Throws if x has no such representation.
  static Rational from_double(double x, std::int64_t max_den = 1000000);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend int compare(const Rational& a, const Rational& b);
};

/// Full parameter set (n, mu, p, k, epsilon) of the damped problem.
struct ModelParams {
  int n = 2;
  double mu = 2.0;
  double p = 2.0;
  double k = 1.0;
  double epsilon = 1.0;

  void validate() const;
};

enum class Regime { HeatLike, Intermediate, WaveLike };
enum class LifespanForm { PowerLaw, ExpPowerLaw };
enum class DataClass { NonzeroIntegral, ZeroIntegral };

struct LifespanPrediction {
  LifespanForm form = LifespanForm::PowerLaw;
  // PowerLaw: T ~ eps^exponent (exponent < 0).
  // ExpPowerLaw: T ~ exp(c eps^-exponent) (exponent > 0).
  double exponent = 0.0;
  DataClass data_class = DataClass::NonzeroIntegral;
  // False for predictions outside (n, mu) = (2, 2); those are conjectural.
  bool theorem_backed = true;
};

double fujita_exponent(int n);
double gamma(double p, double d);
/// Positive root of gamma(., d); +infinity at d = 1.
double strauss_exponent(double d);
Rational mu_zero(int n);

Regime classify_regime(int n, const Rational& mu);
Regime classify_regime(int n, double mu);

/// Theorem-backed lifespan law for n = 2, mu = 2, 1 < p <= 2. With
/// `extended` set, other (n, mu) pairs return the conjectured heat-like or
/// wave-like law, flagged as not theorem-backed.
LifespanPrediction predicted_lifespan(const ModelParams& params, DataClass data_class,
                                      bool extended = false);

std::string to_string(Regime r);
std::string to_string(LifespanForm f);
std::string to_string(DataClass c);

}  // namespace dwave
