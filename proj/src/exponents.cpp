#include "dwave/exponents.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dwave {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::from_double(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("Rational::from_double: non-finite input");
  // Convergents h/k of the continued fraction of x.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double frac = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(frac);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 1e-12 * std::max(1.0, std::abs(x)))
      return Rational(h1, k1);
    const double rem = frac - a;
    if (rem == 0.0) break;
    frac = 1.0 / rem;
  }
  throw std::invalid_argument("Rational::from_double: no rational within tolerance");
}

int compare(const Rational& a, const Rational& b) {
  const __int128 lhs = static_cast<__int128>(a.num) * b.den;
  const __int128 rhs = static_cast<__int128>(b.num) * a.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1");
  if (!(mu > 0.0)) throw std::invalid_argument("ModelParams: mu must be > 0");
  if (!(p > 1.0)) throw std::invalid_argument("ModelParams: p must be > 1");
  if (!(k >= 1.0)) throw std::invalid_argument("ModelParams: k must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("ModelParams: epsilon must be > 0");
}

double fujita_exponent(int n) {
  if (n < 1) throw std::invalid_argument("fujita_exponent: n must be >= 1");
  return 1.0 + 2.0 / n;
}

double gamma(double p, double d) { return 2.0 + (d + 1.0) * p - (d - 1.0) * p * p; }

double strauss_exponent(double d) {
  if (d < 1.0) throw std::invalid_argument("strauss_exponent: d must be >= 1");
  if (d - 1.0 <= 1e-14) return std::numeric_limits<double>::infinity();
  return (d + 1.0 + std::sqrt(d * d + 10.0 * d - 7.0)) / (2.0 * (d - 1.0));
}

Rational mu_zero(int n) {
  if (n < 1) throw std::invalid_argument("mu_zero: n must be >= 1");
  return Rational(static_cast<std::int64_t>(n) * n + n + 2, n + 2);
}

Regime classify_regime(int n, const Rational& mu) {
  if (compare(mu, Rational(0)) <= 0) throw std::invalid_argument("classify_regime: mu must be > 0");
  const int c = compare(mu, mu_zero(n));
  if (c > 0) return Regime::HeatLike;
  if (c == 0) return Regime::Intermediate;
  return Regime::WaveLike;
}

Regime classify_regime(int n, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("classify_regime: mu must be > 0");
  try {
    return classify_regime(n, Rational::from_double(mu));
  } catch (const std::invalid_argument&) {
    // Irrational-looking input cannot sit exactly on the rational threshold.
    return mu > mu_zero(n).value() ? Regime::HeatLike : Regime::WaveLike;
  }
}

namespace {

bool is_exactly(double x, const Rational& r) {
  try {
    return Rational::from_double(x) == r;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

LifespanPrediction extended_prediction(const ModelParams& params, DataClass data_class) {
  const double p = params.p;
  LifespanPrediction out;
  out.data_class = data_class;
  out.theorem_backed = false;
  switch (classify_regime(params.n, params.mu)) {
    case Regime::HeatLike: {
      const double pf = fujita_exponent(params.n);
      if (std::abs(p - pf) <= 1e-12) {
        out.form = LifespanForm::ExpPowerLaw;
        out.exponent = p - 1.0;
      } else if (p < pf) {
        out.form = LifespanForm::PowerLaw;
        out.exponent = -(p - 1.0) / (2.0 - params.n * (p - 1.0));
      } else {
        throw std::invalid_argument("predicted_lifespan: p above the critical exponent");
      }
      return out;
    }
    case Regime::WaveLike: {
      const double d = params.n + params.mu;
      const double ps = strauss_exponent(d);
      if (std::abs(p - ps) <= 1e-12) {
        out.form = LifespanForm::ExpPowerLaw;
        out.exponent = p * (p - 1.0);
      } else if (p < ps) {
        out.form = LifespanForm::PowerLaw;
        out.exponent = -2.0 * p * (p - 1.0) / gamma(p, d);
      } else {
        throw std::invalid_argument("predicted_lifespan: p above the critical exponent");
      }
      return out;
    }
    case Regime::Intermediate:
      break;
  }
  throw std::invalid_argument("predicted_lifespan: no law for intermediate (n, mu) other than (2, 2)");
}

}  // namespace

LifespanPrediction predicted_lifespan(const ModelParams& params, DataClass data_class, bool extended) {
  if (!(params.p > 1.0)) throw std::invalid_argument("predicted_lifespan: p must be > 1");
  const bool canonical = params.n == 2 && is_exactly(params.mu, Rational(2));
  if (!canonical) {
    if (extended) return extended_prediction(params, data_class);
    throw std::invalid_argument("predicted_lifespan: only (n, mu) = (2, 2) is theorem-backed");
  }
  const double p = params.p;
  if (p > 2.0 + 1e-12) throw std::invalid_argument("predicted_lifespan: requires 1 < p <= 2");
  const bool critical = is_exactly(p, Rational(2));

  LifespanPrediction out;
  out.data_class = data_class;
  if (data_class == DataClass::NonzeroIntegral) {
    if (critical) {
      out.form = LifespanForm::ExpPowerLaw;
      out.exponent = 0.5;
    } else {
      out.form = LifespanForm::PowerLaw;
      out.exponent = -(p - 1.0) / (4.0 - 2.0 * p);
    }
  } else {
    if (critical) {
      out.form = LifespanForm::ExpPowerLaw;
      out.exponent = 2.0 / 3.0;
    } else {
      out.form = LifespanForm::PowerLaw;
      out.exponent = -2.0 * p * (p - 1.0) / gamma(p, 4.0);
    }
  }
  return out;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::HeatLike: return "heat-like";
    case Regime::Intermediate: return "intermediate";
    case Regime::WaveLike: return "wave-like";
  }
  return "?";
}

std::string to_string(LifespanForm f) {
  return f == LifespanForm::PowerLaw ? "power-law" : "exp-power-law";
}

std::string to_string(DataClass c) {
  return c == DataClass::NonzeroIntegral ? "nonzero-integral" : "zero-integral";
}

}  // namespace dwave
