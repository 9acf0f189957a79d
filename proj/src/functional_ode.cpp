#include "dwave/functional_ode.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dwave {

namespace {

// Trapezoid in r of values(i) * r_i over one time row; the cone cut keeps
// the support inside the row.
template <class Fn>
double radial_trapezoid(const SpaceTimeField& u, Fn&& values) {
  const std::size_t nr = u.nr();
  double s = 0.0;
  for (std::size_t i = 1; i < nr; ++i) s += values(i) * u.r(i);
  s += 0.5 * values(nr) * u.r(nr);
  return 2.0 * std::numbers::pi * u.dr() * s;
}

}  // namespace

FunctionalSeries compute_F(const SpaceTimeField& u, double p) {
  if (u.empty()) throw std::invalid_argument("compute_F: empty field");
  if (!(p > 1.0)) throw std::invalid_argument("compute_F: p must be > 1");
  FunctionalSeries out;
  for (std::size_t n = 0; n <= u.nt(); ++n) {
    const double t = u.t(n);
    out.t.push_back(t);
    out.F.push_back(radial_trapezoid(u, [&](std::size_t i) { return u.at(i, n); }));
    out.G.push_back(radial_trapezoid(u, [&](std::size_t i) { return std::pow(std::abs(u.at(i, n)), p); }) /
                    std::pow(1.0 + t, p - 1.0));
  }
  return out;
}

double bessel_i0(double x) {
  if (!(std::abs(x) <= 500.0)) throw std::domain_error("bessel_i0: |x| > 500 is outside the supported range");
  // I0(x) = sum_m ((x/2)^{2m}) / (m!)^2
  const double y = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 10000; ++m) {
    term *= y / (static_cast<double>(m) * m);
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  return sum;
}

double test_function_phi1(double r) { return 2.0 * std::numbers::pi * bessel_i0(r); }

F1Series compute_F1(const SpaceTimeField& u) {
  if (u.empty()) throw std::invalid_argument("compute_F1: empty field");
  std::vector<double> phi(u.nr() + 1);
  for (std::size_t i = 0; i <= u.nr(); ++i) phi[i] = test_function_phi1(u.r(i));
  F1Series out;
  for (std::size_t n = 0; n <= u.nt(); ++n) {
    const double t = u.t(n);
    out.t.push_back(t);
    out.F1.push_back(std::exp(-t) * radial_trapezoid(u, [&](std::size_t i) { return u.at(i, n) * phi[i]; }));
  }
  return out;
}

KatoQuantities kato_quantities(const KatoParams& kp) {
  if (!(kp.p > 1.0) || !(kp.a > 0.0) || !(kp.q > 0.0))
    throw std::invalid_argument("kato_quantities: need p > 1, a > 0, q > 0");
  KatoQuantities k;
  k.M = 0.5 * (kp.p - 1.0) * kp.a - 0.5 * kp.q + 1.0;
  if (!(k.M > 0.0)) throw std::invalid_argument("kato_quantities: M <= 0, the comparison lemma does not apply");
  k.bound_factor = std::pow(2.0, 2.0 / k.M);
  k.bound_form = "T < 2^(2/M) * max{T0, F(0)/F'(0), k}";
  return k;
}

double kato_lifespan_bound(const KatoParams& kp, double F0, double F0prime) {
  const KatoQuantities kq = kato_quantities(kp);
  if (!(F0 >= 0.0) || !(F0prime > 0.0)) throw std::invalid_argument("kato_lifespan_bound: need F(0) >= 0, F'(0) > 0");
  return kq.bound_factor * std::max({kp.T0, F0 / F0prime, kp.k});
}

double kato_lifespan_bound_shifted(const KatoParams& kp, double t0) {
  const KatoQuantities kq = kato_quantities(kp);
  if (!(t0 > 0.0)) throw std::invalid_argument("kato_lifespan_bound_shifted: t0 must be > 0");
  return kq.bound_factor * std::max({kp.T0, t0, kp.k});
}

namespace {

using OdeState = std::array<double, 2>;
namespace odeint = boost::numeric::odeint;

struct Growth {
  double p, q, B, k;
  void operator()(const OdeState& x, OdeState& dxdt, double t) const {
    dxdt[0] = x[1];
    dxdt[1] = B * std::pow(t + k, -q) * std::pow(std::abs(x[0]), p);
  }
};

constexpr double kOdeThreshold = 1e12;

bool over(const OdeState& x) { return !std::isfinite(x[0]) || std::abs(x[0]) > kOdeThreshold; }

// Integrates from (t0, x0) to t1 with tight tolerances.
OdeState advance_to(const Growth& sys, OdeState x, double t0, double t1, double h) {
  if (t1 <= t0) return x;
  auto stepper = odeint::make_controlled(1e-14, 1e-12, odeint::runge_kutta_dopri5<OdeState>());
  odeint::integrate_adaptive(stepper, sys, x, t0, t1, std::min(h, t1 - t0));
  return x;
}

// First crossing of the threshold with steps capped at dt * max(1, t), or
// +inf when the horizon is reached first.
double crossing_time(const Growth& sys, double F0, double F0prime, double dt, double horizon) {
  auto stepper = odeint::make_controlled(1e-12, 1e-10, odeint::runge_kutta_dopri5<OdeState>());
  OdeState x{F0, F0prime};
  double t = 0.0;
  double h = dt;
  while (t < horizon) {
    const double cap = dt * std::max(1.0, t);
    h = std::min({h, cap, horizon - t});
    const OdeState x_prev = x;
    const double t_prev = t;
    if (stepper.try_step(sys, x, t, h) == odeint::fail) {
      if (h < 1e-300) return t;  // step collapsed at a genuine singularity
      continue;
    }
    if (over(x)) {
      // Bisect on [t_prev, t] by re-integrating from the last good state.
      double lo = t_prev, hi = t;
      for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (over(advance_to(sys, x_prev, t_prev, mid, (mid - t_prev) / 16.0)))
          hi = mid;
        else
          lo = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

OdeBlowup ode_blowup_time(double p, double q, double B, double k, double F0, double F0prime, double dt,
                          double horizon) {
  if (!(p > 1.0) || !(k > 0.0) || !(B >= 0.0) || !(dt > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("ode_blowup_time: need p > 1, k > 0, B >= 0, dt > 0, horizon > 0");
  if (!(F0 >= 0.0) || !(F0prime >= 0.0) || (F0 == 0.0 && F0prime == 0.0))
    throw std::invalid_argument("ode_blowup_time: need F0, F0' >= 0, not both zero");
  const Growth sys{p, q, B, k};
  OdeBlowup out;
  out.T = crossing_time(sys, F0, F0prime, dt, horizon);
  out.T_refined = crossing_time(sys, F0, F0prime, 0.5 * dt, horizon);
  out.blew_up = std::isfinite(out.T) && std::isfinite(out.T_refined);
  out.agreed = out.blew_up ? std::abs(out.T - out.T_refined) <= 0.01 * out.T_refined
                           : std::isfinite(out.T) == std::isfinite(out.T_refined);
  return out;
}

namespace {

struct SlicingRule {
  std::int64_t a0;
  double log_denominator_const;  // log of the constant factor in the denominator
};

SlicingRule rule_of(SlicingVariant v) {
  return v == SlicingVariant::SubcriticalA ? SlicingRule{0, 0.0} : SlicingRule{1, std::log(3.0)};
}

double log_d0(double E0, double eps, SlicingVariant v) {
  return std::log(E0) + (v == SlicingVariant::SubcriticalA ? 1.0 : 2.0) * std::log(eps);
}

// lim_j (log d_j / 2^j - log d_0) = -sum_{i>=0} (log c + (3i+9) log 2) / 2^{i+1}.
double series_limit(SlicingVariant v) {
  const double lc = rule_of(v).log_denominator_const;
  const double ln2 = std::numbers::ln2;
  double sum = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double inc = (lc + (3.0 * i + 9.0) * ln2) / std::ldexp(1.0, i + 1);
    sum += inc;
    if (inc < 1e-15) break;
  }
  return -sum;
}

}  // namespace

SlicingResult slicing_iterate(double E0, double eps, int j_max, SlicingVariant variant) {
  if (!(E0 > 0.0) || !(eps > 0.0)) throw std::invalid_argument("slicing_iterate: need E0 > 0, eps > 0");
  if (j_max < 0 || j_max > 61) throw std::invalid_argument("slicing_iterate: j_max must be in [0, 61]");
  const SlicingRule rule = rule_of(variant);
  const double ln2 = std::numbers::ln2;
  SlicingResult res;
  res.q_limit = series_limit(variant);
  const double ld0 = log_d0(E0, eps, variant);
  SlicingState s{0, rule.a0, ld0, 1.0};
  for (int j = 0; j <= j_max; ++j) {
    if (j > 0) {
      s.a = 2 * s.a + 2;
      s.log_d = 2.0 * s.log_d - rule.log_denominator_const - (3.0 * (j - 1) + 9.0) * ln2;
      s.l += std::ldexp(1.0, -j);
      s.j = j;
    }
    res.states.push_back(s);
    // log d_j >= 2^j (log d_0 + q); compare per unit 2^j to keep the slack relative.
    const double lhs = s.log_d / std::ldexp(1.0, j);
    const double rhs = ld0 + res.q_limit;
    if (lhs < rhs - 1e-12 * std::max(1.0, std::abs(rhs)) && res.lower_bound_holds) {
      res.lower_bound_holds = false;
      res.first_violation = j;
    }
  }
  return res;
}

std::vector<double> slicing_direct(double E0, double eps, int j_max, SlicingVariant variant) {
  if (!(E0 > 0.0) || !(eps > 0.0)) throw std::invalid_argument("slicing_direct: need E0 > 0, eps > 0");
  const double c = variant == SlicingVariant::SubcriticalA ? 1.0 : 3.0;
  std::vector<double> d;
  double dj = E0 * (variant == SlicingVariant::SubcriticalA ? eps : eps * eps);
  for (int j = 0; j <= j_max; ++j) {
    if (j > 0) dj = dj * dj / (c * std::ldexp(1.0, 3 * (j - 1) + 9));
    d.push_back(dj);
  }
  return d;
}

double critical_lifespan_bound(double B, double eps, CriticalCase c, double c_B) {
  if (!(B > 0.0) || !(eps > 0.0)) throw std::invalid_argument("critical_lifespan_bound: need B > 0, eps > 0");
  const double e = c == CriticalCase::A ? 4.0 * B * std::pow(eps, -0.5) : c_B * B * std::pow(eps, -2.0 / 3.0);
  if (e > std::log(std::numeric_limits<double>::max())) return std::numeric_limits<double>::infinity();
  return std::exp(e);
}

std::string to_string(SlicingVariant v) { return v == SlicingVariant::SubcriticalA ? "subcritical-a" : "critical-b"; }

}  // namespace dwave
