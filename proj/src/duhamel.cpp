#include "dwave/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "disc_quadrature.hpp"
#include "dwave/quadrature.hpp"

namespace dwave {

namespace {

// Position of p relative to a rational threshold; exact when p has a short
// rational form, floating-point otherwise.
int compare_p(double p, const Rational& threshold) {
  try {
    return compare(Rational::from_double(p), threshold);
  } catch (const std::invalid_argument&) {
    const double v = threshold.value();
    return p < v ? -1 : (p > v ? 1 : 0);
  }
}

Rational rational_or_nearest(double p) {
  try {
    return Rational::from_double(p);
  } catch (const std::invalid_argument&) {
    return Rational::from_double(p, 1000000000);
  }
}

}  // namespace

WeightSpec make_weight_spec(int index, double p, double k) {
  if (index < 1 || index > 3) throw std::invalid_argument("make_weight_spec: index must be 1, 2 or 3");
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("make_weight_spec: p must lie in (1, 2]");
  if (!(k >= 1.0)) throw std::invalid_argument("make_weight_spec: k must be >= 1");
  WeightSpec w;
  w.index = index;
  w.k = k;
  w.p = p;
  w.p_exact = rational_or_nearest(p);
  w.p1 = std::min((3.0 * p - 4.0) / 2.0, 0.5);
  w.p2 = std::max(0.0, (3.0 * p - 5.0) / 2.0);
  w.p3 = compare_p(p, Rational(5, 3)) == 0 ? 1 : 0;
  w.p4 = compare_p(p, Rational(2)) == 0 ? 1 : 0;
  return w;
}

double tau_plus(double r, double t, double k) { return (t + r + 2.0 * k) / k; }
double tau_minus(double r, double t, double k) { return (t - r + 2.0 * k) / k; }

double weight_reciprocal(const WeightSpec& w, double r, double t) {
  const double tp = tau_plus(r, t, w.k);
  const double tm = tau_minus(r, t, w.k);
  switch (w.index) {
    case 1: return 1.0 / std::sqrt(tp * tm);
    case 3: return 1.0 / (std::sqrt(tp) * tm * std::sqrt(tm));
    default: break;
  }
  if (w.p4) return std::log(tm) / std::sqrt(tp * tm);
  if (w.p3) return std::log(2.0 * tp / tm) / std::sqrt(tp);
  if (compare_p(w.p, Rational(5, 3)) < 0) return std::pow(tp, (4.0 - 3.0 * w.p) / 2.0);
  return std::pow(tm, (5.0 - 3.0 * w.p) / 2.0) / std::sqrt(tp);
}

double weight(const WeightSpec& w, double r, double t) {
  const double rec = weight_reciprocal(w, r, t);
  return rec > 0.0 ? 1.0 / rec : std::numeric_limits<double>::infinity();
}

double weighted_norm(const SpaceTimeField& V, const WeightSpec& spec) {
  if (V.empty()) throw std::invalid_argument("weighted_norm: empty field");
  double m = 0.0;
  for (std::size_t n = 0; n <= V.nt(); ++n)
    for (std::size_t i = 0; i <= V.nr(); ++i) {
      const double v = V.at(i, n);
      if (v == 0.0) continue;
      m = std::max(m, std::abs(v) / weight_reciprocal(spec, V.r(i), V.t(n)));
    }
  return m;
}

GrowthFactors::GrowthFactors(double p_, double k_) : p(p_), k(k_), delta(std::min(1.0 / (2.0 * p_), 0.1)) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("GrowthFactors: p must lie in (1, 2]");
  if (!(k >= 1.0)) throw std::invalid_argument("GrowthFactors: k must be >= 1");
}

double GrowthFactors::T_k(double T) const {
  if (!(T >= 0.0)) throw std::invalid_argument("GrowthFactors: T must be >= 0");
  return (T + 3.0 * k) / k;
}

double GrowthFactors::D1(double T) const {
  const double tk = T_k(T);
  if (compare_p(p, Rational(2)) == 0) return std::pow(std::log(tk), 2);
  return std::pow(tk, 4.0 - 2.0 * p);
}

double GrowthFactors::D2(double nu, double T) const {
  const double tk = T_k(T);
  auto is = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  const bool p_is_2 = compare_p(p, Rational(2)) == 0;
  const bool low = compare_p(p, Rational(5, 3)) <= 0;
  const double p3 = compare_p(p, Rational(5, 3)) == 0 ? 1.0 : 0.0;
  if (is(nu, p)) return p_is_2 ? std::pow(std::log(tk), 3) : std::pow(tk, gamma(p, 4.0) / 2.0);
  if (!(is(nu, 0.0) || is(nu, p - 1.0) || is(nu, 1.0)))
    throw std::invalid_argument("GrowthFactors::D2: nu must be 0, p-1, 1 or p");
  if (!low) return 1.0;
  if (is(nu, 1.0)) return std::pow(tk, 5.0 - 3.0 * p + delta * nu * p3);
  return std::pow(tk, nu * (5.0 - 3.0 * p) / 2.0 + delta * nu * p3);
}

DuhamelQuadrature DuhamelQuadrature::refined() const {
  DuhamelQuadrature q = *this;
  q.time_panels *= 2;
  q.disc_radial_panels *= 2;
  q.disc_angular_panels *= 2;
  q.kernel_tol = std::max(1e-14, q.kernel_tol * 0.01);
  return q;
}

namespace {

void check_point(double p, double k, double r, double t) {
  if (!(p > 1.0)) throw std::invalid_argument("apply_L: p must be > 1");
  if (!(k >= 1.0)) throw std::invalid_argument("apply_L: k must be >= 1");
  if (!(r >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("apply_L: r and t must be >= 0");
}

// Breaks of the tau range where the disc of radius t - tau around x starts to
// contain or stops meeting the support disc of radius tau + k.
std::vector<double> tau_breaks(double k, double r, double t) {
  std::vector<double> b{0.0, t};
  for (double x : {(t - r - k) / 2.0, (t + r - k) / 2.0})
    if (x > 0.0 && x < t) b.push_back(x);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

}  // namespace

double apply_L_at(const RadialSource& F, double p, double k, double r, double t, const DuhamelQuadrature& q) {
  check_point(p, k, r, t);
  if (t == 0.0 || r > t + k) return 0.0;
  auto in_tau = [&](double tau) {
    const double s = t - tau;
    const double R = detail::disc_average(r, s, tau + k, q.disc_radial_panels, q.disc_angular_panels, q.points,
                                          [&](double y, double) { return F(y, tau); });
    return std::pow(1.0 + tau, 1.0 - p) * s * R;
  };
  const auto b = tau_breaks(k, r, t);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    total += detail::clustered_gauss(in_tau, b[i], b[i + 1], q.time_panels, q.points);
  return total;
}

double complete_rho_integral(double lambda, double r, double rel_tol) {
  if (!(lambda > 0.0) || !(r > 0.0)) throw std::invalid_argument("complete_rho_integral: lambda, r must be > 0");
  const double a = std::abs(lambda - r), c = lambda + r;
  auto f = [&](double rho, double gap) {
    const double lo = gap > 0.0 ? gap : rho - a;
    const double hi = gap < 0.0 ? -gap : c - rho;
    // Split so that a = 0 does not underflow near rho = 0.
    return std::sqrt(rho / lo) * std::sqrt(rho / (rho + a)) / std::sqrt(hi * (c + rho));
  };
  return quad::tanh_sinh_gap(f, a, c, rel_tol);
}

double rho_kernel(double lambda, double r, double s, double rel_tol) {
  if (!(lambda >= 0.0) || !(r >= 0.0) || !(s >= 0.0)) throw std::invalid_argument("rho_kernel: negative argument");
  const double a = std::abs(lambda - r), c = lambda + r;
  const double b = std::min(c, s);
  if (!(b > a)) return 0.0;
  auto f = [&](double rho, double gap) {
    // The upper end is singular through whichever of c - rho, s - rho vanishes.
    const double lo = gap > 0.0 ? gap : rho - a;
    const double to_c = (gap < 0.0 && b == c) ? -gap : c - rho;
    const double to_s = (gap < 0.0 && b == s) ? -gap : s - rho;
    const double d = to_c * (c + rho) * to_s * (s + rho);
    if (!(d > 0.0) || !(lo > 0.0)) return 0.0;
    return std::sqrt(rho / lo) * std::sqrt(rho / (rho + a)) / std::sqrt(d);
  };
  return quad::tanh_sinh_gap(f, a, b, rel_tol);
}

double apply_L_split_at(const RadialSource& F, double p, double k, double r, double t, const DuhamelQuadrature& q) {
  check_point(p, k, r, t);
  if (t == 0.0 || r > t + k) return 0.0;
  auto in_tau = [&](double tau) {
    const double s = t - tau;
    const double lo = std::max(0.0, r - s);
    const double hi = std::min(r + s, tau + k);
    if (!(hi > lo)) return 0.0;
    auto in_lambda = [&](double lambda) {
      if (lambda <= 0.0) return 0.0;
      double K;
      if (r == 0.0)
        K = lambda < s ? 0.5 * std::numbers::pi / std::sqrt((s - lambda) * (s + lambda)) : 0.0;
      else
        K = rho_kernel(lambda, r, s, q.kernel_tol);
      return lambda * F(lambda, tau) * K;
    };
    // K is log-singular where lambda + r = s.
    double inner = 0.0;
    const double mid = s - r;
    if (mid > lo && mid < hi)
      inner = quad::tanh_sinh(in_lambda, lo, mid, 1e-9) + quad::tanh_sinh(in_lambda, mid, hi, 1e-9);
    else
      inner = quad::tanh_sinh(in_lambda, lo, hi, 1e-9);
    return std::pow(1.0 + tau, 1.0 - p) * inner;
  };
  const auto b = tau_breaks(k, r, t);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    total += detail::clustered_gauss(in_tau, b[i], b[i + 1], q.time_panels, q.points);
  return 2.0 / std::numbers::pi * total;
}

EvalGrid grid_of(const SpaceTimeField& f) { return {f.nr(), f.nt(), f.dr(), f.dt()}; }

SpaceTimeField apply_L(const RadialSource& F, double p, double k, const EvalGrid& out, const DuhamelQuadrature& q) {
  SpaceTimeField L(out.nr, out.nt, out.dr, out.dt, k);
  for (std::size_t n = 1; n <= out.nt; ++n)
    for (std::size_t i = 0; i <= out.nr; ++i) {
      const double r = L.r(i), t = L.t(n);
      if (r > t + k) break;
      L.at(i, n) = apply_L_at(F, p, k, r, t, q);
    }
  return L;
}

SpaceTimeField apply_L(const SpaceTimeField& F, double p, const EvalGrid& out, const DuhamelQuadrature& q) {
  if (F.empty()) throw std::invalid_argument("apply_L: empty field");
  if (!F.respects_support()) throw std::invalid_argument("apply_L: source does not vanish outside the cone");
  if (out.nt * out.dt > F.t_end() * (1.0 + 1e-12) + 1e-12)
    throw std::invalid_argument("apply_L: output grid extends past the source field");
  return apply_L([&F](double r, double t) { return F.interpolate(r, t); }, p, F.k(), out, q);
}

SpaceTimeField apply_L(const SpaceTimeField& F, double p, const DuhamelQuadrature& q) {
  return apply_L(F, p, grid_of(F), q);
}

SpaceTimeField sample_free_solution(const DataProfile& profile, double epsilon, const EvalGrid& grid,
                                    const SphericalMeanQuadrature& q) {
  SpaceTimeField u(grid.nr, grid.nt, grid.dr, grid.dt, profile.k());
  if (epsilon == 0.0) return u;
  for (std::size_t n = 0; n <= grid.nt; ++n)
    for (std::size_t i = 0; i <= grid.nr; ++i) {
      const double r = u.r(i), t = u.t(n);
      if (r > t + profile.k()) break;
      u.at(i, n) = epsilon * free_solution(profile, r, t, q);
    }
  return u;
}

namespace {

SpaceTimeField power_abs(const SpaceTimeField& u, double p) {
  return u.map([p](double, double, double v) { return std::pow(std::abs(v), p); });
}

SpaceTimeField add(const SpaceTimeField& a, const SpaceTimeField& b, double sb = 1.0) {
  SpaceTimeField out = a;
  for (std::size_t n = 0; n <= a.nt(); ++n)
    for (std::size_t i = 0; i <= a.nr(); ++i) out.at(i, n) += sb * b.at(i, n);
  return out;
}

}  // namespace

PicardResult picard_solve(const DataProfile& profile, const ModelParams& params, double T, const PicardConfig& cfg) {
  if (!(params.p > 1.0)) throw std::invalid_argument("picard_solve: p must be > 1");
  if (!(T > 0.0) || !(cfg.dr > 0.0) || !(cfg.dt > 0.0)) throw std::invalid_argument("picard_solve: bad grid");
  if (cfg.max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be >= 1");
  if (std::abs(params.k - profile.k()) > 1e-12) throw std::invalid_argument("picard_solve: k mismatch");
  const double k = profile.k();
  EvalGrid grid;
  grid.dt = cfg.dt;
  grid.dr = cfg.dr;
  grid.nt = static_cast<std::size_t>(std::llround(T / cfg.dt));
  if (grid.nt == 0 || std::abs(grid.nt * cfg.dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("picard_solve: T must be a positive multiple of dt");
  grid.nr = static_cast<std::size_t>(std::ceil((T + k) / cfg.dr - 1e-9));
  const WeightSpec w1 = make_weight_spec(1, std::min(params.p, 2.0), k);

  PicardResult res;
  res.u0 = sample_free_solution(profile, params.epsilon, grid);
  res.u = res.u0;
  double prev_diff = 0.0;
  int growing = 0;
  for (int j = 0; j < cfg.max_iter; ++j) {
    SpaceTimeField next = add(res.u0, apply_L(power_abs(res.u, params.p), params.p, grid, cfg.quadrature));
    const double diff = weighted_norm(add(next, res.u, -1.0), w1);
    const double base = weighted_norm(res.u, w1);
    PicardStep st;
    st.iteration = j + 1;
    st.difference = diff;
    st.ratio = (j > 0 && prev_diff > 0.0) ? diff / prev_diff : 0.0;
    res.trace.push_back(st);
    res.u = std::move(next);
    if (diff <= cfg.tol * base) {
      res.converged = true;
      break;
    }
    growing = st.ratio > 1.0 ? growing + 1 : 0;
    if (growing >= 3) {
      res.diverged = true;
      break;
    }
    prev_diff = diff;
  }
  return res;
}

double fixed_point_residual(const SpaceTimeField& u, const SpaceTimeField& u0, double p, const DuhamelQuadrature& q) {
  const SpaceTimeField L = apply_L(power_abs(u, p), p, grid_of(u), q);
  const SpaceTimeField res = add(add(u, u0, -1.0), L, -1.0);
  return weighted_norm(res, make_weight_spec(1, std::min(p, 2.0), u.k()));
}

namespace {

double source_norm(const RadialSource& V, const WeightSpec& w, double k, const EvalGrid& g) {
  double m = 0.0;
  for (std::size_t n = 0; n <= g.nt; ++n)
    for (std::size_t i = 0; i <= g.nr; ++i) {
      const double r = i * g.dr, t = n * g.dt;
      if (r > t + k) break;
      const double v = V(r, t);
      if (v != 0.0) m = std::max(m, std::abs(v) / weight_reciprocal(w, r, t));
    }
  return m;
}

}  // namespace

double apriori_ratio(const RadialSource& V, double p, double k, double T, const EvalGrid& grid,
                     const DuhamelQuadrature& q) {
  const WeightSpec w1 = make_weight_spec(1, p, k);
  const GrowthFactors gf(p, k);
  const double vnorm = source_norm(V, w1, k, grid);
  const double denom = k * k * std::pow(vnorm, p) * gf.D1(T);
  if (!(denom > 0.0)) throw std::invalid_argument("apriori_ratio: zero denominator");
  auto F = [&](double r, double t) { return r > t + k ? 0.0 : std::pow(std::abs(V(r, t)), p); };
  return weighted_norm(apply_L(F, p, k, grid, q), w1) / denom;
}

double apriori_ratio(const SpaceTimeField& V, double p, double T, const DuhamelQuadrature& q) {
  const WeightSpec w1 = make_weight_spec(1, p, V.k());
  const GrowthFactors gf(p, V.k());
  const double denom = V.k() * V.k() * std::pow(weighted_norm(V, w1), p) * gf.D1(T);
  if (!(denom > 0.0)) throw std::invalid_argument("apriori_ratio: zero denominator");
  return weighted_norm(apply_L(power_abs(V, p), p, q), w1) / denom;
}

double apriori_ratio_mixed(const RadialSource& V0, const RadialSource& V, double nu, double p, double k, double T,
                           const EvalGrid& grid, const DuhamelQuadrature& q) {
  const WeightSpec w2 = make_weight_spec(2, p, k);
  const WeightSpec w3 = make_weight_spec(3, p, k);
  const GrowthFactors gf(p, k);
  const double d2 = gf.D2(nu, T);
  const double denom = k * k * std::pow(source_norm(V0, w3, k, grid), p - nu) * std::pow(source_norm(V, w2, k, grid), nu) * d2;
  if (!(denom > 0.0)) throw std::invalid_argument("apriori_ratio_mixed: zero denominator");
  auto F = [&](double r, double t) {
    if (r > t + k) return 0.0;
    return std::pow(std::abs(V0(r, t)), p - nu) * std::pow(std::abs(V(r, t)), nu);
  };
  return weighted_norm(apply_L(F, p, k, grid, q), w2) / denom;
}

}  // namespace dwave
