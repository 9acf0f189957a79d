#include "dwave/wave_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "disc_quadrature.hpp"
#include "dwave/quadrature.hpp"

namespace dwave {

SphericalMeanQuadrature SphericalMeanQuadrature::refined() const {
  SphericalMeanQuadrature q = *this;
  q.radial_panels *= 2;
  q.angular_panels *= 2;
  return q;
}

void SphericalMeanQuadrature::validate() const {
  if (radial_panels < 1 || angular_panels < 1 || points < 1)
    throw std::invalid_argument("SphericalMeanQuadrature: panel and point counts must be positive");
}

namespace {

template <class Fn>
double disc_average(double r, double t, double support, const SphericalMeanQuadrature& q, Fn&& fn,
                    const std::vector<double>& edges = {}) {
  return detail::disc_average(r, t, support, q.radial_panels, q.angular_panels, q.points, fn, edges);
}

std::vector<double> term_edges(const DataProfile& profile) {
  std::vector<double> e;
  for (const BumpSum* part : {&profile.f(), &profile.g()})
    for (const auto& term : part->terms()) {
      e.push_back(term.center + term.width);
      if (term.center > 0.0) e.push_back(term.center - term.width);
    }
  return e;
}

}  // namespace

double spherical_mean(const std::function<double(double)>& phi, double support, Point2 x, double t,
                      const SphericalMeanQuadrature& q) {
  q.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("spherical_mean: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double r = x.norm();
  return t * disc_average(r, t, support, q, [&](double y, double) { return phi(y); });
}

double free_solution(const DataProfile& profile, Point2 x, double t, const SphericalMeanQuadrature& q) {
  q.validate();
  if (!(t >= 0.0)) throw std::invalid_argument("free_solution: t must be >= 0");
  const double r = x.norm();
  if (t == 0.0) return profile.f_at(r);
  if (r > t + profile.k()) return 0.0;
  const BumpSum& f = profile.f();
  const BumpSum& g = profile.g();
  const bool cancel = profile.g_is_minus_f();
  // f(y) + (y - x).grad f(y) + t (f + g)(y), using (y - x).y/|y| f'(|y|).
  auto integrand = [&](double y, double xy) {
    const double fy = f.value(y);
    double v = fy;
    if (y > 0.0) v += f.d1(y) * (y * y - xy) / y;
    if (!cancel) v += t * (fy + g.value(y));
    return v;
  };
  return disc_average(r, t, profile.k(), q, integrand, term_edges(profile));
}

std::vector<ConePoint> cone_samples(double t_min, double t_max, int n_t, int n_r, double gap) {
  if (n_t < 1 || n_r < 1 || !(t_min > 0.0) || !(t_max >= t_min) || !(gap >= 0.0))
    throw std::invalid_argument("cone_samples: bad region");
  std::vector<ConePoint> out;
  for (int i = 0; i < n_t; ++i) {
    const double t = n_t == 1 ? t_min : t_min * std::pow(t_max / t_min, static_cast<double>(i) / (n_t - 1));
    const double r_top = t - gap;
    if (r_top < 0.0) continue;
    for (int j = 0; j < n_r; ++j) out.push_back({n_r == 1 ? 0.0 : r_top * j / (n_r - 1), t});
  }
  return out;
}

namespace {

struct Integrals {
  double mass = 0.0;    // \int (f + g)
  double f_mass = 0.0;  // \int f
};

Integrals data_masses(const DataProfile& profile) {
  const DataIntegrals di = integrals(profile, 512);
  return {di.int_f_plus_g, di.int_f};
}

struct CheckValues {
  double bound = 0.0;
  double nonzero_mass = 0.0;
  double zero_mass = 0.0;
  std::size_t asymptotic = 0;
  double t_min = std::numeric_limits<double>::infinity(), t_max = 0.0, r_max = 0.0;
};

CheckValues evaluate_checks(const DataProfile& profile, const std::vector<ConePoint>& samples,
                            const SphericalMeanQuadrature& q, const Integrals& m) {
  const double k = profile.k();
  const double pi = std::numbers::pi;
  CheckValues cv;
  for (const auto& s : samples) {
    if (s.r < 0.0 || s.t < 0.0 || s.r > s.t + k)
      throw std::invalid_argument("verify_decay_lemma: sample outside the support cone");
    const double u = free_solution(profile, s.r, s.t, q);
    const double tp = s.t + s.r, tm = s.t - s.r;
    const double weight = std::abs(m.mass) / std::sqrt((tp + 2 * k) * (tm + 2 * k)) +
                          1.0 / (std::sqrt(tp + 2 * k) * std::pow(tm + 2 * k, 1.5));
    cv.bound = std::max(cv.bound, std::abs(u) / weight);
    cv.t_min = std::min(cv.t_min, s.t);
    cv.t_max = std::max(cv.t_max, s.t);
    cv.r_max = std::max(cv.r_max, s.r);
    if (tm < 2 * k || s.t < 4 * k) continue;
    ++cv.asymptotic;
    const double lead_a = m.mass / (2 * pi * std::sqrt(tp * tm));
    cv.nonzero_mass = std::max(cv.nonzero_mass, std::abs(u - lead_a) * std::sqrt(tp) * std::pow(tm, 1.5) / k);
    const double lead_b = -s.t * m.f_mass / (2 * pi * std::pow(tp * tm, 1.5));
    cv.zero_mass = std::max(cv.zero_mass, std::abs(u - lead_b) * std::sqrt(tp) * std::pow(tm, 2.5) / k);
  }
  return cv;
}

bool stable(double a, double b, double tol) {
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  if (tol <= 0.0) return true;
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 || std::abs(a - b) <= tol * scale;
}

}  // namespace

DecayReport verify_decay_lemma(const DataProfile& profile, const std::vector<ConePoint>& samples,
                               const SphericalMeanQuadrature& q, double refinement_tolerance) {
  if (samples.empty()) throw std::invalid_argument("verify_decay_lemma: no samples");
  const Integrals m = data_masses(profile);
  const CheckValues a = evaluate_checks(profile, samples, q, m);
  CheckValues b = a;
  if (refinement_tolerance > 0.0) b = evaluate_checks(profile, samples, q.refined(), m);

  DecayReport rep;
  auto add = [&](const char* name, double va, double vb, bool applicable, std::size_t n) {
    DecayCheck c;
    c.name = name;
    c.t_min = a.t_min;
    c.t_max = a.t_max;
    c.r_max = a.r_max;
    c.samples = n;
    c.applicable = applicable;
    c.constant = applicable ? vb : std::numeric_limits<double>::quiet_NaN();
    c.pass = !applicable || stable(va, vb, refinement_tolerance);
    rep.pass = rep.pass && c.pass;
    rep.checks.push_back(c);
  };
  add("bound", a.bound, b.bound, true, samples.size());
  add("nonzero_mass", a.nonzero_mass, b.nonzero_mass, a.asymptotic > 0, a.asymptotic);
  add("zero_mass", a.zero_mass, b.zero_mass, a.asymptotic > 0 && profile.g_is_minus_f(), a.asymptotic);
  return rep;
}

void DecayReport::write_csv(std::ostream& os) const {
  os << std::setprecision(10);
  os << "check,t_min,t_max,r_max,samples,constant,applicable,pass\n";
  for (const auto& c : checks)
    os << c.name << ',' << c.t_min << ',' << c.t_max << ',' << c.r_max << ',' << c.samples << ',' << c.constant << ','
       << (c.applicable ? 1 : 0) << ',' << (c.pass ? 1 : 0) << '\n';
}

AsymptoticEnvelope fit_envelope(const DataProfile& profile, EnvelopeForm form, const std::vector<ConePoint>& samples,
                                const SphericalMeanQuadrature& q) {
  const Integrals m = data_masses(profile);
  if (form == EnvelopeForm::HalfHalf && !(m.mass > 0.0))
    throw EnvelopeError("fit_envelope: HalfHalf needs a positive integral of f + g");
  if (form == EnvelopeForm::HalfThreeHalf && (!profile.g_is_minus_f() || !(m.f_mass < 0.0)))
    throw EnvelopeError("fit_envelope: HalfThreeHalf needs f + g = 0 and a negative integral of f");
  const double k = profile.k();
  std::vector<double> weighted(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double tp = s.t + s.r, tm = s.t - s.r;
    const double w = form == EnvelopeForm::HalfHalf ? std::sqrt(tp * tm) : std::sqrt(tp) * std::pow(tm, 1.5);
    weighted[i] = tm > 0.0 ? w * free_solution(profile, s.r, s.t, q) : -1.0;
  }
  for (double K : {k, 2 * k, 4 * k, 8 * k}) {
    double e0 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (samples[i].t - samples[i].r >= K) e0 = std::min(e0, weighted[i]);
    if (std::isfinite(e0) && e0 > 0.0) return {e0, K, form};
  }
  throw EnvelopeError("fit_envelope: no K in {k, 2k, 4k, 8k} gives a positive lower bound on the samples");
}

std::string to_string(EnvelopeForm f) { return f == EnvelopeForm::HalfHalf ? "HalfHalf" : "HalfThreeHalf"; }

}  // namespace dwave
