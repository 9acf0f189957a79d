#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "dwave/initial_data.hpp"
#include "dwave/wave_kernel.hpp"

using namespace dwave;

namespace {

// Disc mean by nested Gauss-Kronrod after rho = 1 - v^2 (removes the edge
// singularity a different way from the library).
double mean_oracle(const std::function<double(double)>& phi, Point2 x, double t) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto ring = [&](double v) {
    const double rho = 1.0 - v * v;
    auto at = [&](double th) {
      const double y1 = x.x + t * rho * std::cos(th), y2 = x.y + t * rho * std::sin(th);
      return phi(std::hypot(y1, y2));
    };
    return GK::integrate(at, 0.0, 2.0 * std::numbers::pi, 12, 1e-13) * rho * 2.0 / std::sqrt(2.0 - v * v);
  };
  return t / (2.0 * std::numbers::pi) * GK::integrate(ring, 0.0, 1.0, 12, 1e-12);
}

}  // namespace

TEST_CASE("mean of a constant is t") {
  for (double t : {0.1, 1.0, 7.5, 40.0})
    for (Point2 x : {Point2{0, 0}, Point2{0.3, 0.2}, Point2{5, -1}})
      CHECK(std::abs(spherical_mean([](double) { return 1.0; }, INFINITY, x, t) - t) < 1e-8 * t);
}

TEST_CASE("disc mean matches an independent quadrature") {
  const DataProfile a = make_case_A(1.0);
  auto g = [&](double r) { return a.g_at(r); };
  for (auto [x, t] : {std::pair{Point2{0, 0}, 0.7}, {Point2{0.4, 0}, 2.0}, {Point2{1.5, 0.5}, 3.0}}) {
    const double ref = mean_oracle(g, x, t);
    CHECK(spherical_mean(g, 1.0, x, t) == doctest::Approx(ref).epsilon(1e-7));
  }
}

TEST_CASE("free solution: time derivative term against differences") {
  const DataProfile b = make_case_B(1.0, CaseBSign::NegIntF);
  auto f = [&](double r) { return b.f_at(r); };
  const Point2 x{0.5, 0.0};
  const double t = 1.3, h = 1e-4;
  const double dR = (mean_oracle(f, x, t + h) - mean_oracle(f, x, t - h)) / (2 * h);
  // f + g = 0 so u_L is the time derivative alone.
  CHECK(free_solution(b, x, t) == doctest::Approx(dR).epsilon(1e-5));
}

TEST_CASE("free solution at t = 0 and outside the cone") {
  const DataProfile b = make_case_B(1.0);
  CHECK(free_solution(b, 0.2, 0.0) == doctest::Approx(b.f_at(0.2)));
  CHECK(free_solution(b, 6.1, 5.0) == 0.0);
  const DataProfile a = make_case_A(2.0);
  CHECK(free_solution(a, 0.0, 0.0) == 0.0);
}

TEST_CASE("quadrature validation") {
  SphericalMeanQuadrature q;
  q.points = 0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  CHECK(SphericalMeanQuadrature{}.refined().radial_panels == 32);
}

TEST_CASE("nonzero-mass asymptotics") {
  const DataProfile a = make_case_A(1.0);
  for (double r : {0.0, 20.0, 200.0}) {
    const double t = r + 100.0;
    const double lead = 2.0 * std::numbers::pi * std::sqrt((t + r) * (t - r)) * free_solution(a, r, t);
    CHECK(lead == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("zero-mass asymptotics") {
  for (auto sign : {CaseBSign::PosF, CaseBSign::NegIntF}) {
    const DataProfile b = make_case_B(1.0, sign);
    const double mass = integrals(b).int_f;
    for (double r : {0.0, 20.0}) {
      const double t = r + 30.0;
      const double lead = -t * mass / (2.0 * std::numbers::pi * std::pow((t + r) * (t - r), 1.5));
      CHECK(free_solution(b, r, t) / lead == doctest::Approx(1.0).epsilon(0.05));
    }
  }
}

TEST_CASE("cone samples keep the gap") {
  const auto s = cone_samples(4.0, 64.0, 5, 4, 2.0);
  CHECK(s.size() == 20);
  for (const auto& p : s) CHECK(p.t - p.r >= 2.0 - 1e-12);
  CHECK_THROWS(cone_samples(4.0, 2.0, 3, 3, 1.0));
}

TEST_CASE("decay report") {
  const auto samples = cone_samples(4.0, 64.0, 5, 4, 2.0);
  const DecayReport ra = verify_decay_lemma(make_case_A(1.0), samples);
  CHECK(ra.pass);
  bool zero_mass_skipped = false;
  for (const auto& c : ra.checks)
    if (c.name == "zero_mass") zero_mass_skipped = !c.applicable;
  CHECK(zero_mass_skipped);
  const DecayReport rb = verify_decay_lemma(make_case_B(1.0, CaseBSign::NegIntF), samples);
  CHECK(rb.pass);
  std::ostringstream os;
  rb.write_csv(os);
  CHECK(os.str().rfind("check,t_min,t_max,r_max,samples,constant,applicable,pass", 0) == 0);
  CHECK_THROWS(verify_decay_lemma(make_case_A(1.0), {ConePoint{10.0, 5.0}}));
}

TEST_CASE("asymptotic envelopes") {
  const auto samples = cone_samples(4.0, 64.0, 5, 4, 1.0);
  const auto ea = fit_envelope(make_case_A(1.0), EnvelopeForm::HalfHalf, samples);
  CHECK(ea.E0 > 0.0);
  CHECK(ea.K >= 1.0);
  const auto eb = fit_envelope(make_case_B(1.0, CaseBSign::NegIntF), EnvelopeForm::HalfThreeHalf, samples);
  CHECK(eb.E0 > 0.0);
  CHECK_THROWS_AS(fit_envelope(make_case_B(1.0, CaseBSign::PosF), EnvelopeForm::HalfThreeHalf, samples),
                  EnvelopeError);
  CHECK_THROWS_AS(fit_envelope(make_case_B(1.0), EnvelopeForm::HalfHalf, samples), EnvelopeError);
}
