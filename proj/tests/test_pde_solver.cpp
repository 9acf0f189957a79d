#include <cmath>
#include <stdexcept>
#include <sstream>

#include "doctest.h"
#include "dwave/pde_solver.hpp"

using namespace dwave;

namespace {

// Max error at t = 1 against v = cos(t) bump(r/2) driven by the matching source.
double manufactured_error(double dr) {
  const double w = 2.0, mu = 2.0;
  const BumpSum b({BumpTerm{1.0, 0.0, w}});
  const DataProfile prof(ProfileKind::Custom, w, b, BumpSum{}, false);
  SolverConfig c;
  c.params.mu = mu;
  c.params.k = w;
  c.nonlinear = false;
  c.t_max = 1.0;
  c.source = [&](double r, double t) {
    return -std::cos(t) * b.value(r) - std::cos(t) * b.laplacian(r) - mu / (1.0 + t) * std::sin(t) * b.value(r);
  };
  const double dt = 0.5 * dr;
  SolverState s = initial_state(prof, c, 1.0, dr, dt);
  const auto steps = static_cast<std::uint64_t>(std::llround(1.0 / dt));
  while (s.steps < steps) step(s, c);
  double e = 0.0;
  for (std::size_t i = 0; i < s.curr.size(); ++i)
    e = std::max(e, std::abs(s.curr[i] - std::cos(s.t) * b.value(s.r(i))));
  return e;
}

}  // namespace

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.cfl = 0.7;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.refinement_levels = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.params.k = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("zero data stays zero") {
  SolverConfig c;
  c.params.p = 1.5;
  SolverState s = initial_state(make_zero_profile(), c, 1.0, 0.125, 0.0625);
  for (int n = 0; n < 200; ++n) REQUIRE(step(s, c) == StepStatus::Ok);
  CHECK(s.max_abs() == 0.0);
}

TEST_CASE("manufactured solution converges at second order") {
  const double e1 = manufactured_error(1.0 / 32), e2 = manufactured_error(1.0 / 64), e3 = manufactured_error(1.0 / 128);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("damping dissipates the linear energy") {
  SolverConfig c;
  c.nonlinear = false;
  c.t_max = 10.0;
  const double dr = 1.0 / 32;
  SolverState s = initial_state(make_case_B(1.0), c, 1.0, dr, 0.5 * dr);
  step(s, c);
  double prev = discrete_energy(s);
  const double e0 = prev;
  double worst_rise = 0.0;
  while (s.t < 10.0) {
    step(s, c);
    const double e = discrete_energy(s);
    worst_rise = std::max(worst_rise, (e - prev) / e0);
    prev = e;
  }
  CHECK(worst_rise < 0.01);
  CHECK(prev < e0);
}

TEST_CASE("finite speed of propagation") {
  SolverConfig c;
  c.params.p = 2.0;
  const double dr = 0.0625;
  SolverState s = initial_state(make_case_A(1.0), c, 0.5, dr, 0.5 * dr);
  while (s.t < 6.0) step(s, c);
  for (std::size_t i = 0; i < s.curr.size(); ++i)
    if (s.r(i) > s.t + 1.0 + 2.0 * dr) REQUIRE(s.curr[i] == 0.0);
}

TEST_CASE("linear runs survive the horizon") {
  SolverConfig c;
  c.nonlinear = false;
  c.t_max = 30.0;
  const LifespanRecord r = run_until_blowup(make_case_A(1.0), c, 10.0);
  CHECK(r.status == RunStatus::SurvivedHorizon);
  CHECK_FALSE(r.converged);
}

TEST_CASE("large data blow up reproducibly") {
  SolverConfig c;
  c.params.p = 2.0;
  c.t_max = 200.0;
  const LifespanRecord r = run_until_blowup(make_case_A(1.0), c, 4.0);
  CHECK(r.status == RunStatus::BlewUp);
  CHECK(r.converged);
  CHECK(r.T_num <= c.t_max);
  REQUIRE(r.level_times.size() == 2);
  CHECK(std::abs(r.level_times[0] - r.level_times[1]) / r.level_times[1] < 0.02);
}

TEST_CASE("lifespan grows as the amplitude shrinks") {
  SolverConfig c;
  c.params.p = 1.5;
  c.t_max = 400.0;
  double prev = 0.0;
  for (double eps : {0.2, 0.14, 0.098, 0.0686, 0.048}) {
    const LifespanRecord r = run_until_blowup(make_case_A(1.0), c, eps);
    REQUIRE(r.status == RunStatus::BlewUp);
    CHECK(r.T_num > prev);
    prev = r.T_num;
  }
}

TEST_CASE("threshold changes barely move the lifespan") {
  SolverConfig c;
  c.params.p = 1.5;
  c.t_max = 400.0;
  c.refinement_levels = 2;
  c.blowup_threshold = 1e6;
  const double lo = run_until_blowup(make_case_A(1.0), c, 0.1).T_num;
  c.blowup_threshold = 1e10;
  const double hi = run_until_blowup(make_case_A(1.0), c, 0.1).T_num;
  CHECK(std::abs(hi - lo) / hi < 0.01);
}

TEST_CASE("work budget clips a run") {
  SolverConfig c;
  c.params.p = 1.5;
  c.t_max = 1000.0;
  c.max_cell_updates = 10000;
  const SingleRun r = run_single(make_case_A(1.0), c, 0.01, 0.0625);
  CHECK(r.status == RunStatus::BudgetExceeded);
  CHECK(r.cell_updates >= 10000);
}

TEST_CASE("u transform") {
  SolverConfig c;
  c.params.p = 2.0;
  const SpaceTimeField v = solve_field(make_case_B(1.0), c, 0.01, 2.0, 0.125, 2);
  const SpaceTimeField u = transform_to_u(v, 2.0);
  for (std::size_t i = 0; i <= v.nr(); ++i) CHECK(u.at(i, 0) == v.at(i, 0));
  const SpaceTimeField back = transform_to_v(u, 2.0);
  double worst = 0.0;
  for (std::size_t n = 0; n <= v.nt(); ++n)
    for (std::size_t i = 0; i <= v.nr(); ++i) worst = std::max(worst, std::abs(back.at(i, n) - v.at(i, n)));
  CHECK(worst <= 1e-15);
  CHECK(u.at(0, v.nt()) == doctest::Approx(3.0 * v.at(0, v.nt())));
  CHECK(v.respects_support(2.0 * v.dr()));
}

TEST_CASE("field serialization round trips") {
  SolverConfig c;
  const SpaceTimeField v = solve_field(make_case_A(1.0), c, 0.1, 1.0, 0.25, 2);
  std::stringstream csv, bin;
  v.write_csv(csv);
  v.write_binary(bin);
  const SpaceTimeField a = SpaceTimeField::read_csv(csv);
  const SpaceTimeField b = SpaceTimeField::read_binary(bin);
  CHECK(a.samples() == v.samples());
  CHECK(b.samples() == v.samples());
  CHECK(b.dr() == v.dr());
  CHECK(a.nt() == v.nt());
}

TEST_CASE("status names") {
  for (auto s : {RunStatus::BlewUp, RunStatus::SurvivedHorizon, RunStatus::BudgetExceeded})
    CHECK(run_status_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(run_status_from_string("Exploded"), std::invalid_argument);
}
