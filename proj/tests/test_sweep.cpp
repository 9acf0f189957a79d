#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dwave/sweep.hpp"

using namespace dwave;

namespace {

std::vector<SweepRecord> synthetic(const std::function<double(double)>& T, double p = 1.5,
                                   const std::string& c = "A", int n = 8, double eps0 = 0.2, double ratio = 0.7) {
  std::vector<SweepRecord> out;
  for (int i = 0; i < n; ++i) {
    SweepRecord r;
    r.epsilon = eps0 * std::pow(ratio, i);
    r.p = p;
    r.mu = 2.0;
    r.data_case = c;
    r.T_num = T(r.epsilon);
    r.status = RunStatus::BlewUp;
    r.dr = 0.0625;
    r.converged = true;
    out.push_back(r);
  }
  return out;
}

std::string fits_text(const std::vector<SweepRecord>& recs) {
  std::ostringstream os;
  write_fits_json(os, select_model(recs));
  return os.str();
}

}  // namespace

TEST_CASE("power-law fits of exact data") {
  const auto a = fit_power_law(synthetic([](double e) { return 7.0 * std::pow(e, -0.5); }));
  CHECK(std::abs(a.slope + 0.5) < 1e-10);
  CHECK(a.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(a.predicted.has_value());
  CHECK(*a.predicted == doctest::Approx(-0.5));
  CHECK(*a.relative_error < 1e-9);
  const auto b = fit_power_law(synthetic([](double e) { return 3.0 * std::pow(e, -6.0 / 11.0); }, 1.5, "B"));
  CHECK(std::abs(b.slope + 6.0 / 11.0) < 1e-10);
  CHECK(*b.predicted == doctest::Approx(-6.0 / 11.0));
  const auto c = fit_power_law(synthetic([](double e) { return std::exp(2.0 / std::sqrt(e)); }, 2.0));
  CHECK_FALSE(c.predicted.has_value());
}

TEST_CASE("exp-law fits of exact data") {
  const auto recs = synthetic([](double e) { return std::exp(2.0 * std::pow(e, -0.5)); }, 2.0);
  const auto h = fit_exp_law(recs, 0.5);
  CHECK(h.slope == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(h.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  const auto t = fit_exp_law(recs, 2.0 / 3.0);
  CHECK(t.r_squared < h.r_squared);
  CHECK_THROWS_AS(fit_exp_law(recs, 0.3), std::invalid_argument);
  CHECK(evaluate(h, 0.25) == doctest::Approx(std::exp(4.0)));
}

TEST_CASE("model selection") {
  const auto pw = select_model(synthetic([](double e) { return 5.0 * std::pow(e, -0.5); }));
  CHECK(pw.best.model == FitModel::PowerLaw);
  // Over one decade the two exp-laws are nearly collinear; two decades
  // separate them.
  const auto ex = select_model(
      synthetic([](double e) { return std::exp(2.0 * std::pow(e, -0.5)); }, 2.0, "A", 8, 1.0, 0.5));
  CHECK(ex.best.model == FitModel::ExpHalf);
  CHECK(ex.margin > kInconclusiveBand);
  CHECK_FALSE(ex.inconclusive);
  auto few = synthetic([](double e) { return 1.0 / e; });
  few.resize(4);
  CHECK_THROWS_AS(select_model(few), std::invalid_argument);
}

TEST_CASE("too few blow-ups") {
  auto recs = synthetic([](double e) { return 1.0 / e; });
  for (std::size_t i = 3; i < recs.size(); ++i) recs[i].status = RunStatus::SurvivedHorizon;
  CHECK_THROWS_AS(fit_power_law(recs), InsufficientData);
}

TEST_CASE("fits do not depend on record order or on dropping a clean point") {
  auto recs = synthetic([](double e) { return 7.0 * std::pow(e, -0.5); });
  const double s0 = fit_power_law(recs).slope;
  std::mt19937 gen(3);
  std::shuffle(recs.begin(), recs.end(), gen);
  CHECK(fits_text(recs) == fits_text(synthetic([](double e) { return 7.0 * std::pow(e, -0.5); })));
  for (std::size_t i = 0; i < recs.size(); ++i) {
    auto less = recs;
    less.erase(less.begin() + static_cast<long>(i));
    CHECK(std::abs(fit_power_law(less).slope - s0) < 1e-9);
  }
}

TEST_CASE("records round trip") {
  auto recs = synthetic([](double e) { return 3.3 / e; });
  recs[2].status = RunStatus::BudgetExceeded;
  recs[2].converged = false;
  std::stringstream ss;
  write_records_csv(ss, recs);
  CHECK(ss.str().rfind("epsilon,p,mu,case,T_num,status,dr,converged\n", 0) == 0);
  const auto back = read_records_csv(ss);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].epsilon == recs[i].epsilon);
    CHECK(back[i].T_num == recs[i].T_num);
    CHECK(back[i].status == recs[i].status);
    CHECK(back[i].converged == recs[i].converged);
  }
  CHECK(fits_text(back) == fits_text(recs));
  std::istringstream bad("epsilon,p\n1,2\n");
  CHECK_THROWS_AS(read_records_csv(bad), std::invalid_argument);
}

TEST_CASE("config parsing and validation") {
  std::istringstream good(
      "# sweep\np = 1.5\ncase = B\nepsilon0 = 0.2\nratio = 0.8\npoints = 6\ndr = 0.03125\nlevels = 3\n"
      "t_max = 500\nrecords = out.csv\n");
  const SweepConfig c = parse_sweep_config(good);
  CHECK(c.params.p == 1.5);
  CHECK(c.solver.params.p == 1.5);
  CHECK(c.data_case == "B");
  CHECK(c.solver.refinement_levels == 3);
  CHECK(c.records_path == "out.csv");
  const auto ladder = c.ladder();
  REQUIRE(ladder.size() == 6);
  CHECK(ladder[2] == doctest::Approx(0.2 * 0.64));
  std::istringstream unknown("p = 1.5\ncolour = red\n");
  CHECK_THROWS_AS(parse_sweep_config(unknown), std::invalid_argument);
  std::istringstream short_ladder("points = 4\n");
  CHECK_THROWS_AS(parse_sweep_config(short_ladder), std::invalid_argument);
  std::istringstream bad_ratio("ratio = 1.2\n");
  CHECK_THROWS_AS(parse_sweep_config(bad_ratio), std::invalid_argument);
  std::istringstream bad_value("p = abc\n");
  CHECK_THROWS_AS(parse_sweep_config(bad_value), std::invalid_argument);
  SweepConfig empty;
  empty.points = 0;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_profile("C", 1.0), std::invalid_argument);
}

TEST_CASE("small sweep is deterministic and monotone") {
  SweepConfig c;
  c.params.p = 1.5;
  c.solver.params = c.params;
  c.epsilon0 = 0.1;
  c.points = 5;
  c.solver.t_max = 400.0;
  const auto a = run_sweep(c);
  c.threads = 2;
  const auto b = run_sweep(c);
  std::ostringstream sa, sb;
  write_records_csv(sa, a);
  write_records_csv(sb, b);
  CHECK(sa.str() == sb.str());
  REQUIRE(a.size() == 5);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i].T_num > a[i - 1].T_num);
  std::ostringstream plot;
  write_plot_csv(plot, a, select_model(a));
  CHECK(plot.str().rfind("epsilon,T_num,status,PowerLaw,ExpHalf,ExpTwoThirds\n", 0) == 0);
}

TEST_CASE("budget-clipped points are recorded") {
  SweepConfig c;
  c.params.p = 1.5;
  c.solver.params = c.params;
  c.epsilon0 = 0.01;
  c.points = 5;
  c.solver.t_max = 5000.0;
  c.solver.max_cell_updates = 20000;
  const auto recs = run_sweep(c);
  for (const auto& r : recs) CHECK(r.status == RunStatus::BudgetExceeded);
  CHECK_THROWS_AS(fit_power_law(recs), InsufficientData);
}
