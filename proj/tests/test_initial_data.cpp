#include <cmath>
#include <stdexcept>
#include <numbers>

#include "doctest.h"
#include "dwave/initial_data.hpp"

using namespace dwave;

namespace {

// Plain trapezoid with many intervals, no extrapolation.
double fine_trapezoid(const std::function<double(double)>& phi, double R, int n) {
  const double h = R / n;
  double s = 0.5 * phi(R) * R;
  for (int i = 1; i < n; ++i) s += phi(i * h) * i * h;
  return 2.0 * std::numbers::pi * h * s;
}

}  // namespace

TEST_CASE("case A data") {
  const DataProfile a = make_case_A(1.0);
  for (double r : {0.0, 0.3, 0.9, 2.0}) CHECK(a.f_at(r) == 0.0);
  CHECK(a.g_at(1.5) == 0.0);
  CHECK(a.g_at(0.5) > 0.0);
  const double oracle = fine_trapezoid([&](double r) { return a.g_at(r); }, 1.0, 256 * 64);
  const auto I = integrals(a);
  CHECK(std::abs(I.int_g - oracle) < 1e-8);
  CHECK(I.int_g > 0.0);
  CHECK(I.data_class == DataClass::NonzeroIntegral);
  CHECK_THROWS_AS(make_case_A(0.5), std::invalid_argument);
}

TEST_CASE("case B data has g = -f") {
  for (auto sign : {CaseBSign::PosF, CaseBSign::NegIntF}) {
    const DataProfile b = make_case_B(2.0, sign);
    for (double r = 0.0; r < 2.5; r += 0.05) CHECK(b.f_at(r) + b.g_at(r) == 0.0);
    const auto I = integrals(b, 1024);
    CHECK(I.data_class == DataClass::ZeroIntegral);
    CHECK(std::abs(I.int_f_plus_g) < 1e-12);
    if (sign == CaseBSign::PosF) CHECK(I.int_f > 0.0);
    if (sign == CaseBSign::NegIntF) CHECK(I.int_f == doctest::Approx(-1.0).epsilon(1e-8));
  }
}

TEST_CASE("support stays inside |x| <= k") {
  for (double k : {1.0, 2.0, 3.5}) {
    const DataProfile b = make_case_B(k, CaseBSign::NegIntF);
    CHECK(b.f_at(k) == 0.0);
    CHECK(b.f_at(1.01 * k) == 0.0);
    CHECK(b.f().support_radius() <= k);
  }
}

TEST_CASE("derivatives agree with finite differences") {
  const DataProfile b = make_case_B(1.0, CaseBSign::NegIntF);
  const double h = 1e-5;
  for (double r : {0.1, 0.3, 0.6, 0.8}) {
    const double d1 = (b.f_at(r + h) - b.f_at(r - h)) / (2 * h);
    const double d2 = (b.f_at(r + h) - 2 * b.f_at(r) + b.f_at(r - h)) / (h * h);
    CHECK(b.f().d1(r) == doctest::Approx(d1).epsilon(1e-6));
    CHECK(b.f().d2(r) == doctest::Approx(d2).epsilon(1e-4));
  }
  const auto g = b.grad_f(Point2{0.3, 0.4});
  CHECK(g[0] == doctest::Approx(b.f().d1(0.5) * 0.6));
  CHECK(b.laplacian_f(Point2{0.0, 0.0}) == doctest::Approx(2.0 * b.f().d2(0.0)));
}

TEST_CASE("profile descriptor round trip") {
  for (const DataProfile& p : {make_case_A(1.5), make_case_B(1.0, CaseBSign::PosF), make_case_B(2.0, CaseBSign::NegIntF)}) {
    const DataProfile q = DataProfile::parse(p.describe());
    CHECK(q.describe() == p.describe());
    for (double r = 0.0; r < 2.0; r += 0.1) {
      CHECK(q.f_at(r) == p.f_at(r));
      CHECK(q.g_at(r) == p.g_at(r));
    }
  }
  CHECK_THROWS_AS(DataProfile::parse("k=1"), std::invalid_argument);
  CHECK_THROWS_AS(DataProfile::parse("kind=Custom k=1 f=1:0:2"), std::invalid_argument);
}

TEST_CASE("scaling multiplies both components") {
  const DataProfile b = make_case_B(1.0);
  const DataProfile s = b.scaled(3.0);
  CHECK(s.f_at(0.2) == doctest::Approx(3.0 * b.f_at(0.2)));
  CHECK(s.g_at(0.2) == doctest::Approx(3.0 * b.g_at(0.2)));
}
