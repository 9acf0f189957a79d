// Compactly supported radial initial data (f, g) built from C-infinity bumps.
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "dwave/exponents.hpp"

namespace dwave {

/// Standard mollifier exp(-1/(1-s^2)) on |s| < 1, zero elsewhere.
double bump(double s);
double bump_d1(double s);
double bump_d2(double s);

/// coeff * bump((r - center) / width); support |r - center| < width.
struct BumpTerm {
  double coeff = 0.0;
  double center = 0.0;
  double width = 1.0;
};

/// Radial function given as a finite sum of bump terms.
class BumpSum {
 public:
  BumpSum() = default;
  explicit BumpSum(std::vector<BumpTerm> terms);

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  /// 2D Laplacian of the radial function, f'' + f'/r (2 f''(0) at the origin).
  double laplacian(double r) const;
  /// Largest radius where the function can be nonzero.
  double support_radius() const;
  bool empty() const { return terms_.empty(); }

  BumpSum scaled(double alpha) const;
  BumpSum negated() const { return scaled(-1.0); }
  const std::vector<BumpTerm>& terms() const { return terms_; }

 private:
  std::vector<BumpTerm> terms_;
};

enum class ProfileKind { CaseA_fZero_gBump, CaseB_fBump_gMinusF, CaseB_fNegIntegral, Custom };
enum class CaseBSign { PosF, NegIntF };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  double norm() const;
};

/// Immutable radial data pair (f, g) supported in |x| <= k.
class DataProfile {
 public:
  DataProfile(ProfileKind kind, double k, BumpSum f, BumpSum g, bool g_is_minus_f,
              std::vector<std::pair<std::string, double>> constants = {});

  ProfileKind kind() const { return kind_; }
  double k() const { return k_; }
  const BumpSum& f() const { return f_; }
  const BumpSum& g() const { return g_; }
  bool g_is_minus_f() const { return g_is_minus_f_; }
  /// Normalization constants recorded at construction.
  const std::vector<std::pair<std::string, double>>& constants() const { return constants_; }

  double f_at(double r) const { return f_.value(r); }
  double g_at(double r) const { return g_.value(r); }
  double f_at(Point2 x) const { return f_.value(x.norm()); }
  double g_at(Point2 x) const { return g_.value(x.norm()); }
  std::array<double, 2> grad_f(Point2 x) const;
  std::array<double, 2> grad_g(Point2 x) const;
  double laplacian_f(Point2 x) const { return f_.laplacian(x.norm()); }

  /// Same profile with both f and g multiplied by alpha.
  DataProfile scaled(double alpha) const;

  /// One-line key=value record that parse() reads back exactly.
  std::string describe() const;
  static DataProfile parse(const std::string& record);

 private:
  ProfileKind kind_;
  double k_;
  BumpSum f_;
  BumpSum g_;
  bool g_is_minus_f_;
  std::vector<std::pair<std::string, double>> constants_;
};

/// f = 0, g = bump(|x|/k) normalized to unit integral.
DataProfile make_case_A(double k = 1.0);
/// g = -f. PosF: f is the unit-integral bump. NegIntF: a central bump minus
/// an outer ring, scaled so that the integral of f is -1.
DataProfile make_case_B(double k = 1.0, CaseBSign sign = CaseBSign::PosF);
DataProfile make_zero_profile(double k = 1.0);

struct DataIntegrals {
  double int_f = 0.0;
  double int_g = 0.0;
  double int_f_plus_g = 0.0;
  double error_estimate = 0.0;
  DataClass data_class = DataClass::NonzeroIntegral;
};

/// 2 pi \int_0^R phi(r) r dr by the trapezoid rule with `resolution` and
/// 2*`resolution` intervals, Richardson-extrapolated. `error` receives the
/// extrapolation correction.
double radial_integral(const std::function<double(double)>& phi, double radius, int resolution,
                       double* error = nullptr);

DataIntegrals integrals(const DataProfile& profile, int resolution = 256);

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& s);

}  // namespace dwave
