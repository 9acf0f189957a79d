// Averaged functionals of radial solutions, the ODE comparison machinery and
// the iterated lower-bound recursions for the critical case.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dwave/field.hpp"

namespace dwave {

struct FunctionalSeries {
  std::vector<double> t;
  std::vector<double> F;  // 2 pi \int u r dr
  std::vector<double> G;  // 2 pi \int |u|^p r dr / (1+t)^{p-1}
};

/// Trapezoid sums over each time row of a u-form field.
FunctionalSeries compute_F(const SpaceTimeField& u, double p);

/// Modified Bessel function I0 by its power series (relative 1e-14).
/// Throws std::domain_error for |x| > 500.
double bessel_i0(double x);

/// 2 pi I0(r): the integral of e^{x.omega} over the unit circle at |x| = r.
double test_function_phi1(double r);

struct F1Series {
  std::vector<double> t;
  std::vector<double> F1;  // e^{-t} 2 pi \int u phi1 r dr
};
F1Series compute_F1(const SpaceTimeField& u);

/// Constants of the ODE comparison lemma: F >= A t^a for t >= T0,
/// F'' >= B (t+k)^{-q} |F|^p.
struct KatoParams {
  double p = 2.0;
  double a = 1.0;
  double q = 3.0;
  double B = 1.0;
  double A = 1.0;
  double T0 = 1.0;
  double k = 1.0;
};

struct KatoQuantities {
  double M = 0.0;            // (p-1) a / 2 - q / 2 + 1
  double bound_factor = 0.0;  // 2^{2/M}
  std::string bound_form;
};

/// Throws std::invalid_argument when M <= 0.
KatoQuantities kato_quantities(const KatoParams& kp);
/// 2^{2/M} max{T0, F(0)/F'(0), k}.
double kato_lifespan_bound(const KatoParams& kp, double F0, double F0prime);
/// Variant for F(0) > 0, F'(0) = 0 with F(t0) >= 2 F(0): 2^{2/M} max{T0, t0, k}.
double kato_lifespan_bound_shifted(const KatoParams& kp, double t0);

struct OdeBlowup {
  bool blew_up = false;
  double T = 0.0;         // crossing time with the given step cap
  double T_refined = 0.0;  // crossing time with half the step cap
  bool agreed = false;     // the two agree within 1%
};

/// Integrates F'' = B (t+k)^{-q} |F|^p from (F0, F0prime) with an adaptive
/// Dormand-Prince scheme (step cap dt) and returns the first time |F|
/// exceeds 1e12, located by bisection on the dense output.
OdeBlowup ode_blowup_time(double p, double q, double B, double k, double F0, double F0prime, double dt,
                          double horizon = 1e9);

enum class SlicingVariant { SubcriticalA, CriticalB };

struct SlicingState {
  int j = 0;
  std::int64_t a = 0;  // exponent of the logarithm
  double log_d = 0.0;
  double l = 1.0;      // sum_{i <= j} 2^{-i}
};

struct SlicingResult {
  std::vector<SlicingState> states;
  double q_limit = 0.0;      // lim (log d_j / 2^j - log d_0)
  bool lower_bound_holds = true;
  int first_violation = -1;
};

/// Variant A: a_0 = 0, d_0 = E0 eps, d_{j+1} = d_j^2 / 2^{3j+9}.
/// Variant B: a_0 = 1, d_0 = E0 eps^2, d_{j+1} = d_j^2 / (3 2^{3j+9}).
/// Both have a_{j+1} = 2 a_j + 2. The lower bound checked is
/// log d_j >= 2^j (log d_0 + q_limit).
SlicingResult slicing_iterate(double E0, double eps, int j_max, SlicingVariant variant);

/// d_j by the recursion in ordinary floating point (may under/overflow).
std::vector<double> slicing_direct(double E0, double eps, int j_max, SlicingVariant variant);

enum class CriticalCase { A, B };

/// exp(c B eps^{-theta}) with (c, theta) = (4, 1/2) for case A and
/// (c_B, 2/3) for case B; +inf when not representable.
double critical_lifespan_bound(double B, double eps, CriticalCase c = CriticalCase::A, double c_B = 4.0);

std::string to_string(SlicingVariant v);

}  // namespace dwave
