// Duhamel operator for u_tt - Delta u = (1+t)^{1-p} F with zero data, the
// weight system of the a-priori estimates, and a Picard solver for
// u = eps u_L + L(|u|^p).
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dwave/exponents.hpp"
#include "dwave/field.hpp"
#include "dwave/initial_data.hpp"
#include "dwave/wave_kernel.hpp"

namespace dwave {

/// Weight w_index(r, t) built from tau_+- = (t +- r + 2k)/k.
struct WeightSpec {
  int index = 1;  // 1, 2 or 3
  double k = 1.0;
  double p = 2.0;
  Rational p_exact{2, 1};
  double p1 = 0.5;  // min{(3p-4)/2, 1/2}
  double p2 = 0.5;  // max{0, (3p-5)/2}
  int p3 = 0;       // p == 5/3
  int p4 = 1;       // p == 2
};

WeightSpec make_weight_spec(int index, double p, double k = 1.0);

double tau_plus(double r, double t, double k);
double tau_minus(double r, double t, double k);

/// 1 / w (finite everywhere on the cone; zero where w2 is infinite).
double weight_reciprocal(const WeightSpec& spec, double r, double t);
/// w itself; +inf where the reciprocal vanishes.
double weight(const WeightSpec& spec, double r, double t);

/// max over grid of w |V|; samples with V = 0 contribute nothing.
double weighted_norm(const SpaceTimeField& V, const WeightSpec& spec);

/// Growth factors of the a-priori estimates, T_k = (T + 3k)/k.
struct GrowthFactors {
  double p = 2.0;
  double k = 1.0;
  double delta = 0.1;  // min{1/(2p), 0.1}

  GrowthFactors(double p, double k);
  double T_k(double T) const;
  double D1(double T) const;
  /// nu in {0, p-1, 1, p}; other values are rejected.
  double D2(double nu, double T) const;
};

/// Radial space-time function F(r, t).
using RadialSource = std::function<double(double, double)>;

struct DuhamelQuadrature {
  int time_panels = 4;  // per smooth piece of the tau range
  int disc_radial_panels = 2;
  int disc_angular_panels = 2;
  int points = 8;
  double kernel_tol = 1e-10;  // relative tolerance of the rho-kernel (split path)

  DuhamelQuadrature refined() const;
};

/// L(F)(r, t) = \int_0^t (1+tau)^{1-p} R(F(., tau) | x, t - tau) dtau for F
/// supported in |x| <= tau + k, by disc quadrature.
double apply_L_at(const RadialSource& F, double p, double k, double r, double t, const DuhamelQuadrature& q = {});

/// The same value through the lambda/rho representation
/// (2/pi) \int (1+tau)^{1-p} \int lambda F(lambda, tau) K(lambda; r, t - tau).
double apply_L_split_at(const RadialSource& F, double p, double k, double r, double t,
                        const DuhamelQuadrature& q = {});

/// K(lambda; r, s) = \int_{|lambda-r|}^{min(lambda+r, s)} rho h / sqrt(s^2 - rho^2) drho,
/// h = [(rho^2 - (lambda-r)^2)((lambda+r)^2 - rho^2)]^{-1/2}.
double rho_kernel(double lambda, double r, double s, double rel_tol = 1e-10);
/// \int_{|lambda-r|}^{lambda+r} rho h drho (equals pi/2).
double complete_rho_integral(double lambda, double r, double rel_tol = 1e-12);

/// Output grid of apply_L: r_i = i dr (i <= nr), t_n = n dt (n <= nt).
struct EvalGrid {
  std::size_t nr = 0;
  std::size_t nt = 0;
  double dr = 0.0;
  double dt = 0.0;
};
EvalGrid grid_of(const SpaceTimeField& f);

/// L(F) on the output grid (defaults to the grid of F). F must vanish outside
/// the cone; interpolation between samples is piecewise cubic.
SpaceTimeField apply_L(const SpaceTimeField& F, double p, const DuhamelQuadrature& q = {});
SpaceTimeField apply_L(const SpaceTimeField& F, double p, const EvalGrid& out, const DuhamelQuadrature& q = {});
SpaceTimeField apply_L(const RadialSource& F, double p, double k, const EvalGrid& out,
                       const DuhamelQuadrature& q = {});

/// eps * u_L sampled on the grid.
SpaceTimeField sample_free_solution(const DataProfile& profile, double epsilon, const EvalGrid& grid,
                                    const SphericalMeanQuadrature& q = {});

struct PicardStep {
  int iteration = 0;
  double difference = 0.0;  // ||u_{j+1} - u_j||_1
  double ratio = 0.0;       // difference / previous difference (0 for the first)
};

struct PicardResult {
  SpaceTimeField u;
  SpaceTimeField u0;
  std::vector<PicardStep> trace;
  bool converged = false;
  bool diverged = false;  // ratio > 1 on three consecutive iterations
};

struct PicardConfig {
  double dr = 1.0 / 16.0;
  double dt = 1.0 / 16.0;
  int max_iter = 20;
  double tol = 1e-10;
  DuhamelQuadrature quadrature;
};

/// u_0 = eps u_L, u_{j+1} = u_0 + L(|u_j|^p) on [0, T] x [0, T + k].
PicardResult picard_solve(const DataProfile& profile, const ModelParams& params, double T, const PicardConfig& config);

/// ||u - u0 - L(|u|^p)||_1.
double fixed_point_residual(const SpaceTimeField& u, const SpaceTimeField& u0, double p,
                            const DuhamelQuadrature& q = {});

/// ||L(|V|^p)||_1 / (k^2 ||V||_1^p D1(T)), norms over the output grid.
double apriori_ratio(const RadialSource& V, double p, double k, double T, const EvalGrid& grid,
                     const DuhamelQuadrature& q = {});
double apriori_ratio(const SpaceTimeField& V, double p, double T, const DuhamelQuadrature& q = {});

/// ||L(|V0|^{p-nu} |V|^nu)||_2 / (k^2 ||V0||_3^{p-nu} ||V||_2^nu D2nu(T)).
double apriori_ratio_mixed(const RadialSource& V0, const RadialSource& V, double nu, double p, double k, double T,
                           const EvalGrid& grid, const DuhamelQuadrature& q = {});

}  // namespace dwave
