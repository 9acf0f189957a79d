// Small quadrature toolbox shared by the kernel, Duhamel and data modules.
#pragma once

#include <functional>
#include <vector>

namespace dwave::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule (Newton iteration on P_n).
const GaussRule& gauss_legendre(int n);

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels of
/// `points` nodes each.
template <class Fn>
double composite_gauss(Fn&& f, double a, double b, int panels, int points) {
  if (!(b > a) || panels <= 0) return 0.0;
  const GaussRule& rule = gauss_legendre(points);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double mid = a + (pnl + 0.5) * h;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    sum += 0.5 * h * s;
  }
  return sum;
}

/// Double-exponential (tanh-sinh) quadrature on [a, b]; tolerant of
/// integrable endpoint singularities. Backed by Boost.Math.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10,
                 double* error = nullptr);

/// Same, for integrands singular at an endpoint: f(x, gap) receives the exact
/// distance to the nearer endpoint, positive from a and negative from b.
double tanh_sinh_gap(const std::function<double(double, double)>& f, double a, double b, double rel_tol = 1e-10,
                     double* error = nullptr);

}  // namespace dwave::quad
