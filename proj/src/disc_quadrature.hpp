// Internal: averages of radial integrands over a disc with the weight
// 1/sqrt(1 - |xi|^2), restricted to the support of the integrand.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dwave/quadrature.hpp"

namespace dwave::detail {

// Gauss rule on [a, b] after x = a + (b - a)(1 - cos(pi u))/2, which smooths
// square-root behaviour at both ends.
template <class Fn>
double clustered_gauss(Fn&& f, double a, double b, int panels, int points) {
  if (!(b > a)) return 0.0;
  const quad::GaussRule& rule = quad::gauss_legendre(points);
  const double hu = 1.0 / panels;
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double mid = (pnl + 0.5) * hu;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = mid + 0.5 * hu * rule.nodes[i];
      const double c = std::cos(std::numbers::pi * u);
      const double x = a + half * (1.0 - c);
      const double jac = half * std::numbers::pi * std::sin(std::numbers::pi * u);
      sum += 0.5 * hu * rule.weights[i] * jac * f(x);
    }
  }
  return sum;
}

// (1/2pi) \int_{|xi|<=1} fn(|y|, x.y) / sqrt(1 - |xi|^2) dxi with y = x + t xi,
// x = (r, 0), for integrands vanishing when |y| > support (support may be
// +inf). Uses xi = sin(sigma)(cos theta, sin theta) and the symmetry in theta.
// `edges` lists radii where the integrand changes character (for instance
// term boundaries of a bump sum); they become panel breaks.
template <class Fn>
double disc_average(double r, double t, double support, int radial_panels, int angular_panels, int points, Fn&& fn,
                    const std::vector<double>& edges = {}) {
  if (!(t > 0.0)) return 0.0;
  const bool bounded = std::isfinite(support);
  const double rho_lo = bounded ? std::max(0.0, r - support) : 0.0;
  const double rho_hi = bounded ? std::min(t, r + support) : t;
  if (!(rho_hi > rho_lo)) return 0.0;

  auto sigma_of = [t](double rho) { return std::asin(std::min(1.0, rho / t)); };
  auto ring = [&](double sigma) {
    const double sin_s = std::sin(sigma);
    const double rho = t * sin_s;
    double th_lo = 0.0;
    if (bounded) {
      if (r * rho > 0.0) {
        const double c = (support * support - r * r - rho * rho) / (2.0 * r * rho);
        if (c <= -1.0) return 0.0;
        if (c < 1.0) th_lo = std::acos(c);
      } else if (rho > support || r > support) {
        return 0.0;
      }
    }
    auto at_theta = [&](double theta) {
      const double ct = std::cos(theta);
      const double y2 = r * r + rho * rho + 2.0 * r * rho * ct;
      return fn(std::sqrt(std::max(0.0, y2)), r * r + r * rho * ct);
    };
    return sin_s * clustered_gauss(at_theta, th_lo, std::numbers::pi, angular_panels, points);
  };

  // Breaks where circles of radius rho start or stop crossing an edge; the
  // support edge changes the angular range itself.
  std::vector<double> breaks{rho_lo, rho_hi};
  auto add_edge = [&](double e) {
    for (double b : {std::abs(e - r), e + r})
      if (b > rho_lo && b < rho_hi) breaks.push_back(b);
  };
  if (bounded) add_edge(support);
  for (double e : edges) add_edge(e);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const int pieces = static_cast<int>(breaks.size()) - 1;
  const int per_piece = std::max(2, (radial_panels + pieces - 1) / pieces);
  double total = 0.0;
  for (int i = 0; i < pieces; ++i)
    total += clustered_gauss(ring, sigma_of(breaks[i]), sigma_of(breaks[i + 1]), pieces == 1 ? radial_panels : per_piece,
                             points);
  return total / std::numbers::pi;
}

}  // namespace dwave::detail
