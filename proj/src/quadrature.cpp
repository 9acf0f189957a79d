#include "dwave/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace dwave::quad {

namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    GaussRule r;
    if (n == 1) {
      r.nodes = {0.0};
      r.weights = {2.0};
    } else {
      r = build_rule(n);
    }
    it = cache.emplace(n, std::move(r)).first;
  }
  return it->second;
}

namespace {

using Integrator = boost::math::quadrature::tanh_sinh<double>;

// One integrator per nesting level: the Boost integrator grows its node
// tables lazily and must not be re-entered while integrating.
template <class G>
double integrate_unit(G&& g, double rel_tol, double* error) {
  static thread_local std::vector<std::unique_ptr<Integrator>> pool;
  static thread_local std::size_t depth = 0;
  if (pool.size() <= depth) pool.push_back(std::make_unique<Integrator>(12));
  Integrator& integrator = *pool[depth];
  struct Guard {
    std::size_t& d;
    ~Guard() { --d; }
  } guard{++depth};
  double err = 0.0;
  double l1 = 0.0;
  // Integrate on [-1, 1]: Boost asserts on narrow intervals far from zero.
  const double v = integrator.integrate(g, -1.0, 1.0, rel_tol, &err, &l1);
  if (error) *error = err;
  return v;
}

}  // namespace

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double rel_tol, double* error) {
  if (!(b > a)) return 0.0;
  const double half = 0.5 * (b - a);
  auto g = [&](double u) {
    const double x = std::clamp(a + half * (1.0 + u), a, b);
    return f(x) * half;
  };
  return integrate_unit(g, rel_tol, error);
}

double tanh_sinh_gap(const std::function<double(double, double)>& f, double a, double b, double rel_tol,
                     double* error) {
  if (!(b > a)) return 0.0;
  const double half = 0.5 * (b - a);
  // Boost passes uc = 1 - u for u >= 0 and uc = -(1 + u) for u < 0.
  auto g = [&](double u, double uc) {
    if (u < 0.0) {
      const double gap = -uc * half;
      return f(std::min(a + gap, b), gap) * half;
    }
    const double gap = uc * half;
    return f(std::max(b - gap, a), -gap) * half;
  };
  return integrate_unit(g, rel_tol, error);
}

}  // namespace dwave::quad
