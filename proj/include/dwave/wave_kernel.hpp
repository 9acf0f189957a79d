// Free 2D wave propagator through weighted disc means, and numerical checks of
// the large-time behaviour of the free solution.
#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dwave/initial_data.hpp"

namespace dwave {

enum class SingularHandling { SineSubstitution };

/// Tensor Gauss rule on (sigma, theta) after xi = sin(sigma) * omega, which
/// turns the weight 1/sqrt(1 - |xi|^2) into the smooth factor sin(sigma).
struct SphericalMeanQuadrature {
  int radial_panels = 16;
  int angular_panels = 16;
  int points = 8;  // Gauss points per panel in both directions
  SingularHandling mode = SingularHandling::SineSubstitution;

  SphericalMeanQuadrature refined() const;  // panels doubled
  void validate() const;
};

/// R(phi | x, t) = t/(2 pi) \int_{|xi|<=1} phi(x + t xi) / sqrt(1 - |xi|^2) dxi
/// for radial phi vanishing for |y| > support (support may be +inf).
double spherical_mean(const std::function<double(double)>& phi, double support, Point2 x, double t,
                      const SphericalMeanQuadrature& q = {});

/// u_L = d/dt R(f | x, t) + R(f + g | x, t), the free solution with data
/// (f, f + g). The time derivative is taken under the integral sign.
double free_solution(const DataProfile& profile, Point2 x, double t, const SphericalMeanQuadrature& q = {});
inline double free_solution(const DataProfile& profile, double r, double t, const SphericalMeanQuadrature& q = {}) {
  return free_solution(profile, Point2{r, 0.0}, t, q);
}

struct ConePoint {
  double r = 0.0;
  double t = 0.0;
};

/// Points on n_t times in [t_min, t_max] (geometric) and n_r radii per time
/// in [0, t - gap], where gap is the minimum distance to the light cone.
std::vector<ConePoint> cone_samples(double t_min, double t_max, int n_t, int n_r, double gap);

/// One row of the decay report.
struct DecayCheck {
  std::string name;
  double t_min = 0.0, t_max = 0.0, r_max = 0.0;
  std::size_t samples = 0;
  double constant = 0.0;  // max scaled residual over the samples
  bool applicable = true;
  bool pass = false;
};

struct DecayReport {
  // "bound": |u_L| against the two-term decay weight, any data.
  // "nonzero_mass": (u_L - mass lead) * (t+r)^{1/2} (t-r)^{3/2} / k.
  // "zero_mass": (u_L + t \int f lead) * (t+r)^{1/2} (t-r)^{5/2} / k, f + g = 0 only.
  std::vector<DecayCheck> checks;
  bool pass = true;

  void write_csv(std::ostream& os) const;
};

/// Max scaled residuals over the samples. Points with t - r < 2k or t < 4k
/// are rejected for the asymptotic checks. A check passes when its constant is
/// finite and, if `refinement_tolerance` > 0, changes by at most that relative
/// amount when the quadrature is refined.
DecayReport verify_decay_lemma(const DataProfile& profile, const std::vector<ConePoint>& samples,
                               const SphericalMeanQuadrature& q = {}, double refinement_tolerance = 0.2);

enum class EnvelopeForm { HalfHalf, HalfThreeHalf };

/// Lower bound u_L >= E0 / ((t+r)^{1/2} (t-r)^{1/2}) (HalfHalf) or
/// E0 / ((t+r)^{1/2} (t-r)^{3/2}) (HalfThreeHalf) for t - r >= K.
struct AsymptoticEnvelope {
  double E0 = 0.0;
  double K = 0.0;
  EnvelopeForm form = EnvelopeForm::HalfHalf;
};

class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest K in {k, 2k, 4k, 8k} for which the minimum of weight * u_L over
/// the samples with t - r >= K is positive; E0 is that minimum. Throws
/// EnvelopeError when the data do not fit the form or no K works.
AsymptoticEnvelope fit_envelope(const DataProfile& profile, EnvelopeForm form, const std::vector<ConePoint>& samples,
                                const SphericalMeanQuadrature& q = {});

std::string to_string(EnvelopeForm f);

}  // namespace dwave
