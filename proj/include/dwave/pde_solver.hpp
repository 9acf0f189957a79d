// Radial finite-difference integration of
//   v_tt - Delta v + mu/(1+t) v_t = |v|^p,  v(0) = eps f, v_t(0) = eps g
// with blow-up detection.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dwave/exponents.hpp"
#include "dwave/field.hpp"
#include "dwave/initial_data.hpp"

namespace dwave {

struct SolverConfig {
  ModelParams params;
  double dr = 1.0 / 16.0;
  double cfl = 0.5;  // dt / dr
  double blowup_threshold = 1e8;
  double t_max = 100.0;
  int refinement_levels = 2;
  bool nonlinear = true;
  // Time-refined rerun of the final window before the threshold crossing.
  bool refine_window = true;
  double window_fraction = 0.05;
  // Deterministic work clip, counted in grid-point updates per run (0 = none).
  std::uint64_t max_cell_updates = 0;
  // Optional extra forcing S(r, t) on the right-hand side.
  std::function<double(double, double)> source;

  void validate() const;
};

/// Two time levels of the leapfrog scheme on r_i = i*dr, i = 0..N.
struct SolverState {
  std::vector<double> prev;
  std::vector<double> curr;
  double t = 0.0;
  double dt = 0.0;
  double dr = 0.0;
  std::uint64_t steps = 0;
  std::uint64_t cell_updates = 0;
  double max_value = 0.0;  // max |v| of the current level, +inf if non-finite

  double r(std::size_t i) const { return static_cast<double>(i) * dr; }
  double max_abs() const;
};

enum class StepStatus { Ok, NonFinite };

/// Initial state at t = 0 (curr) and t = dt (prev holds t = 0). The first
/// level is a second-order Taylor step with v_tt(0) taken from the equation.
SolverState initial_state(const DataProfile& profile, const SolverConfig& config, double epsilon,
                          double dr, double dt);

/// One leapfrog step with semi-implicit damping.
StepStatus step(SolverState& state, const SolverConfig& config);

enum class RunStatus { BlewUp, SurvivedHorizon, BudgetExceeded };

struct LifespanRecord {
  double epsilon = 0.0;
  double T_num = 0.0;
  RunStatus status = RunStatus::SurvivedHorizon;
  double dr = 0.0;  // finest radial spacing used
  bool converged = false;
  double threshold = 0.0;
  std::vector<double> level_times;  // T_num per refinement level, coarse to fine
};

/// Time of the threshold crossing at one resolution (status + time).
struct SingleRun {
  RunStatus status = RunStatus::SurvivedHorizon;
  double T = 0.0;
  std::uint64_t cell_updates = 0;
};
SingleRun run_single(const DataProfile& profile, const SolverConfig& config, double epsilon, double dr);

/// Runs at config.refinement_levels resolutions dr, dr/2, ... and reports
/// the finest crossing time; converged when the two finest agree within 2%.
LifespanRecord run_until_blowup(const DataProfile& profile, const SolverConfig& config, double epsilon);

/// Samples v on a (r, t) grid up to t_end, storing every `stride`-th step.
/// The discrete support reaches t + k + 2 dr.
SpaceTimeField solve_field(const DataProfile& profile, const SolverConfig& config, double epsilon, double t_end,
                           double dr, int stride = 1);

/// u = (1 + t)^{mu/2} v and its inverse.
SpaceTimeField transform_to_u(const SpaceTimeField& v, double mu);
SpaceTimeField transform_to_v(const SpaceTimeField& u, double mu);

/// Discrete energy 2 pi \int (v_t^2 + v_r^2) r dr of the current state.
double discrete_energy(const SolverState& state);

std::string to_string(RunStatus s);
RunStatus run_status_from_string(const std::string& s);

}  // namespace dwave
