#include "dwave/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace dwave {

void SolverConfig::validate() const {
  params.validate();
  if (!(dr > 0.0)) throw std::invalid_argument("SolverConfig: dr must be > 0");
  if (!(cfl > 0.0 && cfl <= 0.5)) throw std::invalid_argument("SolverConfig: cfl must lie in (0, 0.5]");
  if (!(blowup_threshold > 1.0)) throw std::invalid_argument("SolverConfig: threshold must be > 1");
  if (!(t_max > 0.0)) throw std::invalid_argument("SolverConfig: t_max must be > 0");
  if (refinement_levels < 2) throw std::invalid_argument("SolverConfig: refinement_levels must be >= 2");
  if (!(window_fraction > 0.0 && window_fraction < 1.0))
    throw std::invalid_argument("SolverConfig: window_fraction must lie in (0, 1)");
}

double SolverState::max_abs() const {
  double m = 0.0;
  for (double v : curr) {
    const double a = std::abs(v);
    if (!(a <= m)) m = a;  // propagates NaN
  }
  return m;
}

namespace {

std::size_t grid_points(const SolverConfig& config, double dr) {
  const double r_max = config.params.k + config.t_max + 4.0 * dr;
  return static_cast<std::size_t>(std::ceil(r_max / dr)) + 4;
}

// Index bound of the region that may be nonzero after time t.
std::size_t active_extent(const SolverState& s, double k, std::size_t size) {
  const double reach = s.t + s.dt + k;
  const auto i = static_cast<std::size_t>(std::floor(reach / s.dr)) + 2;
  return std::min(i, size - 2);
}

double radial_laplacian(const std::vector<double>& v, std::size_t i, double dr) {
  const double inv2 = 1.0 / (dr * dr);
  if (i == 0) return 4.0 * (v[1] - v[0]) * inv2;
  const double r = static_cast<double>(i) * dr;
  return (v[i + 1] - 2.0 * v[i] + v[i - 1]) * inv2 + (v[i + 1] - v[i - 1]) / (2.0 * r * dr);
}

double power_term(double v, double p) {
  const double a = std::abs(v);
  if (p == 2.0) return a * a;
  if (p == 1.5) return a * std::sqrt(a);
  return std::pow(a, p);
}

}  // namespace

SolverState initial_state(const DataProfile& profile, const SolverConfig& config, double epsilon, double dr,
                          double dt) {
  // Storage grows with the light cone; start with the data support.
  const std::size_t N =
      std::min(grid_points(config, dr), static_cast<std::size_t>(std::ceil((config.params.k + 1.0) / dr)) + 16);
  SolverState s;
  s.dr = dr;
  s.dt = dt;
  s.prev.assign(N, 0.0);
  s.curr.assign(N, 0.0);
  std::vector<double> v0(N, 0.0), v1(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = s.r(i);
    v0[i] = epsilon * profile.f_at(r);
    v1[i] = epsilon * profile.g_at(r);
  }
  const double mu = config.params.mu;
  const double p = config.params.p;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    double acc = radial_laplacian(v0, i, dr) - mu * v1[i];
    if (config.nonlinear) acc += power_term(v0[i], p);
    if (config.source) acc += config.source(s.r(i), 0.0);
    s.curr[i] = v0[i] + dt * v1[i] + 0.5 * dt * dt * acc;
  }
  s.prev = std::move(v0);
  s.t = dt;
  s.steps = 1;
  s.max_value = s.max_abs();
  return s;
}

StepStatus step(SolverState& s, const SolverConfig& config) {
  const double mu = config.params.mu;
  const double p = config.params.p;
  const double dt = s.dt;
  const double c = mu / (1.0 + s.t);
  const double inv_plus = 1.0 / (1.0 + 0.5 * c * dt);
  const double minus = 1.0 - 0.5 * c * dt;
  const double dt2 = dt * dt;
  const double inv_dr2 = 1.0 / (s.dr * s.dr);
  std::size_t iend = active_extent(s, config.params.k, s.curr.size());
  if (iend + 2 >= s.curr.size()) {
    const std::size_t full = grid_points(config, s.dr);
    if (s.curr.size() < full) {
      const std::size_t grown = std::min(full, std::max(2 * s.curr.size(), iend + 16));
      s.curr.resize(grown, 0.0);
      s.prev.resize(grown, 0.0);
      iend = active_extent(s, config.params.k, s.curr.size());
    }
  }
  const double* v = s.curr.data();
  double* out = s.prev.data();  // overwritten in place with the new level
  const bool nonlinear = config.nonlinear;
  const bool forced = static_cast<bool>(config.source);

  auto update = [&](std::size_t i, double lap) {
    double rhs = lap;
    if (nonlinear) rhs += power_term(v[i], p);
    if (forced) rhs += config.source(s.r(i), s.t);
    out[i] = (2.0 * v[i] - minus * out[i] + dt2 * rhs) * inv_plus;
  };
  update(0, 4.0 * (v[1] - v[0]) * inv_dr2);
  for (std::size_t i = 1; i <= iend; ++i) {
    const double half_over_i = 0.5 / static_cast<double>(i);
    const double lap = ((v[i + 1] - 2.0 * v[i] + v[i - 1]) + half_over_i * (v[i + 1] - v[i - 1])) * inv_dr2;
    update(i, lap);
  }
  double m = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i <= iend; ++i) {
    const double a = std::abs(out[i]);
    if (!std::isfinite(a)) finite = false;
    m = std::max(m, a);
  }
  std::swap(s.prev, s.curr);
  s.t += dt;
  ++s.steps;
  s.cell_updates += iend + 1;
  s.max_value = finite ? m : std::numeric_limits<double>::infinity();
  return finite ? StepStatus::Ok : StepStatus::NonFinite;
}

namespace {

// Rebuild a state at the checkpoint time with a smaller step, using a
// second-order backward Taylor value for the earlier level.
SolverState refine_state(const SolverState& coarse, const SolverConfig& config, double new_dt) {
  SolverState s = coarse;
  const double mu = config.params.mu;
  const double p = config.params.p;
  const double dt = coarse.dt;
  const double c = mu / (1.0 + coarse.t);
  const std::size_t N = coarse.curr.size();
  for (std::size_t i = 0; i + 1 < N; ++i) {
    double force = radial_laplacian(coarse.curr, i, coarse.dr);
    if (config.nonlinear) force += power_term(coarse.curr[i], p);
    if (config.source) force += config.source(coarse.r(i), coarse.t);
    const double vt = ((coarse.curr[i] - coarse.prev[i]) / dt + 0.5 * dt * force) / (1.0 + 0.5 * dt * c);
    const double acc = force - c * vt;
    s.prev[i] = coarse.curr[i] - new_dt * vt + 0.5 * new_dt * new_dt * acc;
  }
  s.dt = new_dt;
  return s;
}

struct Crossing {
  bool found = false;
  bool budget = false;
  double T = 0.0;
};

// Advance until the threshold crossing, the horizon or the work budget. When
// `checkpoints` is non-null, snapshots are kept at a doubling stride.
Crossing advance(SolverState& s, const SolverConfig& config, std::uint64_t budget,
                 std::vector<SolverState>* checkpoints) {
  const double thr = config.blowup_threshold;
  double m_prev = s.max_value;
  std::uint64_t stride = 1;
  std::uint64_t since = 0;
  while (s.t < config.t_max - 0.5 * s.dt) {
    if (checkpoints && ++since >= stride) {
      since = 0;
      checkpoints->push_back(s);
      if (checkpoints->size() > 64) {
        std::vector<SolverState> kept;
        for (std::size_t j = 0; j < checkpoints->size(); j += 2) kept.push_back(std::move((*checkpoints)[j]));
        *checkpoints = std::move(kept);
        stride *= 2;
      }
    }
    const double t0 = s.t;
    const StepStatus st = step(s, config);
    const double m = s.max_value;
    if (st == StepStatus::NonFinite || !std::isfinite(m)) return {true, false, s.t};
    if (m > thr) {
      double frac = 1.0;
      if (m_prev > 0.0 && m > m_prev) frac = (std::log(thr) - std::log(m_prev)) / (std::log(m) - std::log(m_prev));
      frac = std::clamp(frac, 0.0, 1.0);
      return {true, false, t0 + frac * s.dt};
    }
    m_prev = m;
    if (budget && s.cell_updates >= budget) return {false, true, s.t};
  }
  return {false, false, s.t};
}

}  // namespace

SingleRun run_single(const DataProfile& profile, const SolverConfig& config, double epsilon, double dr) {
  config.validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("run_single: epsilon must be > 0");
  const double dt = config.cfl * dr;
  SolverState s = initial_state(profile, config, epsilon, dr, dt);
  std::vector<SolverState> checkpoints;
  const Crossing first = advance(s, config, config.max_cell_updates, config.refine_window ? &checkpoints : nullptr);
  SingleRun out;
  out.cell_updates = s.cell_updates;
  if (!first.found) {
    out.status = first.budget ? RunStatus::BudgetExceeded : RunStatus::SurvivedHorizon;
    out.T = first.T;
    return out;
  }
  out.status = RunStatus::BlewUp;
  out.T = first.T;
  if (!config.refine_window) return out;

  const double t_window = (1.0 - config.window_fraction) * first.T;
  const SolverState* start = nullptr;
  for (const auto& c : checkpoints)
    if (c.t <= t_window) start = &c;
  if (!start) return out;
  SolverState fine = refine_state(*start, config, 0.25 * start->dt);
  const std::uint64_t used = s.cell_updates;
  const Crossing second = advance(fine, config, 0, nullptr);
  out.cell_updates = used + fine.cell_updates - start->cell_updates;
  if (second.found) out.T = second.T;
  return out;
}

LifespanRecord run_until_blowup(const DataProfile& profile, const SolverConfig& config, double epsilon) {
  config.validate();
  LifespanRecord rec;
  rec.epsilon = epsilon;
  rec.threshold = config.blowup_threshold;
  double dr = config.dr;
  SingleRun last;
  for (int level = 0; level < config.refinement_levels; ++level) {
    last = run_single(profile, config, epsilon, dr);
    rec.level_times.push_back(last.T);
    rec.dr = dr;
    if (last.status != RunStatus::BlewUp) break;
    dr *= 0.5;
  }
  rec.status = last.status;
  rec.T_num = last.T;
  const auto n = rec.level_times.size();
  if (rec.status == RunStatus::BlewUp && n >= 2) {
    const double a = rec.level_times[n - 2], b = rec.level_times[n - 1];
    rec.converged = std::abs(b - a) / b < 0.02;
  }
  return rec;
}

SpaceTimeField solve_field(const DataProfile& profile, const SolverConfig& config, double epsilon, double t_end,
                           double dr, int stride) {
  config.validate();
  if (stride < 1) throw std::invalid_argument("solve_field: stride must be >= 1");
  SolverConfig cfg = config;
  cfg.t_max = std::max(cfg.t_max, t_end);
  const double dt = cfg.cfl * dr;
  const auto total_steps = static_cast<std::size_t>(std::llround(t_end / dt));
  if (std::abs(static_cast<double>(total_steps) * dt - t_end) > 1e-9 * std::max(1.0, t_end))
    throw std::invalid_argument("solve_field: t_end must be a multiple of cfl*dr");
  if (total_steps % static_cast<std::size_t>(stride) != 0)
    throw std::invalid_argument("solve_field: step count must be divisible by stride");
  const std::size_t nt = total_steps / stride;
  const std::size_t nr = static_cast<std::size_t>(std::ceil((t_end + cfg.params.k) / dr)) + 2;
  SpaceTimeField field(nr, nt, dr, dt * stride, cfg.params.k);

  SolverState s = initial_state(profile, cfg, epsilon, dr, dt);
  auto store = [&](const std::vector<double>& level, std::size_t n) {
    const std::size_t m = std::min(nr + 1, level.size());
    for (std::size_t i = 0; i < m; ++i) field.at(i, n) = level[i];
  };
  store(s.prev, 0);
  std::size_t step_index = 1;
  if (stride == 1) store(s.curr, 1);
  while (step_index < total_steps) {
    if (step(s, cfg) == StepStatus::NonFinite) throw std::runtime_error("solve_field: solution blew up");
    ++step_index;
    if (step_index % stride == 0) store(s.curr, step_index / stride);
  }
  return field;
}

SpaceTimeField transform_to_u(const SpaceTimeField& v, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("transform_to_u: mu must be > 0");
  return v.map([mu](double, double t, double val) { return std::pow(1.0 + t, 0.5 * mu) * val; });
}

SpaceTimeField transform_to_v(const SpaceTimeField& u, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("transform_to_v: mu must be > 0");
  return u.map([mu](double, double t, double val) { return val / std::pow(1.0 + t, 0.5 * mu); });
}

double discrete_energy(const SolverState& s) {
  // Time derivative over the last step, radial derivative averaged over the
  // two levels, both on half-integer radial nodes.
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < s.curr.size(); ++i) {
    const double rh = (static_cast<double>(i) + 0.5) * s.dr;
    const double vt = 0.5 * ((s.curr[i] - s.prev[i]) + (s.curr[i + 1] - s.prev[i + 1])) / s.dt;
    const double vr = ((s.curr[i + 1] - s.curr[i]) * (s.prev[i + 1] - s.prev[i])) / (s.dr * s.dr);
    e += (vt * vt + vr) * rh;
  }
  return 2.0 * std::numbers::pi * e * s.dr;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::BlewUp: return "BlewUp";
    case RunStatus::SurvivedHorizon: return "SurvivedHorizon";
    case RunStatus::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

RunStatus run_status_from_string(const std::string& s) {
  for (auto v : {RunStatus::BlewUp, RunStatus::SurvivedHorizon, RunStatus::BudgetExceeded})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown run status '" + s + "'");
}

}  // namespace dwave
