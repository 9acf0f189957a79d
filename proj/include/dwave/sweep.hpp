// Epsilon sweeps of the blow-up solver, lifespan regression and model
// selection between power and exponential laws.
#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dwave/exponents.hpp"
#include "dwave/initial_data.hpp"
#include "dwave/pde_solver.hpp"

namespace dwave {

/// Data families a sweep can use: "A", "B" (f >= 0, g = -f) and
/// "B-negint" (g = -f with negative integral of f).
DataProfile make_profile(const std::string& data_case, double k);
DataClass data_class_of(const std::string& data_case);

/// Key-value sweep description; see README for the keys.
struct SweepConfig {
  ModelParams params;
  std::string data_case = "A";
  double epsilon0 = 0.1;
  double ratio = 0.7;
  int points = 8;
  SolverConfig solver;
  int threads = 1;
  std::string records_path;
  std::string fits_path;
  std::string plot_path;

  /// epsilon0 * ratio^i, i = 0..points-1.
  std::vector<double> ladder() const;
  /// Throws std::invalid_argument on fewer than 5 points or ratio outside (0, 1).
  void validate() const;
};

SweepConfig parse_sweep_config(std::istream& is);
SweepConfig load_sweep_config(const std::string& path);

/// One row of the records CSV.
struct SweepRecord {
  double epsilon = 0.0;
  double p = 0.0;
  double mu = 0.0;
  std::string data_case;
  double T_num = 0.0;
  RunStatus status = RunStatus::SurvivedHorizon;
  double dr = 0.0;
  bool converged = false;
};

/// One solver run per ladder point, in ladder order. Failures (exceptions)
/// are recorded as SurvivedHorizon with T_num = 0 and converged = false.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

void write_records_csv(std::ostream& os, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_records_csv(std::istream& is);

enum class FitModel { PowerLaw, ExpHalf, ExpTwoThirds };

struct FitResult {
  FitModel model = FitModel::PowerLaw;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::optional<double> predicted;       // power-law exponent from the theory
  std::optional<double> relative_error;  // |slope - predicted| / |predicted|
  int points = 0;
};

/// Thrown when fewer than 4 records have status BlewUp.
struct InsufficientData : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Least squares of log T_num against log epsilon over BlewUp records.
FitResult fit_power_law(const std::vector<SweepRecord>& records);
/// Least squares of log T_num against epsilon^{-theta}, theta in {1/2, 2/3}.
FitResult fit_exp_law(const std::vector<SweepRecord>& records, double theta);

/// Model value T(epsilon) of a fit.
double evaluate(const FitResult& fit, double epsilon);

struct ModelSelection {
  std::vector<FitResult> fits;  // PowerLaw, ExpHalf, ExpTwoThirds
  FitResult best;
  double margin = 0.0;  // best r^2 minus runner-up r^2
  bool inconclusive = false;
};

constexpr double kInconclusiveBand = 0.005;

/// Requires at least 5 records.
ModelSelection select_model(const std::vector<SweepRecord>& records);

std::string to_string(FitModel m);
FitModel fit_model_from_string(const std::string& s);

void write_fits_json(std::ostream& os, const ModelSelection& selection);
/// Columns epsilon,T_num,status, then one model curve per fit.
void write_plot_csv(std::ostream& os, const std::vector<SweepRecord>& records, const ModelSelection& selection);

}  // namespace dwave
