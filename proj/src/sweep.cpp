#include "dwave/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/statistics/linear_regression.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <type_traits>

#include "json.hpp"

namespace dwave {

DataProfile make_profile(const std::string& data_case, double k) {
  if (data_case == "A") return make_case_A(k);
  if (data_case == "B") return make_case_B(k, CaseBSign::PosF);
  if (data_case == "B-negint") return make_case_B(k, CaseBSign::NegIntF);
  throw std::invalid_argument("unknown data case '" + data_case + "' (expected A, B or B-negint)");
}

DataClass data_class_of(const std::string& data_case) {
  if (data_case == "A") return DataClass::NonzeroIntegral;
  if (data_case == "B" || data_case == "B-negint") return DataClass::ZeroIntegral;
  throw std::invalid_argument("unknown data case '" + data_case + "'");
}

std::vector<double> SweepConfig::ladder() const {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(epsilon0 * std::pow(ratio, i));
  return out;
}

void SweepConfig::validate() const {
  if (points < 5) throw std::invalid_argument("sweep: the ladder needs at least 5 points");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("sweep: ratio must lie in (0, 1)");
  if (!(epsilon0 > 0.0)) throw std::invalid_argument("sweep: epsilon0 must be > 0");
  if (threads < 1) throw std::invalid_argument("sweep: threads must be >= 1");
  (void)data_class_of(data_case);
  solver.validate();
}

SweepConfig parse_sweep_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("sweep config: ") + e.what());
  }
  static const std::vector<std::string> known{"p", "mu", "k", "case", "epsilon0", "ratio", "points", "dr", "cfl",
                                              "threshold", "t_max", "levels", "max_cell_updates",
                                              "window_fraction", "threads", "records", "fits", "plot"};
  for (const auto& [key, node] : tree) {
    if (!node.empty()) throw std::invalid_argument("sweep config: sections are not supported ('" + key + "')");
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("sweep config: unknown key '" + key + "'");
  }
  // get() with a default silently ignores malformed values; read strings and
  // convert strictly instead.
  auto number = [&](const char* key, auto& target) {
    const auto raw = tree.get_optional<std::string>(key);
    if (!raw) return;
    std::istringstream is(*raw);
    std::remove_reference_t<decltype(target)> v{};
    if (!(is >> v) || !(is >> std::ws).eof())
      throw std::invalid_argument(std::string("sweep config: bad value for '") + key + "': '" + *raw + "'");
    target = v;
  };
  SweepConfig c;
  number("p", c.params.p);
  number("mu", c.params.mu);
  number("k", c.params.k);
  c.data_case = tree.get("case", c.data_case);
  number("epsilon0", c.epsilon0);
  number("ratio", c.ratio);
  number("points", c.points);
  number("dr", c.solver.dr);
  number("cfl", c.solver.cfl);
  number("threshold", c.solver.blowup_threshold);
  number("t_max", c.solver.t_max);
  number("levels", c.solver.refinement_levels);
  number("max_cell_updates", c.solver.max_cell_updates);
  number("window_fraction", c.solver.window_fraction);
  number("threads", c.threads);
  c.records_path = tree.get("records", c.records_path);
  c.fits_path = tree.get("fits", c.fits_path);
  c.plot_path = tree.get("plot", c.plot_path);
  c.solver.params = c.params;
  c.validate();
  return c;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return parse_sweep_config(in);
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  config.validate();
  const DataProfile profile = make_profile(config.data_case, config.params.k);
  const std::vector<double> eps = config.ladder();
  std::vector<SweepRecord> out(eps.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < eps.size(); i = next++) {
      SweepRecord& rec = out[i];
      rec.epsilon = eps[i];
      rec.p = config.params.p;
      rec.mu = config.params.mu;
      rec.data_case = config.data_case;
      try {
        const LifespanRecord lr = run_until_blowup(profile, config.solver, eps[i]);
        rec.T_num = lr.T_num;
        rec.status = lr.status;
        rec.dr = lr.dr;
        rec.converged = lr.converged;
      } catch (const std::exception&) {
        rec.status = RunStatus::SurvivedHorizon;
        rec.T_num = 0.0;
        rec.dr = config.solver.dr;
        rec.converged = false;
      }
    }
  };
  const int n_threads = std::min<int>(config.threads, static_cast<int>(eps.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* kRecordsHeader = "epsilon,p,mu,case,T_num,status,dr,converged";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("records: bad ") + what + " '" + s + "'");
  }
}

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << kRecordsHeader << '\n';
  for (const auto& r : records)
    os << fmt(r.epsilon) << ',' << fmt(r.p) << ',' << fmt(r.mu) << ',' << r.data_case << ',' << fmt(r.T_num) << ','
       << to_string(r.status) << ',' << fmt(r.dr) << ',' << (r.converged ? 1 : 0) << '\n';
}

std::vector<SweepRecord> read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("records: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) throw std::invalid_argument("records: unexpected header '" + line + "'");
  std::vector<SweepRecord> out;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 8) throw std::invalid_argument("records: expected 8 columns in '" + line + "'");
    SweepRecord r;
    r.epsilon = to_double(c[0], "epsilon");
    r.p = to_double(c[1], "p");
    r.mu = to_double(c[2], "mu");
    r.data_case = c[3];
    r.T_num = to_double(c[4], "T_num");
    r.status = run_status_from_string(c[5]);
    r.dr = to_double(c[6], "dr");
    if (c[7] != "0" && c[7] != "1") throw std::invalid_argument("records: converged must be 0 or 1");
    r.converged = c[7] == "1";
    out.push_back(r);
  }
  return out;
}

namespace {

// Blown-up records sorted by epsilon, so fits do not depend on input order.
std::vector<SweepRecord> usable(const std::vector<SweepRecord>& records) {
  std::vector<SweepRecord> u;
  for (const auto& r : records)
    if (r.status == RunStatus::BlewUp && r.T_num > 0.0 && r.epsilon > 0.0) u.push_back(r);
  if (u.size() < 4)
    throw InsufficientData("fit: " + std::to_string(u.size()) +
                           " blown-up records; the ladder may lie in the global-existence regime");
  std::sort(u.begin(), u.end(), [](const SweepRecord& a, const SweepRecord& b) { return a.epsilon < b.epsilon; });
  return u;
}

FitResult least_squares(FitModel model, const std::vector<double>& x, const std::vector<double>& y) {
  using boost::math::statistics::simple_ordinary_least_squares_with_R_squared;
  const auto [c0, c1, r2] = simple_ordinary_least_squares_with_R_squared(x, y);
  FitResult f;
  f.model = model;
  f.intercept = c0;
  f.slope = c1;
  f.r_squared = std::isfinite(r2) ? std::clamp(r2, 0.0, 1.0) : 0.0;
  f.points = static_cast<int>(x.size());
  return f;
}

}  // namespace

FitResult fit_power_law(const std::vector<SweepRecord>& records) {
  const auto u = usable(records);
  std::vector<double> x, y;
  for (const auto& r : u) {
    x.push_back(std::log(r.epsilon));
    y.push_back(std::log(r.T_num));
  }
  FitResult f = least_squares(FitModel::PowerLaw, x, y);
  try {
    ModelParams mp;
    mp.p = u.front().p;
    mp.mu = u.front().mu;
    const LifespanPrediction pred = predicted_lifespan(mp, data_class_of(u.front().data_case));
    if (pred.form == LifespanForm::PowerLaw) {
      f.predicted = pred.exponent;
      f.relative_error = std::abs(f.slope - pred.exponent) / std::abs(pred.exponent);
    }
  } catch (const std::invalid_argument&) {
    // No theorem-backed law for these parameters.
  }
  return f;
}

FitResult fit_exp_law(const std::vector<SweepRecord>& records, double theta) {
  FitModel model;
  if (std::abs(theta - 0.5) < 1e-12)
    model = FitModel::ExpHalf;
  else if (std::abs(theta - 2.0 / 3.0) < 1e-12)
    model = FitModel::ExpTwoThirds;
  else
    throw std::invalid_argument("fit_exp_law: theta must be 1/2 or 2/3");
  const auto u = usable(records);
  std::vector<double> x, y;
  for (const auto& r : u) {
    x.push_back(std::pow(r.epsilon, -theta));
    y.push_back(std::log(r.T_num));
  }
  return least_squares(model, x, y);
}

double evaluate(const FitResult& fit, double epsilon) {
  switch (fit.model) {
    case FitModel::PowerLaw: return std::exp(fit.intercept + fit.slope * std::log(epsilon));
    case FitModel::ExpHalf: return std::exp(fit.intercept + fit.slope * std::pow(epsilon, -0.5));
    case FitModel::ExpTwoThirds: return std::exp(fit.intercept + fit.slope * std::pow(epsilon, -2.0 / 3.0));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

ModelSelection select_model(const std::vector<SweepRecord>& records) {
  if (records.size() < 5) throw std::invalid_argument("select_model: needs at least 5 records");
  ModelSelection sel;
  sel.fits = {fit_power_law(records), fit_exp_law(records, 0.5), fit_exp_law(records, 2.0 / 3.0)};
  std::vector<const FitResult*> order;
  for (const auto& f : sel.fits) order.push_back(&f);
  std::stable_sort(order.begin(), order.end(),
                   [](const FitResult* a, const FitResult* b) { return a->r_squared > b->r_squared; });
  sel.best = *order[0];
  sel.margin = order[0]->r_squared - order[1]->r_squared;
  sel.inconclusive = sel.margin < kInconclusiveBand;
  return sel;
}

std::string to_string(FitModel m) {
  switch (m) {
    case FitModel::PowerLaw: return "PowerLaw";
    case FitModel::ExpHalf: return "ExpHalf";
    case FitModel::ExpTwoThirds: return "ExpTwoThirds";
  }
  return "?";
}

FitModel fit_model_from_string(const std::string& s) {
  for (auto m : {FitModel::PowerLaw, FitModel::ExpHalf, FitModel::ExpTwoThirds})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown fit model '" + s + "'");
}

namespace {

nlohmann::ordered_json fit_json(const FitResult& f) {
  nlohmann::ordered_json j;
  j["model"] = to_string(f.model);
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["r_squared"] = f.r_squared;
  j["points"] = f.points;
  j["predicted"] = f.predicted ? nlohmann::ordered_json(*f.predicted) : nlohmann::ordered_json(nullptr);
  j["relative_error"] =
      f.relative_error ? nlohmann::ordered_json(*f.relative_error) : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace

void write_fits_json(std::ostream& os, const ModelSelection& selection) {
  nlohmann::ordered_json j;
  j["selected"] = selection.inconclusive ? "inconclusive" : to_string(selection.best.model);
  j["best"] = to_string(selection.best.model);
  j["margin"] = selection.margin;
  j["inconclusive_band"] = kInconclusiveBand;
  j["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : selection.fits) j["fits"].push_back(fit_json(f));
  os << j.dump(2) << '\n';
}

void write_plot_csv(std::ostream& os, const std::vector<SweepRecord>& records, const ModelSelection& selection) {
  std::vector<SweepRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.epsilon < b.epsilon; });
  os << "epsilon,T_num,status";
  for (const auto& f : selection.fits) os << ',' << to_string(f.model);
  os << '\n';
  for (const auto& r : sorted) {
    os << fmt(r.epsilon) << ',' << fmt(r.T_num) << ',' << to_string(r.status);
    for (const auto& f : selection.fits) os << ',' << fmt(evaluate(f, r.epsilon));
    os << '\n';
  }
}

}  // namespace dwave
