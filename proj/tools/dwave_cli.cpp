// dwave: exponent tables, epsilon sweeps, lifespan fits and lemma checks.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "dwave/exponents.hpp"
#include "dwave/functional_ode.hpp"
#include "dwave/sweep.hpp"
#include "dwave/wave_kernel.hpp"

using namespace dwave;

namespace {

int cmd_exponents(int n, double mu, double p) {
  std::printf("n                 %d\n", n);
  std::printf("mu                %.12g\n", mu);
  std::printf("p_F(n)            %.12g\n", fujita_exponent(n));
  std::printf("mu_0(n)           %lld/%lld\n", static_cast<long long>(mu_zero(n).num),
              static_cast<long long>(mu_zero(n).den));
  const double ps = strauss_exponent(n + mu);
  std::printf("p_S(n+mu)         %.12g\n", ps);
  std::printf("regime            %s\n", to_string(classify_regime(n, mu)).c_str());
  if (p > 0.0) {
    std::printf("p                 %.12g\n", p);
    std::printf("gamma(p, n+mu)    %.12g\n", gamma(p, n + mu));
    ModelParams mp;
    mp.n = n;
    mp.mu = mu;
    mp.p = p;
    for (auto dc : {DataClass::NonzeroIntegral, DataClass::ZeroIntegral}) {
      try {
        const auto pred = predicted_lifespan(mp, dc, true);
        std::printf("lifespan %-16s %s exponent %.12g%s\n", to_string(dc).c_str(), to_string(pred.form).c_str(),
                    pred.exponent, pred.theorem_backed ? "" : " (conjectural)");
      } catch (const std::invalid_argument& e) {
        std::printf("lifespan %-16s n/a (%s)\n", to_string(dc).c_str(), e.what());
      }
    }
  }
  return 0;
}

void write_outputs(const std::vector<SweepRecord>& records, const std::string& fits_path,
                   const std::string& plot_path) {
  try {
    const ModelSelection sel = select_model(records);
    if (!fits_path.empty()) {
      std::ofstream out(fits_path);
      write_fits_json(out, sel);
    } else {
      write_fits_json(std::cout, sel);
    }
    if (!plot_path.empty()) {
      std::ofstream out(plot_path);
      write_plot_csv(out, records, sel);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "fit skipped: " << e.what() << '\n';
  }
}

int cmd_sweep(const std::string& config_path, std::string records_path, std::string fits_path,
              std::string plot_path, int threads) {
  SweepConfig cfg = load_sweep_config(config_path);
  if (threads > 0) cfg.threads = threads;
  if (records_path.empty()) records_path = cfg.records_path;
  if (fits_path.empty()) fits_path = cfg.fits_path;
  if (plot_path.empty()) plot_path = cfg.plot_path;
  const auto records = run_sweep(cfg);
  if (!records_path.empty()) {
    std::ofstream out(records_path);
    write_records_csv(out, records);
  } else {
    write_records_csv(std::cout, records);
  }
  write_outputs(records, fits_path, plot_path);
  return 0;
}

int cmd_fit(const std::string& records_path, const std::string& fits_path, const std::string& plot_path) {
  std::ifstream in(records_path);
  if (!in) throw std::runtime_error("cannot open records '" + records_path + "'");
  write_outputs(read_records_csv(in), fits_path, plot_path);
  return 0;
}

bool verify_decay(double k, const std::string& csv_prefix) {
  bool ok = true;
  for (const std::string c : {"A", "B", "B-negint"}) {
    const DataProfile profile = make_profile(c, k);
    const auto samples = cone_samples(4.0 * k, 64.0 * k, 6, 5, 2.0 * k);
    const DecayReport rep = verify_decay_lemma(profile, samples);
    for (const auto& ch : rep.checks)
      std::printf("decay %-9s %-13s samples=%zu constant=%.6g %s\n", c.c_str(), ch.name.c_str(), ch.samples,
                  ch.constant, !ch.applicable ? "n/a" : (ch.pass ? "PASS" : "FAIL"));
    if (!csv_prefix.empty()) {
      std::ofstream out(csv_prefix + "decay_" + c + ".csv");
      rep.write_csv(out);
    }
    ok = ok && rep.pass;
  }
  return ok;
}

bool verify_slicing() {
  bool ok = true;
  for (auto v : {SlicingVariant::SubcriticalA, SlicingVariant::CriticalB}) {
    const SlicingResult r = slicing_iterate(1.0, 0.1, 40, v);
    std::printf("slicing %-14s q=%.15g lower_bound=%s\n", to_string(v).c_str(), r.q_limit,
                r.lower_bound_holds ? "PASS" : "FAIL");
    ok = ok && r.lower_bound_holds;
  }
  return ok;
}

bool verify_ode() {
  // Blow-up times of the comparison ODE must shrink as the data grow.
  double prev = INFINITY;
  bool ok = true;
  for (double eps : {0.3, 0.5, 1.0, 2.0, 4.0}) {
    const OdeBlowup b = ode_blowup_time(2.0, 3.0, 1.0 / std::numbers::pi, 1.0, 0.0, eps, 0.01, 1e300);
    std::printf("ode eps=%-5g T=%.8g refined=%.8g %s\n", eps, b.T, b.T_refined, b.agreed ? "agreed" : "disagreed");
    ok = ok && b.blew_up && b.agreed && b.T < prev;
    prev = b.T;
  }
  std::printf("ode monotone %s\n", ok ? "PASS" : "FAIL");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blow-up experiments for the scale-invariant damped wave equation"};
  app.require_subcommand(1);

  int n = 2;
  double mu = 2.0, p = 0.0;
  auto* ex = app.add_subcommand("exponents", "Print critical exponents and lifespan laws");
  ex->add_option("--n", n, "space dimension")->check(CLI::PositiveNumber);
  ex->add_option("--mu", mu, "damping strength");
  ex->add_option("--p", p, "nonlinearity power");

  std::string config, records, fits, plot;
  int threads = 0;
  auto* sw = app.add_subcommand("sweep", "Run an epsilon sweep from a config file");
  sw->add_option("config", config, "key = value config file")->required()->check(CLI::ExistingFile);
  sw->add_option("--records", records, "records CSV (default: config or stdout)");
  sw->add_option("--fits", fits, "fits output (default: config or stdout)");
  sw->add_option("--plot", plot, "plot-data CSV");
  sw->add_option("--threads", threads, "concurrent ladder points");

  std::string fit_in;
  auto* ft = app.add_subcommand("fit", "Fit lifespan laws to a records CSV");
  ft->add_option("records", fit_in, "records CSV")->required()->check(CLI::ExistingFile);
  ft->add_option("--fits", fits, "fits output (default stdout)");
  ft->add_option("--plot", plot, "plot-data CSV");

  std::string suite = "all", csv_prefix;
  double k = 1.0;
  auto* vf = app.add_subcommand("verify", "Run the decay, slicing and ODE checks");
  vf->add_option("--suite", suite, "decay, slicing, ode or all")
      ->check(CLI::IsMember({"decay", "slicing", "ode", "all"}));
  vf->add_option("--k", k, "support radius of the data")->check(CLI::Range(1.0, 16.0));
  vf->add_option("--csv-prefix", csv_prefix, "write decay reports to <prefix>decay_<case>.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ex) return cmd_exponents(n, mu, p);
    if (*sw) return cmd_sweep(config, records, fits, plot, threads);
    if (*ft) return cmd_fit(fit_in, fits, plot);
    if (*vf) {
      bool ok = true;
      if (suite == "decay" || suite == "all") ok = verify_decay(k, csv_prefix) && ok;
      if (suite == "slicing" || suite == "all") ok = verify_slicing() && ok;
      if (suite == "ode" || suite == "all") ok = verify_ode() && ok;
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
