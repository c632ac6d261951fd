#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sigmadamp/config.hpp"
#include "sigmadamp/errors.hpp"
#include "sigmadamp/experiments.hpp"
#include "sigmadamp/format.hpp"
#include "sigmadamp/run_io.hpp"

using namespace sigmadamp;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::string config;
  std::string out;
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

// Frictional linear decay with a Gaussian u0 on a torus wide enough for t <= 80.
RunConfig canonical_linear_config() {
  RunConfig c;
  c.params.sigma = 1.0;
  c.params.delta = 0.0;
  c.params.n = 1;
  c.grid = {1, 4096, 200.0};
  c.solver.dt = 0.1;
  c.solver.t_end = 80.0;
  c.solver.snapshot_stride = 10;
  c.solver.nonlinear = false;
  c.u0 = {DataFamily::Gaussian, 1.0, 1.0, {0.0, 0.0, 0.0}, ""};
  c.fit.t_min = 20.0;
  c.fit.t_max = 80.0;
  return c;
}

RunConfig config_or(const Globals& g, RunConfig fallback) {
  RunConfig c = g.config.empty() ? std::move(fallback) : load_config(g.config);
  if (g.seed) c.seed = *g.seed;
  c.validate();
  return c;
}

void print_fit(const DecayFit& fit, const std::string& column) {
  std::cout << "fit " << column << ": exponent " << format_number(fit.exponent) << " over ["
            << format_number(fit.window.t_min) << ", " << format_number(fit.window.t_max) << "], " << fit.point_count
            << " points, residual " << format_number(fit.residual_rms) << "\n";
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string cell;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      double v;
      if (!parse_number(cell, v)) throw ConfigError("--R: bad value '" + cell + "'");
      out.push_back(v);
      cell.clear();
    } else {
      cell += s[i];
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structurally damped sigma-evolution experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", library_version());

  Globals g;
  app.add_option("--config", g.config, "Run config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--workers", g.workers, "Concurrent workers")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for randomized checks");

  // mu-classify
  auto* mu_cmd = app.add_subcommand("mu-classify", "Axiom report, derivative bound and criterion verdict for a modulus");
  std::string mu_key;
  std::string c0_text = "e";
  std::string mode_text = "both";
  mu_cmd->add_option("modulus", mu_key, "Modulus key, e.g. log-power:1 (default: the config's)");
  mu_cmd->add_option("--c0", c0_text, "Lower limit of the tail integral (number or 'e')");
  mu_cmd->add_option("--mode", mode_text, "analytic | numeric | both")
      ->check(CLI::IsMember({"analytic", "numeric", "both"}));

  // rates
  auto* rates_cmd = app.add_subcommand("rates", "Predicted exponents for a parameter set");
  std::optional<double> r_sigma, r_delta, r_m, r_p, r_r;
  std::optional<int> r_n;
  std::optional<std::string> r_target;
  rates_cmd->add_option("--sigma", r_sigma);
  rates_cmd->add_option("--delta", r_delta);
  rates_cmd->add_option("--m", r_m);
  rates_cmd->add_option("--n", r_n);
  rates_cmd->add_option("--p", r_p);
  rates_cmd->add_option("--r", r_r);
  rates_cmd->add_option("--target", r_target)->check(CLI::IsMember({"u", "u_t"}));

  auto* linear_cmd = app.add_subcommand("linear-decay", "Linear run, decay fit and comparison with the prediction");
  auto* semi_cmd = app.add_subcommand("semilinear", "Full semilinear run");

  auto* scan_cmd = app.add_subcommand("blowup-scan", "Test-function functionals over R for a stored run");
  std::string scan_dir;
  std::string scan_R;
  scan_cmd->add_option("run_dir", scan_dir, "Run directory with snapshots")->required()->check(CLI::ExistingDirectory);
  scan_cmd->add_option("--R", scan_R, "Comma-separated R values (default: config scan.R or one decade)");

  auto* ineq_cmd = app.add_subcommand("check-inequalities", "Inequality ratios over seeded random fields");
  int ineq_count = 100, ineq_kmax = 8;
  ineq_cmd->add_option("--count", ineq_count)->check(CLI::PositiveNumber);
  ineq_cmd->add_option("--kmax", ineq_kmax)->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "Cartesian sweep of semilinear runs");

  auto* fit_cmd = app.add_subcommand("fit", "Fit a norms.csv column and append to a results ledger");
  std::string fit_path, fit_column = "L2_u", fit_ledger;
  double fit_tmin = 10.0, fit_tmax = 1e300, fit_tol = 0.05;
  std::optional<double> fit_pred;
  fit_cmd->add_option("norms", fit_path, "norms.csv")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--column", fit_column);
  fit_cmd->add_option("--t-min", fit_tmin);
  fit_cmd->add_option("--t-max", fit_tmax);
  fit_cmd->add_option("--predicted", fit_pred);
  fit_cmd->add_option("--tolerance", fit_tol);
  fit_cmd->add_option("--ledger", fit_ledger, "Ledger CSV (default: fits.csv beside norms.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mu_cmd) {
      if (mu_key.empty()) mu_key = config_or(g, RunConfig{}).mu;
      double c0 = M_E;
      if (c0_text != "e" && !parse_number(c0_text, c0)) throw ConfigError("--c0: not a number");
      const CriterionMode mode = mode_text == "analytic" ? CriterionMode::Analytic
                                 : mode_text == "numeric" ? CriterionMode::Numeric
                                                          : CriterionMode::Both;
      report_modulus(ModulusSpec::parse(mu_key), c0, mode, std::cout);
    } else if (*rates_cmd) {
      RunConfig c = g.config.empty() ? RunConfig{} : load_config(g.config);
      EquationParams& p = c.params;
      if (r_sigma) p.sigma = *r_sigma;
      if (r_delta) p.delta = *r_delta;
      if (r_m) p.m = *r_m;
      if (r_n) p.n = *r_n;
      if (r_p) p.p = *r_p;
      if (r_r) p.r = *r_r;
      if (r_target) p.target = *r_target == "u" ? Target::OnU : Target::OnUt;
      p.validate();
      report_rates(p, std::cout);
    } else if (*linear_cmd) {
      const RunConfig c = config_or(g, canonical_linear_config());
      const std::string dir = resolve_output_dir(g.out, c, "linear-decay");
      const LinearDecayResult r = run_linear_decay(c, dir);
      print_fit(r.fit, c.fit.column);
      std::cout << "predicted " << format_number(r.predicted) << " +- " << format_number(c.fit.tolerance) << ": "
                << (r.comparison.pass ? "pass" : "fail") << " (difference " << format_number(r.comparison.difference)
                << ")\n";
      std::cout << "energy: " << (r.audit.nonincreasing ? "nonincreasing" : "NOT nonincreasing")
                << ", max relative identity error " << format_number(r.audit.max_relative_error) << "\n";
      for (const auto& w : r.trajectory.warnings) std::cout << "warning: " << w << "\n";
      std::cout << "wrote " << dir << "\n";
    } else if (*semi_cmd) {
      const RunConfig c = config_or(g, RunConfig{});
      const std::string dir = resolve_output_dir(g.out, c, "semilinear");
      const SemilinearResult r = run_semilinear(c, dir);
      const auto& tr = r.trajectory;
      if (tr.blowup)
        std::cout << "verdict: blow-up at t = " << format_number(tr.blowup->time) << " ("
                  << to_string(tr.blowup->reason) << ", amplitude " << format_number(tr.blowup->amplitude) << ")\n";
      else
        std::cout << "verdict: completed to t = " << format_number(tr.rows.back().t) << ", final L2_u "
                  << format_number(tr.rows.back().L2_u) << "\n";
      if (r.fit) print_fit(*r.fit, c.fit.column);
      std::cout << "u1 torus mean " << format_number(torus_mean(r.u1, c.grid)) << "\n";
      for (const auto& w : tr.warnings) std::cout << "warning: " << w << "\n";
      std::cout << "wrote " << dir << "\n";
    } else if (*scan_cmd) {
      const ScanReport rep = run_blowup_scan(scan_dir, scan_R.empty() ? std::vector<double>{} : parse_list(scan_R),
                                             g.workers);
      std::cout << "R,I_R,J_R,g,G,verdict\n";
      for (const auto& row : rep.rows)
        std::cout << format_number(row.R) << "," << format_number(row.I_R) << "," << format_number(row.J_R) << ","
                  << format_number(row.g) << "," << format_number(row.G) << "," << rep.verdict(row) << "\n";
      std::cout << "R0: " << (rep.R0 ? format_number(*rep.R0) : std::string("none")) << "\n";
      std::cout << "measure exponent " << format_number(rep.measure_exponent) << " (expected "
                << format_number(rep.expected_measure_exponent) << ")" << (rep.exploratory ? " exploratory" : "")
                << "\n";
      std::cout << "wrote " << (fs::path(scan_dir) / "functional.csv").string() << "\n";
    } else if (*ineq_cmd) {
      RunConfig c = g.config.empty() ? RunConfig{} : load_config(g.config);
      if (g.seed) c.seed = *g.seed;
      const InequalityReport rep = inequality_suite(c.grid, ineq_kmax, ineq_count, c.seed);
      std::cout << "check,max_ratio,max_ratio_refined,refinement_trend\n";
      for (int k = 0; k < 3; ++k)
        std::cout << InequalityReport::names[k] << "," << format_number(rep.max_coarse[k]) << ","
                  << format_number(rep.max_fine[k]) << "," << format_number(rep.growth(k)) << "\n";
      if (!rep.all_finite) std::cout << "warning: non-finite ratio encountered\n";
    } else if (*sweep_cmd) {
      const RunConfig c = config_or(g, RunConfig{});
      const std::string dir = resolve_output_dir(g.out, c, "sweep");
      const auto members = run_sweep(c, dir, g.workers);
      std::size_t blown = 0;
      for (const auto& m : members) blown += m.verdict == "blow-up";
      std::cout << members.size() << " runs, " << blown << " blow-up\n";
      std::cout << "wrote " << (fs::path(dir) / "summary.csv").string() << "\n";
    } else if (*fit_cmd) {
      const std::string ledger =
          fit_ledger.empty() ? (fs::path(fit_path).parent_path() / "fits.csv").string() : fit_ledger;
      const FitRecord rec = run_fit(fit_path, fit_column, {fit_tmin, fit_tmax}, fit_pred, fit_tol, ledger);
      print_fit(rec.fit, fit_column);
      if (rec.comparison)
        std::cout << "predicted " << format_number(*rec.predicted) << ": " << (rec.comparison->pass ? "pass" : "fail")
                  << "\n";
      std::cout << "appended to " << ledger << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "sigmadamp: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sigmadamp: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
