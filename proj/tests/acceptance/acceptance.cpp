// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sigmadamp/analysis.hpp"
#include "sigmadamp/config.hpp"
#include "sigmadamp/experiments.hpp"
#include "sigmadamp/functional.hpp"
#include "sigmadamp/modulus.hpp"
#include "sigmadamp/run_io.hpp"
#include "sigmadamp/solver.hpp"
#include "sigmadamp/spectral.hpp"

using namespace sigmadamp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

RunConfig shipped(const std::string& name) { return load_config((fs::path(SIGMADAMP_CONFIG_DIR) / name).string()); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sigmadamp_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

bool same_setup(const RunConfig& c, double sigma, double delta, int n, int N, double L) {
  return c.params.sigma == sigma && c.params.delta == delta && c.params.n == n && c.grid.N == N && c.grid.L == L;
}

void propagator_exactness(Outcome& o) {
  double worst_origin = 0.0;
  for (double t : {0.1, 1.0, 10.0})
    for (auto [sigma, delta] : {std::pair{1.0, 0.25}, {1.0, 0.5}, {2.0, 1.0}, {1.5, 0.1}}) {
      const Multipliers k = propagator_multipliers(t, 0.0, sigma, delta);
      worst_origin = std::max({worst_origin, std::fabs(k.K0 - 1.0), std::fabs(k.K1 - t)});
    }
  o.require(worst_origin <= 1e-12, "K(t,0)");

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  bool t0_exact = true;
  for (int i = 0; i < 50; ++i) {
    const double sigma = 1.0 + 2.0 * U(rng);
    const Multipliers k = propagator_multipliers(0.0, 10.0 * U(rng), sigma, 0.5 * sigma * U(rng));
    t0_exact = t0_exact && k.K0 == 1.0 && k.K1 == 0.0;
  }
  o.require(t0_exact, "K(0,xi)");

  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double sigma = 1.0 + 2.0 * U(rng);
    const double delta = 0.5 * sigma * U(rng);
    const double xi = 3.0 * U(rng);
    const double t = 10.0 * U(rng);
    const Multipliers k = propagator_multipliers(t, xi, sigma, delta);
    const auto ref = oracle::integrate_mode(t, std::pow(xi, 2.0 * delta), std::pow(xi, 2.0 * sigma));
    worst = std::max({worst, oracle::relative_error(k.K0, ref.K0), oracle::relative_error(k.K1, ref.K1)});
  }
  o.require(worst < 1e-8, "ODE oracle");
  o.detail << "origin error " << g(worst_origin) << ", worst relative vs ODE " << g(worst) << " over 200 cases";
}

void linear_fit(Outcome& o, const std::string& config, double sigma, double delta, bool u1_only, double target) {
  RunConfig c = shipped(config);
  o.require(same_setup(c, sigma, delta, 1, 4096, 200.0), "config setup");
  o.require(c.fit.t_min == 20.0 && c.fit.t_max == 80.0 && c.fit.column == "L2_u", "fit window");
  const auto [u0, u1] = initial_data(c);
  const bool zero0 = std::all_of(u0.begin(), u0.end(), [](double v) { return v == 0.0; });
  const bool zero1 = std::all_of(u1.begin(), u1.end(), [](double v) { return v == 0.0; });
  o.require(u1_only ? zero0 && !zero1 : zero1 && !zero0, "data shape");
  if (u1_only) o.require(torus_mean(u1, c.grid) > 0.0, "u1 mean positive");
  c.fit.predicted = target;
  const LinearDecayResult r = run_linear_decay(c, "");
  o.require(std::fabs(r.fit.exponent - target) <= 0.05, "exponent");
  o.detail << "fitted " << g(r.fit.exponent) << " vs " << g(target) << " +- 0.05 over [20, 80]";
}

void energy_dissipation(Outcome& o) {
  double worst = 0.0;
  int runs = 0, steps = 0;
  auto audit = [&](const RunConfig& c) {
    const auto [u0, u1] = initial_data(c);
    SolverConfig sc = c.solver;
    sc.nonlinear = false;
    sc.snapshot_stride = 1;
    const Trajectory tr = simulate(u0, u1, c.params, ModulusSpec::parse(c.mu), sc, c.grid);
    const EnergyAudit a = audit_linear_energy(u0, u1, c.params, c.grid, tr.rows);
    o.require(a.nonincreasing, "nonincreasing (run " + std::to_string(runs) + ")");
    worst = std::max(worst, a.max_relative_error);
    steps += a.steps;
    ++runs;
  };
  audit(shipped("linear_frictional.json"));
  audit(shipped("linear_viscoelastic.json"));
  RunConfig small = shipped("semilinear_small_data.json");
  audit(small);
  for (auto [sigma, delta] : {std::pair{1.0, 0.25}, {1.5, 0.5}, {2.0, 0.3}}) {
    RunConfig c = shipped("linear_frictional.json");
    c.params.sigma = sigma;
    c.params.delta = delta;
    c.grid.N = 1024;
    c.grid.L = 50.0;
    c.u1 = {DataFamily::CosineBump, 0.5, 3.0, {0.0, 0.0, 0.0}, ""};
    c.solver.t_end = 20.0;
    audit(c);
  }
  o.require(worst < 1e-3, "identity");
  o.detail << runs << " linear runs, " << steps << " steps, worst relative identity error " << g(worst);
}

void modulus_classifier(Outcome& o) {
  struct Case {
    ModulusSpec mu;
    Verdict want;
  };
  const std::vector<Case> cases{{ModulusSpec::lipschitz(), Verdict::Convergent},
                                {ModulusSpec::log_lip(), Verdict::Convergent},
                                {ModulusSpec::log_log_lip(1), Verdict::Convergent},
                                {ModulusSpec::log_log_lip(2), Verdict::Convergent},
                                {ModulusSpec::hoelder(0.5), Verdict::Convergent},
                                {ModulusSpec::log_power(1.5), Verdict::Convergent},
                                {ModulusSpec::log_power(2.0), Verdict::Convergent},
                                {ModulusSpec::log_power(0.5), Verdict::Divergent},
                                {ModulusSpec::log_power(1.0), Verdict::Divergent}};
  int checked = 0;
  for (const auto& c : cases)
    for (double c0 : {M_E, 10.0, 100.0}) {
      const Verdict a = classify_integral_criterion(c.mu, c0, CriterionMode::Analytic).verdict;
      const Verdict n = classify_integral_criterion(c.mu, c0, CriterionMode::Numeric).verdict;
      o.require(a == c.want && n == c.want, c.mu.key() + " at c0=" + g(c0));
      ++checked;
    }
  o.detail << checked << " (modulus, c0) pairs agree in both modes";
}

void semilinear_small_data(Outcome& o) {
  const RunConfig c = shipped("semilinear_small_data.json");
  o.require(same_setup(c, 1.0, 0.0, 1, c.grid.N, c.grid.L) && c.params.m == 1.0 && c.params.p == 3.0, "params");
  o.require(c.mu == "hoelder:0.5" && c.data_norm && *c.data_norm == 1e-3 && c.solver.t_end == 60.0, "setup");
  o.require(c.u0.family == DataFamily::Gaussian && c.u1.family == DataFamily::Gaussian, "gaussian data");
  const SemilinearResult r = run_semilinear(c, "");
  o.require(!r.trajectory.blowup, "no blow-up");
  o.require(r.trajectory.rows.back().t == 60.0, "reached t=60");
  o.require(r.fit.has_value(), "fit");
  const double exponent = r.fit ? r.fit->exponent : NAN;
  o.require(std::fabs(exponent + 0.25) <= 0.1, "exponent");

  RunConfig lin = c;
  lin.solver.nonlinear = false;
  const Trajectory l = simulate(r.u0, r.u1, lin.params, ModulusSpec::parse(lin.mu), lin.solver, lin.grid);
  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < std::min(l.rows.size(), r.trajectory.rows.size()); ++k)
    worst_ratio = std::max(worst_ratio, r.trajectory.rows[k].L2_u / l.rows[k].L2_u);
  o.require(worst_ratio <= 10.0, "L2 vs linear");
  o.detail << "fitted " << g(exponent) << " vs -0.25 +- 0.1, max L2 ratio to linear " << g(worst_ratio);
}

void blowup_functionals(Outcome& o) {
  const RunConfig c = shipped("blowup.json");
  const double sigma = c.params.sigma, delta = c.params.delta;
  const int n = c.params.n;
  o.require(c.u0.family == DataFamily::Zero && c.solver.store_fields, "setup");
  const fs::path dir = scratch("blowup");
  const SemilinearResult run = run_semilinear(c, dir.string());
  o.require(torus_mean(run.u1, c.grid) > 0.0, "u1 mean positive");
  o.require(run.trajectory.blowup.has_value(), "threshold reached");

  const ScanReport rep = run_blowup_scan(dir.string(), {}, 2);
  o.require(rep.rows.size() == 10, "10 R values");
  o.require(rep.rows.back().R / rep.rows.front().R >= 10.0 * (1 - 1e-12), "R decade");

  // (a) supports
  const TestFunctionSpec spec = TestFunctionSpec::for_params(c.params);
  const LoadedRun loaded = load_run(dir.string());
  std::vector<double> times;
  for (const auto& s : loaded.trajectory.snapshots) times.push_back(s.time);
  long samples = 0;
  for (const auto& row : rep.rows) {
    const SupportCheck sc = check_support(c.grid, times, row.R, spec);
    o.require(sc.pass(), "support at R=" + g(row.R));
    samples += sc.samples;
  }
  // (b) G <= log(1 + e) I_R within 1 %
  double worst_b = 0.0;
  for (const auto& row : rep.rows) {
    const double bound = std::log(1.0 + M_E) * row.I_R;
    worst_b = std::max(worst_b, row.G / bound);
    o.require(row.G <= 1.01 * bound, "G bound at R=" + g(row.R));
  }
  // (c) 0 <= I_R < J_R above R0
  o.require(rep.R0.has_value(), "R0 reported");
  int above = 0;
  for (const auto& row : rep.rows)
    if (rep.R0 && row.R >= *rep.R0) {
      o.require(row.I_R >= 0.0 && row.I_R < row.J_R, "ordering at R=" + g(row.R));
      ++above;
    }
  // (d) |Q*_R| ~ R^{1 + n/(2(sigma - delta))}
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : rep.rows) {
    const double x = std::log(row.R), y = std::log(row.measure_star);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double m = static_cast<double>(rep.rows.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double expected = 1.0 + n / (2.0 * (sigma - delta));
  o.require(std::fabs(slope - expected) <= 0.05, "measure exponent");

  o.detail << "blow-up t=" << g(run.trajectory.blowup ? run.trajectory.blowup->time : NAN) << ", R in ["
           << g(rep.rows.front().R) << ", " << g(rep.rows.back().R) << "], " << samples
           << " support samples, max G/(log(1+e) I_R) " << g(worst_b) << ", R0 "
           << (rep.R0 ? g(*rep.R0) : std::string("none")) << " (" << above << " rows above), measure exponent "
           << g(slope) << " vs " << g(expected);
}

void inequality_suite_check(Outcome& o) {
  double worst = 0.0;
  for (const auto& [grid, kmax] : {std::pair{GridSpec{1, 128, M_PI}, 8}, {GridSpec{2, 32, M_PI}, 4}}) {
    const InequalityReport rep = inequality_suite(grid, kmax, 100, 424242);
    o.require(rep.all_finite, "finite ratios (n=" + std::to_string(grid.n) + ")");
    for (int k = 0; k < 3; ++k) {
      worst = std::max(worst, rep.growth(k));
      o.require(std::isfinite(rep.growth(k)) && rep.growth(k) < 1.5,
                std::string(InequalityReport::names[k]) + " n=" + std::to_string(grid.n));
    }
  }
  o.detail << "100 fields on n=1 and n=2 grids, largest max-ratio growth under 2x refinement " << g(worst);
}

void fit_oracle(Outcome& o) {
  double worst_err = 0.0, worst_res = 0.0;
  for (double alpha : {-2.0, -0.25, 0.0, 0.75}) {
    std::vector<std::pair<double, double>> s;
    for (int i = 0; i <= 200; ++i) {
      const double t = 0.5 * i;
      s.emplace_back(t, 3.7 * std::pow(1.0 + t, -alpha));
    }
    const DecayFit fit = fit_decay(s, {0.0, 100.0});
    worst_err = std::max(worst_err, std::fabs(fit.exponent + alpha));
    worst_res = std::max(worst_res, fit.residual_rms);
  }
  o.require(worst_err < 1e-6 && worst_res < 1e-10, "recovery");
  o.detail << "worst exponent error " << g(worst_err) << ", worst residual " << g(worst_res);
}

void solver_order(Outcome& o) {
  const GridSpec grid{1, 256, 20.0};
  EquationParams p;
  p.sigma = 1.0;
  p.p = 3.0;
  const Field u0 = sample_radial(grid, [](double r) { return 0.5 * std::exp(-r * r / 4.0); });
  const Field u1 = sample_radial(grid, [](double r) { return 0.3 * std::exp(-r * r / 9.0); });
  const ModulusSpec mu = ModulusSpec::lipschitz();
  double order = INFINITY;
  for (double delta : {0.0, 0.25, 0.5}) {
    p.delta = delta;
    std::array<Field, 3> end;
    for (int k = 0; k < 3; ++k) {
      SolverConfig sc;
      sc.dt = 0.05 / std::pow(2.0, k);
      sc.t_end = 2.0;
      sc.store_fields = true;
      const Trajectory tr = simulate(u0, u1, p, mu, sc, grid);
      o.require(!tr.blowup, "smooth run");
      end[k] = tr.snapshots.back().u;
    }
    order = std::min(order, std::log2(max_abs_diff(end[0], end[1]) / max_abs_diff(end[1], end[2])));
  }
  o.require(order >= 1.9, "order");

  p.delta = 0.25;
  SolverConfig sc;
  sc.dt = 0.05;
  sc.t_end = 2.0;
  sc.store_fields = true;
  sc.nonlinear = false;
  const Trajectory lin = simulate(u0, u1, p, mu, sc, grid);
  double worst = 0.0;
  for (const auto& s : lin.snapshots) {
    const FieldState exact = linear_evolve(u0, u1, s.time, p, grid);
    worst = std::max({worst, max_abs_diff(s.u, exact.u), max_abs_diff(s.ut, exact.ut)});
  }
  o.require(worst <= 1e-10, "linear limit");
  o.detail << "min Richardson order " << g(order) << " (dt 0.05/0.025/0.0125, delta 0, 0.25, 0.5)" << ", linear-limit max difference " << g(worst) << " over "
           << lin.snapshots.size() << " snapshots";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "propagator exactness", 10.0, propagator_exactness},
      {2, "linear decay, frictional", 60.0,
       [](Outcome& o) { linear_fit(o, "linear_frictional.json", 1.0, 0.0, false, -0.25); }},
      {3, "linear growth, delta = sigma/2", 60.0,
       [](Outcome& o) { linear_fit(o, "linear_viscoelastic.json", 2.0, 1.0, true, 0.75); }},
      {4, "energy dissipation", 1e300, energy_dissipation},
      {5, "modulus classifier", 5.0, modulus_classifier},
      {6, "semilinear small data", 120.0, semilinear_small_data},
      {7, "blow-up functional suite", 180.0, blowup_functionals},
      {8, "inequality property suite", 60.0, inequality_suite_check},
      {9, "fit_decay oracle", 1e300, fit_oracle},
      {10, "solver order", 1e300, solver_order},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.budget_s) {
      o.pass = false;
      o.detail << " [over runtime budget " << g(c.budget_s) << " s]";
    }
    failures += !o.pass;
    std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
