#include "sigmadamp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>

#include "sigmadamp/errors.hpp"
#include "sigmadamp/format.hpp"
#include "sigmadamp/norms.hpp"
#include "sigmadamp/run_io.hpp"

namespace sigmadamp {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool is_zero(const Field& f) {
  return std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; });
}

double linear_part(const EquationParams& params, double a, int j, bool u0_zero, bool u1_zero) {
  const LinearRate rate = predict_linear_rate(params, a, j, DataClass::LmCapL2);
  if (u0_zero) return rate.u1_part.value();
  if (u1_zero) return rate.u0_part.value();
  return std::max(rate.u0_part.value(), rate.u1_part.value());
}

}  // namespace

void report_modulus(const ModulusSpec& mu, double c0, CriterionMode mode, std::ostream& out) {
  const AxiomReport ax = check_modulus_axioms(mu, 400);
  const DerivativeBound db = check_derivative_bound(mu, 400);
  const CriterionVerdict v = classify_integral_criterion(mu, c0, mode);
  out << "modulus: " << mu.display_name() << " (" << mu.key() << "), domain cap " << format_number(mu.domain_cap())
      << "\n";
  out << "axioms: zero_at_origin=" << ax.zero_at_origin << " monotone=" << ax.monotone << " concave=" << ax.concave
      << " (" << ax.sample_count << " samples)\n";
  if (!ax.monotone)
    out << "  worst monotonicity violation " << format_number(ax.worst_monotone_violation) << " at ("
        << format_number(ax.worst_monotone_pair.first) << ", " << format_number(ax.worst_monotone_pair.second) << ")\n";
  if (!ax.concave)
    out << "  worst concavity violation " << format_number(ax.worst_concavity_violation) << " at ("
        << format_number(ax.worst_concavity_pair.first) << ", " << format_number(ax.worst_concavity_pair.second)
        << ")\n";
  out << "derivative bound: sup s mu'(s)/mu(s) = " << format_number(db.supremum) << " at s = " << format_number(db.argmax)
      << "\n";
  out << "criterion (c0 = " << format_number(c0) << "): " << to_string(v.verdict);
  if (v.analytic) out << "  analytic=" << to_string(*v.analytic);
  if (v.numeric) out << "  numeric=" << to_string(*v.numeric);
  out << "\n";
}

void report_rates(const EquationParams& params, std::ostream& out) {
  out << "quantity,exponent,value,source\n";
  for (const auto& row : rate_table(params))
    out << row.quantity << "," << row.exponent.to_string() << "," << format_number(row.exponent.value()) << ","
        << row.source << "\n";
}

double predicted_linear_exponent(const EquationParams& params, const std::string& column, bool u0_zero, bool u1_zero) {
  if (u0_zero && u1_zero) throw ParameterError("no decay prediction for zero data");
  if (column == "L2_u") return linear_part(params, 0.0, 0, u0_zero, u1_zero);
  if (column == "Hr_u") return linear_part(params, params.r, 0, u0_zero, u1_zero);
  if (column == "L2_ut") return linear_part(params, 0.0, 1, u0_zero, u1_zero);
  if (column == "Hrs_ut") return linear_part(params, std::max(params.r - params.sigma, 0.0), 1, u0_zero, u1_zero);
  if (column == "energy")
    return 2.0 * std::max(linear_part(params, params.sigma, 0, u0_zero, u1_zero),
                          linear_part(params, 0.0, 1, u0_zero, u1_zero));
  throw ParameterError("no linear prediction for column '" + column + "'");
}

FitWindow resolve_fit_window(const RunConfig& cfg, const Field& u0, const Field& u1) {
  const double radius = std::max(effective_radius(u0, cfg.grid), effective_radius(u1, cfg.grid));
  FitWindow w = default_fit_window(cfg.solver.t_end, torus_wrap_time(cfg.grid, cfg.params, radius));
  if (cfg.fit.t_min) w.t_min = *cfg.fit.t_min;
  if (cfg.fit.t_max) w.t_max = *cfg.fit.t_max;
  return w;
}

LinearDecayResult run_linear_decay(const RunConfig& cfg_in, const std::string& dir) {
  RunConfig cfg = cfg_in;
  cfg.solver.nonlinear = false;
  cfg.validate();
  const auto [u0, u1] = initial_data(cfg);
  const ModulusSpec mu = ModulusSpec::parse(cfg.mu);

  LinearDecayResult res;
  res.trajectory = simulate(u0, u1, cfg.params, mu, cfg.solver, cfg.grid);
  const FitWindow window = resolve_fit_window(cfg, u0, u1);
  res.fit = fit_decay(norm_series(res.trajectory.rows, cfg.fit.column), window);
  res.predicted = cfg.fit.predicted ? *cfg.fit.predicted
                                    : predicted_linear_exponent(cfg.params, cfg.fit.column, is_zero(u0), is_zero(u1));
  res.comparison = compare_to_theory(res.fit, res.predicted, cfg.fit.tolerance);
  res.audit = audit_linear_energy(u0, u1, cfg.params, cfg.grid, res.trajectory.rows);

  if (!dir.empty()) {
    write_run(dir, cfg, res.trajectory, u1, "linear-decay");
    std::ofstream out(fs::path(dir) / "fit.csv");
    out << "column,t_min,t_max,exponent,log_amplitude,residual_rms,points,predicted,tolerance,verdict,margin,"
           "energy_nonincreasing,energy_max_relative_error\n";
    out << cfg.fit.column << "," << g17(res.fit.window.t_min) << "," << g17(res.fit.window.t_max) << ","
        << g17(res.fit.exponent) << "," << g17(res.fit.log_amplitude) << "," << g17(res.fit.residual_rms) << ","
        << res.fit.point_count << "," << g17(res.predicted) << "," << g17(cfg.fit.tolerance) << ","
        << (res.comparison.pass ? "pass" : "fail") << "," << g17(res.comparison.margin) << ","
        << (res.audit.nonincreasing ? "true" : "false") << "," << g17(res.audit.max_relative_error) << "\n";
    if (!out) throw IoError("failed writing fit.csv in " + dir);
  }
  return res;
}

SemilinearResult run_semilinear(const RunConfig& cfg, const std::string& dir) {
  cfg.validate();
  SemilinearResult res;
  auto [u0, u1] = initial_data(cfg);
  res.u0 = std::move(u0);
  res.u1 = std::move(u1);
  const ModulusSpec mu = ModulusSpec::parse(cfg.mu);
  res.trajectory = simulate(res.u0, res.u1, cfg.params, mu, cfg.solver, cfg.grid);
  if (!res.trajectory.blowup) {
    try {
      res.fit = fit_decay(norm_series(res.trajectory.rows, cfg.fit.column), resolve_fit_window(cfg, res.u0, res.u1));
    } catch (const DataError&) {
      res.fit.reset();
    }
  }
  if (!dir.empty()) write_run(dir, cfg, res.trajectory, res.u1, "semilinear");
  return res;
}

void write_functional_csv(const std::string& path, const ScanReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "R,I_R,J_R,g,G,verdict\n";
  for (const auto& r : report.rows)
    out << g17(r.R) << "," << g17(r.I_R) << "," << g17(r.J_R) << "," << g17(r.g) << "," << g17(r.G) << ","
        << report.verdict(r) << "\n";
  if (!out) throw IoError("failed writing " + path);
}

ScanReport run_blowup_scan(const std::string& run_dir, std::vector<double> R_values, int workers) {
  const LoadedRun run = load_run(run_dir);
  if (run.trajectory.snapshots.empty())
    throw CoverageError("run " + run_dir + " has no field snapshots (set solver.store_fields)");
  if (R_values.empty()) R_values = run.config.scan_R;
  if (R_values.empty()) {
    // one decade ending at the covered time, limited by the torus
    const TestFunctionSpec spec = TestFunctionSpec::for_params(run.config.params);
    const double t_cover = run.trajectory.snapshots.back().time;
    const double r_space = 0.95 * std::pow(0.5 * run.config.grid.L, spec.space_exponent);
    const double top = std::min(t_cover, r_space);
    for (int k = 0; k < 10; ++k) R_values.push_back(top * std::pow(10.0, -1.0 + k / 9.0));
  }
  const ScanReport report = blowup_scan(run.trajectory, run.u1, ModulusSpec::parse(run.config.mu), run.config.params,
                                        R_values, 0.01, workers);
  write_functional_csv((fs::path(run_dir) / "functional.csv").string(), report);
  return report;
}

Field RandomField::sample(const GridSpec& grid) const {
  Field f(grid.size(), 0.0);
  const double unit = grid.wavenumber_unit();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto idx = grid.unflatten(i);
    double x[3] = {0.0, 0.0, 0.0};
    for (int d = 0; d < grid.n; ++d) x[d] = grid.coordinate(idx[d]);
    double v = 0.0;
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const double arg = unit * (modes[m][0] * x[0] + modes[m][1] * x[1] + modes[m][2] * x[2]);
      v += amplitude[m] * std::cos(arg + phase[m]);
    }
    f[i] = v;
  }
  return f;
}

RandomField random_band_limited(int n, int kmax, std::mt19937_64& rng) {
  if (n < 1 || n > 3 || kmax < 1) throw ParameterError("random field needs n in 1..3 and kmax >= 1");
  std::normal_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  RandomField rf;
  const int k1 = n >= 2 ? kmax : 0, k2 = n >= 3 ? kmax : 0;
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = -k1; b <= k1; ++b)
      for (int c = -k2; c <= k2; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        rf.modes.push_back({a, b, c});
        rf.amplitude.push_back(amp(rng) / (1.0 + a * a + b * b + c * c));
        rf.phase.push_back(phase(rng));
      }
  return rf;
}

InequalityReport inequality_suite(const GridSpec& grid, int kmax, int count, std::uint64_t seed) {
  grid.validate();
  GridSpec fine = grid;
  fine.N *= 2;
  const SpectralGrid coarse_s(grid), fine_s(fine);
  const double n = grid.n;
  std::mt19937_64 rng(seed);
  InequalityReport rep;
  rep.fields = count;
  auto ratios = [&](const Field& f, const SpectralGrid& sg) {
    return std::array<double, 3>{check_gagliardo_nirenberg(f, sg, 2.0, 2.0, 2.0, 0.5, 1.0),
                                 check_embedding(f, sg, n / 4.0, n / 2.0 + 0.5),
                                 check_fractional_powers(f, sg, 3.0, n / 2.0 + 0.5)};
  };
  for (int i = 0; i < count; ++i) {
    const RandomField rf = random_band_limited(grid.n, kmax, rng);
    const auto c = ratios(rf.sample(grid), coarse_s);
    const auto f = ratios(rf.sample(fine), fine_s);
    for (int k = 0; k < 3; ++k) {
      if (!std::isfinite(c[k]) || !std::isfinite(f[k])) rep.all_finite = false;
      rep.max_coarse[k] = std::max(rep.max_coarse[k], c[k]);
      rep.max_fine[k] = std::max(rep.max_fine[k], f[k]);
    }
  }
  return rep;
}

std::vector<SweepMember> run_sweep(const RunConfig& cfg, const std::string& dir, int workers) {
  cfg.validate();
  const std::vector<double> amps = cfg.sweep.amplitudes.empty() ? std::vector<double>{1.0} : cfg.sweep.amplitudes;
  const std::vector<double> ps = cfg.sweep.p.empty() ? std::vector<double>{cfg.params.p} : cfg.sweep.p;
  const std::vector<double> ds = cfg.sweep.delta.empty() ? std::vector<double>{cfg.params.delta} : cfg.sweep.delta;

  std::vector<SweepMember> members;
  std::vector<RunConfig> configs;
  for (double a : amps)
    for (double p : ps)
      for (double d : ds) {
        RunConfig c = cfg;
        c.sweep = {};
        c.params.p = p;
        c.params.delta = d;
        c.u0.amplitude *= a;
        c.u1.amplitude *= a;
        if (c.data_norm) *c.data_norm *= a;
        char name[32];
        std::snprintf(name, sizeof(name), "run_%04zu", members.size());
        c.output_dir = (fs::path(dir) / name).string();
        SweepMember m;
        m.dir = c.output_dir;
        m.amplitude = a;
        m.p = p;
        m.delta = d;
        members.push_back(m);
        configs.push_back(std::move(c));
      }
  for (const auto& c : configs) c.validate();

  auto run_one = [&](std::size_t k) {
    const SemilinearResult r = run_semilinear(configs[k], configs[k].output_dir);
    SweepMember& m = members[k];
    const auto& rows = r.trajectory.rows;
    m.verdict = r.trajectory.blowup ? "blow-up" : "completed";
    m.blowup_time = r.trajectory.blowup ? r.trajectory.blowup->time : 0.0;
    m.final_t = rows.back().t;
    m.final_L2_u = rows.back().L2_u;
    for (const auto& row : rows) m.max_Linf_u = std::max(m.max_Linf_u, row.Linf_u);
  };
  const std::size_t budget = static_cast<std::size_t>(std::max(1, workers));
  for (std::size_t start = 0; start < configs.size(); start += budget) {
    std::vector<std::future<void>> batch;
    for (std::size_t k = start; k < std::min(configs.size(), start + budget); ++k)
      batch.push_back(std::async(budget > 1 ? std::launch::async : std::launch::deferred, run_one, k));
    for (auto& f : batch) f.get();
  }

  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / "summary.csv");
  out << "run,amplitude,p,delta,verdict,blowup_time,final_t,final_L2_u,max_Linf_u\n";
  for (const auto& m : members)
    out << fs::path(m.dir).filename().string() << "," << g17(m.amplitude) << "," << g17(m.p) << "," << g17(m.delta)
        << "," << m.verdict << "," << g17(m.blowup_time) << "," << g17(m.final_t) << "," << g17(m.final_L2_u) << ","
        << g17(m.max_Linf_u) << "\n";
  if (!out) throw IoError("failed writing summary.csv in " + dir);
  return members;
}

FitRecord run_fit(const std::string& norms_path, const std::string& column, FitWindow window,
                  std::optional<double> predicted, double tolerance, const std::string& ledger_path) {
  FitRecord rec;
  rec.fit = fit_decay(norm_series(read_norms_csv(norms_path), column), window);
  rec.predicted = predicted;
  if (predicted) rec.comparison = compare_to_theory(rec.fit, *predicted, tolerance);
  if (!ledger_path.empty()) {
    const std::string header =
        "source,column,t_min,t_max,exponent,log_amplitude,residual_rms,points,predicted,tolerance,verdict,margin";
    std::string row = norms_path + "," + column + "," + g17(window.t_min) + "," + g17(window.t_max) + "," +
                      g17(rec.fit.exponent) + "," + g17(rec.fit.log_amplitude) + "," + g17(rec.fit.residual_rms) + "," +
                      std::to_string(rec.fit.point_count) + ",";
    if (rec.comparison)
      row += g17(*predicted) + "," + g17(tolerance) + "," + (rec.comparison->pass ? "pass" : "fail") + "," +
             g17(rec.comparison->margin);
    else
      row += ",,,";
    append_csv_row(ledger_path, header, row);
  }
  return rec;
}

}  // namespace sigmadamp
