#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sigmadamp/analysis.hpp"
#include "sigmadamp/errors.hpp"

using namespace sigmadamp;

namespace {

std::vector<std::pair<double, double>> power_series(double C, double exponent, double t0, double t1, int count) {
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i < count; ++i) {
    const double t = t0 + (t1 - t0) * i / (count - 1);
    s.emplace_back(t, C * std::pow(1.0 + t, exponent));
  }
  return s;
}

}  // namespace

TEST_CASE("fit_decay recovers pure power laws") {
  const auto s = power_series(5.0, -0.25, 0.0, 100.0, 50);
  const DecayFit fit = fit_decay(s, {0.0, 100.0});
  CHECK(std::fabs(fit.exponent + 0.25) < 1e-6);
  CHECK(fit.residual_rms < 1e-10);
  CHECK(fit.point_count == 50);
  CHECK(fit.log_amplitude == doctest::Approx(std::log(5.0)).epsilon(1e-10));

  for (double e = -5.0; e <= 5.0; e += 0.5) {
    const DecayFit f = fit_decay(power_series(0.3, e, 0.0, 50.0, 40), {1.0, 50.0});
    CHECK(std::fabs(f.exponent - e) < 1e-6);
    CHECK(f.residual_rms < 1e-10);
  }

  std::vector<std::pair<double, double>> flat;
  for (int i = 0; i < 10; ++i) flat.emplace_back(i, 2.0);
  CHECK(std::fabs(fit_decay(flat, {0.0, 9.0}).exponent) < 1e-14);
}

TEST_CASE("fit_decay invariances") {
  const auto s = power_series(1.0, 0.75, 0.0, 80.0, 81);
  auto scaled = s;
  for (auto& [t, v] : scaled) v *= 123.0;
  const DecayFit a = fit_decay(s, {20.0, 80.0});
  const DecayFit b = fit_decay(scaled, {20.0, 80.0});
  CHECK(a.exponent == doctest::Approx(b.exponent).epsilon(1e-12));
  CHECK(b.log_amplitude - a.log_amplitude == doctest::Approx(std::log(123.0)).epsilon(1e-10));

  // Shrinking the window toward large t approaches the asymptotic exponent.
  std::vector<std::pair<double, double>> corrected;
  for (int i = 0; i <= 4000; ++i) {
    const double t = 0.25 * i;
    corrected.emplace_back(t, std::pow(1.0 + t, -0.5) * (1.0 + 1.0 / (1.0 + t)));
  }
  double previous = 1e9;
  for (double T : {10.0, 20.0, 40.0, 80.0, 160.0}) {
    const double err = std::fabs(fit_decay(corrected, {T, 4.0 * T}).exponent + 0.5);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("fit_decay errors") {
  auto s = power_series(1.0, -1.0, 0.0, 10.0, 11);
  CHECK_THROWS_AS(fit_decay(s, {0.0, 1.5}), InsufficientDataError);
  s[3].second = 0.0;
  CHECK_THROWS_AS(fit_decay(s, {0.0, 10.0}), DataError);
  CHECK_NOTHROW(fit_decay(s, {4.0, 10.0}));
  s[5].second = -1.0;
  CHECK_THROWS_AS(fit_decay(s, {0.0, 10.0}), DataError);
  CHECK_THROWS_AS(fit_decay(s, {5.0, 5.0}), DataError);
}

TEST_CASE("compare_to_theory") {
  DecayFit fit;
  fit.exponent = -0.26;
  Comparison c = compare_to_theory(fit, -0.25, 0.05);
  CHECK(c.pass);
  CHECK(c.margin == doctest::Approx(0.04).epsilon(1e-12));
  fit.exponent = -0.10;
  CHECK_FALSE(compare_to_theory(fit, -0.25, 0.05).pass);
  fit.exponent = 0.74;
  CHECK(compare_to_theory(fit, 0.75, 0.05).pass);
  CHECK_THROWS_AS(compare_to_theory(fit, 0.75, 0.0), ParameterError);
}

TEST_CASE("wrap time and default window") {
  EquationParams p;
  p.sigma = 1.0;
  p.delta = 0.0;
  GridSpec g{1, 4096, 200.0};
  CHECK(torus_wrap_time(g, p, 8.0) == doctest::Approx(24.0 * 24.0));
  p.sigma = 2.0;
  p.delta = 1.0;
  CHECK(torus_wrap_time(g, p, 8.0) == doctest::Approx(24.0 * 24.0));
  const FitWindow w = default_fit_window(80.0, 576.0);
  CHECK(w.t_min == 10.0);
  CHECK(w.t_max == 80.0);
  CHECK(default_fit_window(1000.0, 576.0).t_max == 576.0);
}

TEST_CASE("norm series extraction") {
  std::vector<NormRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].t = i;
    rows[i].L2_ut = 10.0 + i;
  }
  const auto s = norm_series(rows, "L2_ut");
  CHECK(s.size() == 3);
  CHECK(s[2].first == 2.0);
  CHECK(s[2].second == 12.0);
  CHECK(norm_columns().front() == "t");
  CHECK(norm_columns().size() == 7);
  CHECK_THROWS_AS(norm_series(rows, "bogus"), ParameterError);
}

TEST_CASE("linear energy audit") {
  std::mt19937_64 rng(21);
  GridSpec g{1, 128, 8.0};
  SolverConfig sc;
  sc.dt = 0.05;
  sc.t_end = 10.0;
  sc.nonlinear = false;
  for (double delta : {0.0, 0.25, 0.5}) {
    EquationParams p;
    p.sigma = 1.0;
    p.delta = delta;
    const Field u0 = oracle::random_band_limited(g, 6, rng);
    const Field u1 = oracle::random_band_limited(g, 6, rng);
    const Trajectory tr = simulate(u0, u1, p, ModulusSpec::lipschitz(), sc, g);
    const EnergyAudit a = audit_linear_energy(u0, u1, p, g, tr.rows);
    CHECK(a.nonincreasing);
    CHECK(a.max_relative_error < 1e-3);
    CHECK(a.steps == 200);

    // Coarser rows integrate the same identity over longer steps.
    std::vector<NormRow> coarse;
    for (std::size_t k = 0; k < tr.rows.size(); k += 20) coarse.push_back(tr.rows[k]);
    CHECK(audit_linear_energy(u0, u1, p, g, coarse).max_relative_error < 1e-3);

    // A perturbed energy column is caught.
    std::vector<NormRow> bad = tr.rows;
    bad[100].energy = 1.001 * bad[99].energy;
    const EnergyAudit b = audit_linear_energy(u0, u1, p, g, bad);
    CHECK(!b.nonincreasing);
    CHECK(b.max_relative_error > 1e-3);
  }
  // Undamped zero data: no loss to compare against, nothing flagged.
  EquationParams p;
  const Field zero(g.size(), 0.0);
  std::vector<NormRow> rows(3);
  rows[1].t = 1.0;
  rows[2].t = 2.0;
  const EnergyAudit z = audit_linear_energy(zero, zero, p, g, rows);
  CHECK(z.nonincreasing);
  CHECK(z.max_relative_error == 0.0);
  rows[2].t = 0.5;
  CHECK_THROWS_AS(audit_linear_energy(zero, zero, p, g, rows), DataError);
}
