#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sigmadamp/errors.hpp"
#include "sigmadamp/solver.hpp"

using namespace sigmadamp;

namespace {

EquationParams params(double sigma, double delta, double p, Target target = Target::OnU) {
  EquationParams e;
  e.sigma = sigma;
  e.delta = delta;
  e.p = p;
  e.target = target;
  e.n = 1;
  e.m = 1.0;
  e.r = sigma;
  return e;
}

double max_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

Field smooth_field(const GridSpec& g, double a, double b) {
  Field f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g.coordinate(static_cast<int>(i)) * M_PI / g.L;
    f[i] = a * std::cos(x) + b * std::sin(2.0 * x);
  }
  return f;
}

}  // namespace

TEST_CASE("nonlinearity pointwise values") {
  GridSpec g{1, 32, 1.0};
  const Field c(g.size(), 0.25);
  const Field f = nonlinearity(c, 3.0, ModulusSpec::hoelder(0.5), g, 2.0 / 3.0);
  for (double v : f) CHECK(v == doctest::Approx(0.0078125).epsilon(1e-14));
  const Field z = nonlinearity(Field(g.size(), 0.0), 3.0, ModulusSpec::log_lip(), g, 1.0);
  for (double v : z) CHECK(v == 0.0);
  // sign is dropped: |v|^p mu(|v|)
  const Field neg = nonlinearity(Field(g.size(), -0.5), 2.0, ModulusSpec::lipschitz(), g, 1.0);
  CHECK(neg[0] == doctest::Approx(0.125));
  CHECK_THROWS_AS(nonlinearity(c, 1.0, ModulusSpec::lipschitz(), g, 1.0), ParameterError);
  Field bad = c;
  bad[3] = std::nan("");
  CHECK_THROWS_AS(nonlinearity(bad, 3.0, ModulusSpec::lipschitz(), g, 1.0), DomainError);
}

TEST_CASE("blow-up detection") {
  FieldState s{Field(8, 1.0), Field(8, 50.0), 0.0};
  CHECK_FALSE(blow_up_detect(s, Target::OnU, 10.0).has_value());
  CHECK(blow_up_detect(s, Target::OnUt, 10.0) == BlowupReason::Escape);
  s.u[2] = std::numeric_limits<double>::infinity();
  CHECK(blow_up_detect(s, Target::OnU, 1e300) == BlowupReason::NotFinite);
  CHECK(to_string(BlowupReason::Escape) == "escape");
  CHECK(to_string(BlowupReason::NotFinite) == "not-finite");
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = SolverConfig{};
  c.dealias_fraction = 1.5;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = SolverConfig{};
  c.snapshot_stride = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("linear limit matches the exact propagator at every snapshot") {
  GridSpec g{1, 128, 10.0};
  std::mt19937_64 rng(5);
  const Field u0 = oracle::random_band_limited(g, 10, rng);
  const Field u1 = oracle::random_band_limited(g, 10, rng);
  for (double delta : {0.0, 0.3, 0.5}) {
    const EquationParams p = params(1.0, delta, 3.0);
    SolverConfig cfg;
    cfg.dt = 0.1;
    cfg.t_end = 5.0;
    cfg.nonlinear = false;
    cfg.store_fields = true;
    const Trajectory tr = simulate(u0, u1, p, ModulusSpec::lipschitz(), cfg, g);
    REQUIRE(tr.snapshots.size() == 51);
    for (const auto& s : tr.snapshots) {
      const FieldState exact = linear_evolve(u0, u1, s.time, p, g);
      CHECK(max_diff(s.u, exact.u) < 1e-10);
      CHECK(max_diff(s.ut, exact.ut) < 1e-10);
    }
  }
}

TEST_CASE("mean mode of the linear flow") {
  GridSpec g{1, 64, 5.0};
  Field u0(g.size(), 0.3), u1(g.size(), 0.2);
  const EquationParams p = params(1.0, 0.5, 3.0);
  SolverConfig cfg;
  cfg.dt = 0.25;
  cfg.t_end = 4.0;
  cfg.nonlinear = false;
  cfg.store_fields = true;
  const Trajectory tr = simulate(u0, u1, p, ModulusSpec::lipschitz(), cfg, g);
  for (const auto& s : tr.snapshots)
    for (double v : s.u) CHECK(v == doctest::Approx(0.3 + 0.2 * s.time).epsilon(1e-12));
}

TEST_CASE("spatially constant data follow the mean-mode ODE") {
  // At xi = 0 the damping symbol is 1 for delta = 0, so u'' + u' = |u|^3 * |u|.
  GridSpec g{1, 32, 3.0};
  const double y0 = 0.6, y1 = 0.1, T = 2.0;
  using State = std::array<double, 2>;
  State y{y0, y1};
  namespace ode = boost::numeric::odeint;
  auto rhs = [](const State& s, State& ds, double) {
    ds[0] = s[1];
    ds[1] = -s[1] + std::pow(std::fabs(s[0]), 4.0);
  };
  ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-12, ode::runge_kutta_dopri5<State>()), rhs, y, 0.0, T, 1e-3);

  const EquationParams p = params(1.0, 0.0, 3.0);
  SolverConfig cfg;
  cfg.dt = 0.005;
  cfg.t_end = T;
  const Trajectory tr = simulate(Field(g.size(), y0), Field(g.size(), y1), p, ModulusSpec::lipschitz(), cfg, g);
  CHECK_FALSE(tr.blowup.has_value());
  CHECK(tr.rows.back().Linf_u == doctest::Approx(y[0]).epsilon(1e-5));
  CHECK(tr.rows.back().L2_ut / std::sqrt(g.volume()) == doctest::Approx(std::fabs(y[1])).epsilon(1e-4));
}

TEST_CASE("temporal order by Richardson extrapolation") {
  GridSpec g{1, 64, M_PI};
  const Field u0 = smooth_field(g, 0.5, 0.2);
  const Field u1 = smooth_field(g, -0.1, 0.3);
  for (double delta : {0.0, 0.5}) {
    const EquationParams p = params(1.0, delta, 3.0);
    std::array<Field, 3> u;
    for (int k = 0; k < 3; ++k) {
      SolverConfig cfg;
      cfg.dt = 0.1 / std::pow(2.0, k);
      cfg.t_end = 2.0;
      cfg.store_fields = true;
      u[k] = simulate(u0, u1, p, ModulusSpec::lipschitz(), cfg, g).snapshots.back().u;
    }
    const double order = std::log2(max_diff(u[0], u[1]) / max_diff(u[1], u[2]));
    CHECK(order >= 1.9);
  }
}

TEST_CASE("simulate is deterministic") {
  GridSpec g{2, 32, 4.0};
  std::mt19937_64 rng(9);
  const Field u0 = oracle::random_band_limited(g, 3, rng);
  const Field u1 = oracle::random_band_limited(g, 3, rng);
  EquationParams p = params(1.0, 0.25, 2.0);
  p.n = 2;
  SolverConfig cfg;
  cfg.dt = 0.05;
  cfg.t_end = 1.0;
  const Trajectory a = simulate(u0, u1, p, ModulusSpec::hoelder(0.5), cfg, g);
  const Trajectory b = simulate(u0, u1, p, ModulusSpec::hoelder(0.5), cfg, g);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].L2_u == b.rows[i].L2_u);
    CHECK(a.rows[i].energy == b.rows[i].energy);
  }
}

TEST_CASE("blow-up is recorded, not thrown") {
  GridSpec g{1, 32, 3.0};
  const EquationParams p = params(1.0, 0.0, 3.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 10.0;
  const Trajectory tr = simulate(Field(g.size(), 2.0), Field(g.size(), 0.0), p, ModulusSpec::lipschitz(), cfg, g);
  REQUIRE(tr.blowup.has_value());
  CHECK(tr.blowup->reason == BlowupReason::Escape);
  CHECK(tr.blowup->time < 10.0);
  CHECK(tr.threshold == doctest::Approx(2e6));
  CHECK(tr.rows.back().t < tr.blowup->time);
  for (const auto& r : tr.rows) CHECK(r.Linf_u <= tr.threshold);
}

TEST_CASE("step size and warnings") {
  GridSpec g{1, 32, 3.0};
  EquationParams p = params(1.0, 0.0, 3.0);
  SolverConfig cfg;
  cfg.dt = 0.3;
  cfg.t_end = 1.0;
  const Field z(g.size(), 0.0);
  const Trajectory tr = simulate(z, z, p, ModulusSpec::lipschitz(), cfg, g);
  CHECK(tr.dt == doctest::Approx(0.25));
  CHECK(tr.rows.size() == 5);
  CHECK(std::isinf(tr.threshold));
  // n = 3 > 2r puts the run outside the Sobolev window
  p.n = 3;
  p.r = 0.5;
  GridSpec g3{3, 8, 3.0};
  const Field z3(g3.size(), 0.0);
  const Trajectory t3 = simulate(z3, z3, p, ModulusSpec::lipschitz(), cfg, g3);
  CHECK_FALSE(t3.warnings.empty());
  auto mentions_critical = [](const Trajectory& t) {
    for (const auto& w : t.warnings)
      if (w.find("critical exponent") != std::string::npos) return true;
    return false;
  };
  CHECK_FALSE(mentions_critical(tr));
  CHECK(mentions_critical(simulate(z, z, params(1.0, 0.0, 4.0), ModulusSpec::lipschitz(), cfg, g)));
  cfg.blowup_threshold = 0.5;
  CHECK_THROWS_AS(simulate(Field(g.size(), 1.0), z, params(1.0, 0.0, 3.0), ModulusSpec::lipschitz(), cfg, g),
                  ParameterError);
}
