#include "sigmadamp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigmadamp/errors.hpp"
#include "sigmadamp/format.hpp"

namespace sigmadamp {

namespace {

double sup_norm(const Field& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::fabs(v));
  return m;
}

bool all_finite(const Field& f) {
  for (double v : f)
    if (!std::isfinite(v)) return false;
  return true;
}

// |v|^p mu(|v|) sample by sample.
Field pointwise_power(const Field& v, double p, const ModulusSpec& mu) {
  Field out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::fabs(v[i]);
    if (a < 1e-300) {
      out[i] = 0.0;
      continue;
    }
    try {
      out[i] = std::exp(p * std::log(a)) * evaluate(mu, a);
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " (grid sample " + std::to_string(i) + ", value " + format_number(v[i]) +
                        ")");
    }
  }
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  if (!(t_end > dt)) throw ParameterError("t_end must exceed dt");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) throw ParameterError("dealias fraction must lie in (0, 1]");
  if (snapshot_stride < 1) throw ParameterError("snapshot stride must be >= 1");
  if (blowup_threshold < 0.0) throw ParameterError("blow-up threshold must be positive (or 0 for the default)");
}

std::string to_string(BlowupReason r) { return r == BlowupReason::Escape ? "escape" : "not-finite"; }

Field nonlinearity(const Field& v, double p, const ModulusSpec& mu, const SpectralGrid& sgrid, double dealias_fraction) {
  if (!(p > 1.0)) throw ParameterError("nonlinearity exponent must be > 1");
  Field out = pointwise_power(v, p, mu);
  if (dealias_fraction >= 1.0) return out;
  Spectrum s = sgrid.forward(out);
  sgrid.truncate(s, dealias_fraction);
  return sgrid.inverse(s);
}

Field nonlinearity(const Field& v, double p, const ModulusSpec& mu, const GridSpec& grid, double dealias_fraction) {
  const SpectralGrid sgrid(grid);
  return nonlinearity(v, p, mu, sgrid, dealias_fraction);
}

std::optional<BlowupReason> blow_up_detect(const FieldState& state, Target target, double threshold) {
  if (!all_finite(state.u) || !all_finite(state.ut)) return BlowupReason::NotFinite;
  const Field& arg = target == Target::OnU ? state.u : state.ut;
  if (sup_norm(arg) > threshold) return BlowupReason::Escape;
  return std::nullopt;
}

NormRow measure(const FieldState& state, const EquationParams& params, const SpectralGrid& sgrid) {
  const Spectrum su = sgrid.forward(state.u);
  const Spectrum sv = sgrid.forward(state.ut);
  auto weighted = [&](const Spectrum& s, double order) {
    if (order == 0.0) return std::sqrt(sgrid.l2_squared(s));
    Spectrum t = s;
    sgrid.apply(t, [order](double xi2) { return symbol_power(xi2, order); });
    return std::sqrt(sgrid.l2_squared(t));
  };
  NormRow row;
  row.t = state.time;
  row.L2_u = weighted(su, 0.0);
  row.Hr_u = weighted(su, params.r);
  row.L2_ut = weighted(sv, 0.0);
  row.Hrs_ut = weighted(sv, std::max(params.r - params.sigma, 0.0));
  row.Linf_u = sup_norm(state.u);
  const double ds = weighted(su, params.sigma);
  row.energy = row.L2_ut * row.L2_ut + ds * ds;
  return row;
}

DuhamelStepper::DuhamelStepper(const SpectralGrid& sgrid, const EquationParams& params, const ModulusSpec& mu,
                               const SolverConfig& config)
    : sgrid_(sgrid), params_(params), mu_(mu), config_(config), dt_(config.dt) {
  const MultiplierCache cache(sgrid, params.sigma, params.delta);
  prop_ = cache.propagators(dt_);
  weights_ = cache.duhamel(dt_);
}

Spectrum DuhamelStepper::rhs(const Field& arg) const {
  Spectrum s(sgrid_.spectral_size(), 0.0);
  if (!config_.nonlinear) return s;
  s = sgrid_.forward(pointwise_power(arg, params_.p, mu_));
  sgrid_.truncate(s, config_.dealias_fraction);
  return s;
}

void DuhamelStepper::reset(const FieldState& state) {
  require_shape(state.u, sgrid_.grid(), "stepper state u");
  require_shape(state.ut, sgrid_.grid(), "stepper state u_t");
  state_ = state;
  u_hat_ = sgrid_.forward(state.u);
  v_hat_ = sgrid_.forward(state.ut);
  f_now_ = rhs(argument(state_));
}

const FieldState& DuhamelStepper::step() {
  const std::size_t count = u_hat_.size();
  Spectrum lin_u(count), lin_v(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Multipliers& m = prop_[i];
    lin_u[i] = m.K0 * u_hat_[i] + m.K1 * v_hat_[i];
    lin_v[i] = m.dK0 * u_hat_[i] + m.dK1 * v_hat_[i];
  }
  if (config_.nonlinear) {
    // predictor: f frozen at the step start
    Spectrum pred(count);
    const bool on_u = params_.target == Target::OnU;
    for (std::size_t i = 0; i < count; ++i) {
      const DuhamelWeights& w = weights_[i];
      pred[i] = on_u ? lin_u[i] + (w.Au + w.Bu) * f_now_[i] : lin_v[i] + (w.Av + w.Bv) * f_now_[i];
    }
    const Spectrum f_pred = rhs(sgrid_.inverse(pred));
    for (std::size_t i = 0; i < count; ++i) {
      const DuhamelWeights& w = weights_[i];
      lin_u[i] += w.Au * f_now_[i] + w.Bu * f_pred[i];
      lin_v[i] += w.Av * f_now_[i] + w.Bv * f_pred[i];
    }
  }
  u_hat_ = std::move(lin_u);
  v_hat_ = std::move(lin_v);
  state_.u = sgrid_.inverse(u_hat_);
  state_.ut = sgrid_.inverse(v_hat_);
  state_.time += dt_;
  if (config_.nonlinear && all_finite(argument(state_))) f_now_ = rhs(argument(state_));
  return state_;
}

FieldState duhamel_step(const FieldState& state, const EquationParams& params, const ModulusSpec& mu,
                        const SolverConfig& config, const GridSpec& grid) {
  const SpectralGrid sgrid(grid);
  DuhamelStepper stepper(sgrid, params, mu, config);
  stepper.reset(state);
  return stepper.step();
}

Trajectory simulate(const Field& u0, const Field& u1, const EquationParams& params, const ModulusSpec& mu,
                    const SolverConfig& config, const GridSpec& grid) {
  params.validate();
  config.validate();
  grid.validate();
  require_shape(u0, grid, "simulate u0");
  require_shape(u1, grid, "simulate u1");

  Trajectory traj;
  traj.grid = grid;
  const AdmissibilityReport adm = check_admissibility(params);
  if (config.nonlinear) {
    const RateSource source = params.target == Target::OnUt ? RateSource::DerivativeNonlinearity
                              : params.visco_elastic()      ? RateSource::EnergySmallData
                                                            : RateSource::SobolevSmallData;
    const WindowCheck& w = adm.for_source(source);
    if (!w.satisfied) traj.warnings.push_back("outside the " + w.name + " window: " + w.violated);
    if (params.target == Target::OnUt || params.n > 2.0 * params.m0() * params.delta) {
      const double crit = critical_exponent(params).value();
      if (std::fabs(params.p - crit) > 1e-12 * crit)
        traj.warnings.push_back("p = " + format_number(params.p) + " is off the critical exponent " +
                                format_number(crit) + "; decay predictions assume p at the critical exponent");
    }
  }

  const auto steps = std::max<long long>(1, std::llround(std::ceil(config.t_end / config.dt - 1e-9)));
  SolverConfig cfg = config;
  cfg.dt = config.t_end / static_cast<double>(steps);
  traj.dt = cfg.dt;

  const double amp0 = std::max(sup_norm(u0), sup_norm(u1));
  double threshold = config.blowup_threshold;
  if (threshold == 0.0) threshold = amp0 > 0.0 ? 1e6 * amp0 : std::numeric_limits<double>::infinity();
  const double arg0 = sup_norm(params.target == Target::OnU ? u0 : u1);
  if (!(threshold > arg0))
    throw ParameterError("blow-up threshold " + format_number(threshold) + " does not exceed the initial amplitude " +
                         format_number(arg0));
  traj.threshold = threshold;

  const SpectralGrid sgrid(grid);
  DuhamelStepper stepper(sgrid, params, mu, cfg);
  stepper.reset({u0, u1, 0.0});

  auto record = [&](const FieldState& s, double t) {
    NormRow row = measure(s, params, sgrid);
    row.t = t;
    traj.times.push_back(t);
    traj.rows.push_back(row);
    if (cfg.store_fields) traj.snapshots.push_back({s.u, s.ut, t});
  };
  record(stepper.state(), 0.0);

  for (long long k = 1; k <= steps; ++k) {
    const FieldState& s = stepper.step();
    const double t = static_cast<double>(k) * cfg.dt;
    if (const auto reason = blow_up_detect(s, params.target, threshold)) {
      BlowupEvent ev;
      ev.time = t;
      ev.reason = *reason;
      ev.amplitude = sup_norm(params.target == Target::OnU ? s.u : s.ut);
      traj.blowup = ev;
      break;
    }
    if (k % cfg.snapshot_stride == 0 || k == steps) record(s, t);
  }
  return traj;
}

}  // namespace sigmadamp
