#include "sigmadamp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <boost/math/quadrature/gauss.hpp>

#include "sigmadamp/errors.hpp"
#include "sigmadamp/format.hpp"

namespace sigmadamp {

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, FitWindow window) {
  if (!(window.t_min < window.t_max)) throw DataError("fit window must satisfy t_min < t_max");
  std::vector<double> xs, ys;
  for (const auto& [t, v] : series) {
    if (t < window.t_min || t > window.t_max) continue;
    if (!(v > 0.0) || !std::isfinite(v))
      throw DataError("nonpositive or non-finite value " + format_number(v) + " at t = " + format_number(t));
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(v));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3)
    throw InsufficientDataError("fit window [" + format_number(window.t_min) + ", " + format_number(window.t_max) +
                                "] holds " + std::to_string(n) + " points, need 3");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("fit window holds a single distinct time");
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.log_amplitude = my - fit.exponent * mx;
  fit.window = window;
  fit.point_count = n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.log_amplitude + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

Comparison compare_to_theory(const DecayFit& fit, double predicted, double tolerance) {
  if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  Comparison c;
  c.difference = fit.exponent - predicted;
  c.margin = tolerance - std::fabs(c.difference);
  c.pass = c.margin >= 0.0;
  return c;
}

double torus_wrap_time(const GridSpec& grid, const EquationParams& params, double data_radius) {
  const double room = grid.L - data_radius;
  if (!(room > 0.0)) return 0.0;
  return std::pow(room / 8.0, 2.0 * (params.sigma - params.delta));
}

FitWindow default_fit_window(double t_end, double wrap_time) { return {10.0, std::min(t_end, wrap_time)}; }

const std::vector<std::string>& norm_columns() {
  static const std::vector<std::string> cols{"t", "L2_u", "Hr_u", "L2_ut", "Hrs_ut", "Linf_u", "energy"};
  return cols;
}

double norm_value(const NormRow& row, const std::string& column) {
  if (column == "t") return row.t;
  if (column == "L2_u") return row.L2_u;
  if (column == "Hr_u") return row.Hr_u;
  if (column == "L2_ut") return row.L2_ut;
  if (column == "Hrs_ut") return row.Hrs_ut;
  if (column == "Linf_u") return row.Linf_u;
  if (column == "energy") return row.energy;
  throw ParameterError("unknown norm column '" + column + "'");
}

std::vector<std::pair<double, double>> norm_series(const std::vector<NormRow>& rows, const std::string& column) {
  std::vector<std::pair<double, double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r.t, norm_value(r, column));
  return out;
}

EnergyAudit audit_linear_energy(const Field& u0, const Field& u1, const EquationParams& params, const GridSpec& grid,
                                const std::vector<NormRow>& rows) {
  const SpectralGrid sgrid(grid);
  const MultiplierCache cache(sgrid, params.sigma, params.delta);
  const Spectrum s0 = sgrid.forward(u0);
  const Spectrum s1 = sgrid.forward(u1);
  const auto& a = cache.damping();
  const auto& b = cache.elastic();
  const auto& w = sgrid.hermitian_weight();
  const double scale = grid.cell_volume() / static_cast<double>(grid.size());

  // Fastest oscillation among modes that carry data; panels resolve it.
  double total = 0.0;
  for (std::size_t i = 0; i < s0.size(); ++i) total += w[i] * (std::norm(s0[i]) + std::norm(s1[i]));
  double omega = 1.0;
  for (std::size_t i = 0; i < s0.size(); ++i)
    if (w[i] * (std::norm(s0[i]) + std::norm(s1[i])) > 1e-24 * total)
      omega = std::max({omega, std::sqrt(b[i]), a[i]});

  auto dissipation_at = [&](double t) {
    const auto mult = cache.propagators(t);
    double d = 0.0;
    for (std::size_t i = 0; i < s0.size(); ++i)
      d += w[i] * a[i] * std::norm(mult[i].dK0 * s0[i] + mult[i].dK1 * s1[i]);
    return d * scale;
  };
  auto dissipation_integral = [&](double t0, double t1) {
    const int panels = std::max(1, static_cast<int>(std::ceil((t1 - t0) * omega / 2.0)));
    const double h = (t1 - t0) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k)
      sum += boost::math::quadrature::gauss<double, 10>::integrate(dissipation_at, t0 + k * h, t0 + (k + 1) * h);
    return sum;
  };

  EnergyAudit audit;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double t0 = rows[k - 1].t, t1 = rows[k].t;
    if (!(t1 > t0)) throw DataError("audit times must be increasing");
    const double e0 = rows[k - 1].energy, e1 = rows[k].energy;
    const double change = e1 - e0;
    if (change > 1e-14 * std::max(e0, 1e-300)) audit.nonincreasing = false;
    const double loss = 2.0 * dissipation_integral(t0, t1);
    if (loss > 0.0) {
      const double rel = std::fabs(change + loss) / loss;
      if (rel > audit.max_relative_error) {
        audit.max_relative_error = rel;
        audit.worst_time = t1;
      }
    }
    ++audit.steps;
  }
  return audit;
}

}  // namespace sigmadamp
