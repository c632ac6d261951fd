#include "sigmadamp/functional.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <future>

#include "sigmadamp/errors.hpp"
#include "sigmadamp/format.hpp"

namespace sigmadamp {

namespace {

bool is_integer(double v) { return std::fabs(v - std::round(v)) < 1e-12; }

// Scaled argument (|x|^k + t) / R shared by both cutoffs and both supports.
double cutoff_argument(double t, double radius_pow, double R) { return (radius_pow + t) / R; }

// Uniform snapshot window [0, t_K] with t_K >= R.
struct Window {
  std::size_t count = 0;  // snapshots 0..count-1
  double h = 0.0;
  std::vector<double> weights;  // trapezoid weights in t
};

Window snapshot_window(const Trajectory& traj, double R, const TestFunctionSpec& spec) {
  if (!(R > 0.0)) throw ParameterError("R must be positive");
  const auto& snaps = traj.snapshots;
  if (snaps.size() < 2) throw CoverageError("functional needs stored field snapshots (at least two)");
  if (std::fabs(snaps.front().time) > 1e-12) throw CoverageError("snapshots must start at t = 0");
  const double h = snaps[1].time - snaps[0].time;
  for (std::size_t i = 1; i < snaps.size(); ++i)
    if (std::fabs(snaps[i].time - snaps[i - 1].time - h) > 1e-9 * h)
      throw CoverageError("snapshots must be uniformly spaced");
  if (snaps.back().time < R * (1.0 - 1e-12))
    throw CoverageError("snapshots end at t = " + format_number(snaps.back().time) + ", R = " + format_number(R) +
                        " needs coverage of [0, " + format_number(R) + "]");
  const double rad = spec.support_radius(R);
  if (!(rad < 0.5 * traj.grid.L))
    throw CoverageError("R = " + format_number(R) + " needs a spatial ball of radius " + format_number(rad) +
                        " below half the torus half-width " + format_number(traj.grid.L));
  Window w;
  w.h = h;
  w.count = 1;
  while (w.count < snaps.size() && snaps[w.count - 1].time < R * (1.0 - 1e-12)) ++w.count;
  w.weights.assign(w.count, h);
  w.weights.front() = 0.5 * h;
  w.weights.back() = 0.5 * h;
  return w;
}

std::vector<double> radius_powers(const GridSpec& grid, double k) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(grid.radius(i), k);
  return out;
}

const Field& argument(const FieldState& s, Target target) { return target == Target::OnU ? s.u : s.ut; }

// R * int_a^1 cutoff(s)^power ds = int_t^inf phi_R(tau, x) dtau.
double cutoff_tail_integral(double a, double power) {
  if (a >= 1.0) return 0.0;
  const double lo = std::max(a, 0.5);
  const double smooth =
      boost::math::quadrature::gauss<double, 30>::integrate([power](double s) { return std::pow(cutoff(s), power); }, lo, 1.0);
  return smooth + std::max(0.0, 0.5 - a);
}

}  // namespace

double cutoff(double r) { return cutoff_derivative(r, 0); }

double cutoff_derivative(double r, int k) {
  if (k < 0 || k > 2) throw ParameterError("cutoff derivative order must be 0, 1 or 2");
  if (r <= 0.5) return k == 0 ? 1.0 : 0.0;
  if (r >= 1.0) return 0.0;
  const double s = 2.0 * r - 1.0;
  switch (k) {
    case 0:
      return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
    case 1:
      return -2.0 * 30.0 * s * s * (1.0 - s) * (1.0 - s);
    default:
      return -4.0 * (60.0 * s - 180.0 * s * s + 120.0 * s * s * s);
  }
}

double cutoff_star(double r) { return r < 0.5 ? 0.0 : cutoff(r); }

TestFunctionSpec TestFunctionSpec::for_params(const EquationParams& params) {
  TestFunctionSpec s;
  s.target = params.target;
  s.sigma = params.sigma;
  s.delta = params.delta;
  s.n = params.n;
  if (params.target == Target::OnU) {
    s.space_exponent = 2.0 * (params.sigma - params.delta);
    s.power = params.n + 2.0 * (params.sigma - params.delta);
  } else {
    s.space_exponent = params.sigma;
    s.power = 2.0 * (params.n + params.sigma);
  }
  return s;
}

double TestFunctionSpec::support_radius(double R) const { return std::pow(R, 1.0 / space_exponent); }

bool TestFunctionSpec::theory_backed() const { return is_integer(sigma) && is_integer(delta); }

double phi_R(double t, double radius, double R, const TestFunctionSpec& spec) {
  if (t < 0.0) return 0.0;
  return std::pow(cutoff(cutoff_argument(t, std::pow(radius, spec.space_exponent), R)), spec.power);
}

double phi_star_R(double t, double radius, double R, const TestFunctionSpec& spec) {
  if (t < 0.0) return 0.0;
  return std::pow(cutoff_star(cutoff_argument(t, std::pow(radius, spec.space_exponent), R)), spec.power);
}

bool in_Q_R(double t, double radius, double R, const TestFunctionSpec& spec) {
  return t >= 0.0 && t <= R && std::pow(radius, spec.space_exponent) <= R;
}

bool in_Q_star_R(double t, double radius, double R, const TestFunctionSpec& spec) {
  if (t < 0.0) return false;
  const double a = cutoff_argument(t, std::pow(radius, spec.space_exponent), R);
  return a >= 0.5 && a <= 1.0;
}

SupportCheck check_support(const GridSpec& grid, const std::vector<double>& times, double R,
                           const TestFunctionSpec& spec) {
  SupportCheck c;
  for (double t : times)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid.radius(i);
      ++c.samples;
      if (!in_Q_R(t, r, R, spec) && phi_R(t, r, R, spec) != 0.0) ++c.phi_violations;
      if (!in_Q_star_R(t, r, R, spec) && phi_star_R(t, r, R, spec) != 0.0) ++c.phi_star_violations;
    }
  return c;
}

double support_measure_star(const GridSpec& grid, double R, const TestFunctionSpec& spec) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = std::pow(grid.radius(i), spec.space_exponent);
    if (x <= R) sum += R - std::max(0.5 * R, x);
  }
  return sum * grid.cell_volume();
}

double psi(double s, double p0, const ModulusSpec& mu) {
  if (!(s >= 0.0)) throw DomainError("psi needs s >= 0, got " + format_number(s));
  if (s == 0.0) return 0.0;
  return std::pow(s, p0) * evaluate(mu, s);
}

double psi_inverse(double y, double p0, const ModulusSpec& mu, double s_max) {
  if (!(y >= 0.0)) throw DomainError("psi_inverse needs y >= 0, got " + format_number(y));
  if (y == 0.0) return 0.0;
  if (psi(s_max, p0, mu) < y)
    throw RangeError("y = " + format_number(y) + " exceeds psi(" + format_number(s_max) + ")");
  double lo = 0.0, hi = 1.0;
  if (psi(hi, p0, mu) < y) {
    while (psi(hi, p0, mu) < y) {
      lo = hi;
      hi = std::min(2.0 * hi, s_max);
    }
  } else {
    lo = 0.5;
    while (lo > 0.0 && psi(lo, p0, mu) >= y) {
      hi = lo;
      lo *= 0.5;
    }
  }
  for (int it = 0; it < 400 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (psi(mid, p0, mu) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double compute_I_R(const Trajectory& traj, const ModulusSpec& mu, double p0, double R, const TestFunctionSpec& spec) {
  const Window w = snapshot_window(traj, R, spec);
  const auto rk = radius_powers(traj.grid, spec.space_exponent);
  double total = 0.0;
  for (std::size_t i = 0; i < w.count; ++i) {
    const FieldState& s = traj.snapshots[i];
    const Field& f = argument(s, spec.target);
    double slice = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double phi = std::pow(cutoff(cutoff_argument(s.time, rk[j], R)), spec.power);
      if (phi != 0.0) slice += psi(std::fabs(f[j]), p0, mu) * phi;
    }
    total += w.weights[i] * slice;
  }
  return total * traj.grid.cell_volume();
}

double compute_J_R(const Trajectory& traj, double R, const TestFunctionSpec& spec) {
  const Window w = snapshot_window(traj, R, spec);
  const GridSpec& grid = traj.grid;
  const SpectralGrid sgrid(grid);
  const auto rk = radius_powers(grid, spec.space_exponent);
  const std::size_t size = grid.size();
  const double h = w.h;

  auto phi_at = [&](double t) {
    Field out(size);
    for (std::size_t j = 0; j < size; ++j) out[j] = std::pow(cutoff(cutoff_argument(t, rk[j], R)), spec.power);
    return out;
  };
  auto laplacian_power = [&](const Field& f, double s) {
    if (s == 0.0) return f;
    Spectrum sp = sgrid.forward(f);
    sgrid.apply(sp, [s](double xi2) { return symbol_power(xi2, 2.0 * s); });
    return sgrid.inverse(sp);
  };
  // combine(c) = sum_k c[k] * phi(t + (k + offset) h)
  auto stencil = [&](double t, int offset, const std::vector<double>& c, double scale) {
    Field out(size, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const Field f = phi_at(t + (static_cast<int>(k) + offset) * h);
      for (std::size_t j = 0; j < size; ++j) out[j] += c[k] * f[j];
    }
    for (double& v : out) v *= scale;
    return out;
  };
  static const std::vector<double> d1_central{1.0, -8.0, 0.0, 8.0, -1.0};
  static const std::vector<double> d2_central{-1.0, 16.0, -30.0, 16.0, -1.0};
  static const std::vector<double> d1_forward{-25.0, 48.0, -36.0, 16.0, -3.0};
  static const std::vector<double> d2_forward{45.0, -154.0, 214.0, -156.0, 61.0, -10.0};

  double total = 0.0;
  for (std::size_t i = 0; i < w.count; ++i) {
    const FieldState& s = traj.snapshots[i];
    const double t = s.time;
    const bool closure = i < 2;
    const Field dphi = closure ? stencil(t, 0, d1_forward, 1.0 / (12.0 * h)) : stencil(t, -2, d1_central, 1.0 / (12.0 * h));
    Field test(size);
    if (spec.target == Target::OnU) {
      const Field d2phi =
          closure ? stencil(t, 0, d2_forward, 1.0 / (12.0 * h * h)) : stencil(t, -2, d2_central, 1.0 / (12.0 * h * h));
      const Field elastic = laplacian_power(phi_at(t), spec.sigma);
      const Field damping = laplacian_power(dphi, spec.delta);
      for (std::size_t j = 0; j < size; ++j) test[j] = d2phi[j] + elastic[j] - damping[j];
    } else {
      Field tail(size);
      for (std::size_t j = 0; j < size; ++j) tail[j] = R * cutoff_tail_integral(cutoff_argument(t, rk[j], R), spec.power);
      const Field elastic = laplacian_power(tail, spec.sigma);
      const Field damping = laplacian_power(phi_at(t), spec.delta);
      for (std::size_t j = 0; j < size; ++j) test[j] = -dphi[j] + elastic[j] + damping[j];
    }
    const Field& f = argument(s, spec.target);
    double slice = 0.0;
    for (std::size_t j = 0; j < size; ++j) slice += f[j] * test[j];
    total += w.weights[i] * slice;
  }
  return total * grid.cell_volume();
}

double boundary_term(const Field& u1, const GridSpec& grid, double R, const TestFunctionSpec& spec) {
  require_shape(u1, grid, "boundary term u1");
  double sum = 0.0;
  for (std::size_t j = 0; j < u1.size(); ++j) sum += u1[j] * phi_R(0.0, grid.radius(j), R, spec);
  return sum * grid.cell_volume();
}

std::vector<GPoint> compute_G(const Trajectory& traj, const ModulusSpec& mu, double p0, const TestFunctionSpec& spec,
                              const std::vector<double>& R_grid, int points_per_octave, int octaves_below) {
  if (R_grid.empty()) return {};
  for (std::size_t i = 0; i < R_grid.size(); ++i)
    if (!(R_grid[i] > 0.0) || (i > 0 && !(R_grid[i] > R_grid[i - 1])))
      throw ParameterError("R grid must be positive and increasing");
  if (points_per_octave < 1 || octaves_below < 0) throw ParameterError("invalid log grid for G");
  const double R_max = R_grid.back();
  const Window w = snapshot_window(traj, R_max, spec);
  const GridSpec& grid = traj.grid;
  const auto rk = radius_powers(grid, spec.space_exponent);

  std::vector<Field> psi_w(w.count);
  for (std::size_t i = 0; i < w.count; ++i) {
    const Field& f = argument(traj.snapshots[i], spec.target);
    psi_w[i].resize(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) psi_w[i][j] = psi(std::fabs(f[j]), p0, mu);
  }

  auto g_of = [&](double r) {
    double total = 0.0;
    for (std::size_t i = 0; i < w.count; ++i) {
      const double t = traj.snapshots[i].time;
      if (t > r) break;
      double slice = 0.0;
      for (std::size_t j = 0; j < rk.size(); ++j) {
        const double phi = std::pow(cutoff_star(cutoff_argument(t, rk[j], r)), spec.power);
        if (phi != 0.0) slice += psi_w[i][j] * phi;
      }
      total += w.weights[i] * slice;
    }
    return total * grid.cell_volume();
  };

  std::vector<double> rs;
  const double r_lo = R_grid.front() * std::ldexp(1.0, -octaves_below);
  const double step = std::log(2.0) / points_per_octave;
  for (double lr = std::log(r_lo); lr < std::log(R_max); lr += step) rs.push_back(std::exp(lr));
  rs.insert(rs.end(), R_grid.begin(), R_grid.end());
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end(), [](double a, double b) { return std::fabs(a - b) <= 1e-12 * b; }),
           rs.end());

  std::vector<GPoint> out;
  double G = 0.0;
  double prev_r = rs.front(), prev_g = g_of(rs.front());
  std::size_t next = 0;
  auto emit = [&](double r, double g) {
    while (next < R_grid.size() && std::fabs(R_grid[next] - r) <= 1e-12 * r) {
      out.push_back({R_grid[next], g, G});
      ++next;
    }
  };
  emit(prev_r, prev_g);
  for (std::size_t k = 1; k < rs.size(); ++k) {
    const double r = rs[k];
    const double g = g_of(r);
    G += 0.5 * (g + prev_g) * std::log(r / prev_r);
    emit(r, g);
    prev_r = r;
    prev_g = g;
  }
  return out;
}

std::string ScanReport::verdict(const ScanRow& row) const {
  const bool ok = row.support_ok && row.ordered && row.G_bounded;
  std::string v = ok ? "pass" : "fail";
  if (exploratory) v += " (exploratory)";
  return v;
}

ScanReport blowup_scan(const Trajectory& traj, const Field& u1, const ModulusSpec& mu, const EquationParams& params,
                       const std::vector<double>& R_grid, double quadrature_tolerance, int workers) {
  params.validate();
  const TestFunctionSpec spec = TestFunctionSpec::for_params(params);
  ScanReport report;
  report.exploratory = !spec.theory_backed();
  report.expected_measure_exponent = 1.0 + params.n / spec.space_exponent;
  const auto Gs = compute_G(traj, mu, params.p, spec, R_grid);

  auto evaluate_row = [&](std::size_t k) {
    const double R = R_grid[k];
    ScanRow row;
    row.R = R;
    row.I_R = compute_I_R(traj, mu, params.p, R, spec);
    row.J_R = compute_J_R(traj, R, spec);
    row.boundary = boundary_term(u1, traj.grid, R, spec);
    row.g = Gs[k].g;
    row.G = Gs[k].G;
    row.measure_star = support_measure_star(traj.grid, R, spec);
    std::vector<double> times;
    for (const auto& s : traj.snapshots)
      if (s.time <= R) times.push_back(s.time);
    row.support_ok = check_support(traj.grid, times, R, spec).pass();
    row.ordered = row.I_R >= 0.0 && row.I_R < row.J_R;
    row.G_bounded = row.G <= std::log(1.0 + std::exp(1.0)) * row.I_R * (1.0 + quadrature_tolerance);
    return row;
  };

  report.rows.resize(R_grid.size());
  const std::size_t budget = static_cast<std::size_t>(std::max(1, workers));
  for (std::size_t start = 0; start < R_grid.size(); start += budget) {
    std::vector<std::future<ScanRow>> batch;
    for (std::size_t k = start; k < std::min(R_grid.size(), start + budget); ++k)
      batch.push_back(std::async(budget > 1 ? std::launch::async : std::launch::deferred, evaluate_row, k));
    for (std::size_t k = 0; k < batch.size(); ++k) report.rows[start + k] = batch[k].get();
  }

  for (std::size_t k = report.rows.size(); k-- > 0;) {
    if (!report.rows[k].ordered) break;
    report.R0 = report.rows[k].R;
  }

  if (report.rows.size() >= 2) {
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(report.rows.size());
    for (const auto& r : report.rows) {
      mx += std::log(r.R);
      my += std::log(r.measure_star);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& r : report.rows) {
      sxx += (std::log(r.R) - mx) * (std::log(r.R) - mx);
      sxy += (std::log(r.R) - mx) * (std::log(r.measure_star) - my);
    }
    report.measure_exponent = sxy / sxx;
  }
  return report;
}

}  // namespace sigmadamp
