#include "sigmadamp/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "sigmadamp/errors.hpp"
#include "sigmadamp/params.hpp"

namespace sigmadamp {

namespace {

// FFTW planning is not thread-safe; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

// Double-root limits: K0 = (1 - lambda t) e^{lambda t}, K1 = t e^{lambda t}.
Multipliers double_root(double t, double lambda, double a, double b) {
  const double e = std::exp(lambda * t);
  Multipliers m;
  m.K0 = (1.0 - lambda * t) * e;
  m.K1 = t * e;
  m.dK0 = -b * m.K1;
  m.dK1 = m.K0 - a * m.K1;
  return m;
}

// int_0^dt e^{lambda s} ds and int_0^dt s e^{lambda s} ds for real lambda.
double exp_moment0(double lambda, double dt) {
  const double z = lambda * dt;
  if (z == 0.0) return dt;
  return dt * std::expm1(z) / z;
}

double exp_moment1(double lambda, double dt) {
  const double z = lambda * dt;
  if (std::fabs(z) < 0.5) {
    double term = 1.0, sum = 0.5;
    for (int k = 1; k < 40; ++k) {
      term *= z / k;
      const double add = term / (k + 2);
      sum += add;
      if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return dt * dt * sum;
  }
  return (std::exp(z) * (z - 1.0) + 1.0) / (lambda * lambda);
}

}  // namespace

double symbol_power(double xi2, double s) {
  if (s == 0.0) return 1.0;
  if (xi2 <= 0.0) return 0.0;
  return std::exp(0.5 * s * std::log(xi2));
}

std::pair<std::complex<double>, std::complex<double>> characteristic_roots(double xi_mag, double sigma, double delta) {
  if (!(xi_mag >= 0.0)) throw DomainError("frequency magnitude must be nonnegative");
  const double xi2 = xi_mag * xi_mag;
  const double a = symbol_power(xi2, 2.0 * delta);
  const double b = symbol_power(xi2, 2.0 * sigma);
  const double mean = -0.5 * a;
  const double disc = 0.25 * a * a - b;
  if (disc >= 0.0) {
    const double h = std::sqrt(disc);
    const double minus = mean - h;
    const double plus = minus != 0.0 ? b / minus : mean + h;
    return {{plus, 0.0}, {minus, 0.0}};
  }
  const double w = std::sqrt(-disc);
  return {{mean, w}, {mean, -w}};
}

bool roots_degenerate(double a, double b) {
  const double disc = 0.25 * a * a - b;
  const double gap = 2.0 * std::sqrt(std::fabs(disc));
  const double scale = std::max(1.0, std::sqrt(b));  // |lambda_plus| <= sqrt(b) or a/2
  return gap < kDegenerateTolerance * std::max(scale, 0.5 * a);
}

Multipliers propagator_from_symbols(double t, double a, double b) {
  if (t == 0.0) return Multipliers{};
  const double mean = -0.5 * a;
  if (roots_degenerate(a, b)) return double_root(t, mean, a, b);

  const double disc = 0.25 * a * a - b;
  double K1 = 0.0, C = 0.0;
  if (disc > 0.0) {
    const double h = std::sqrt(disc);
    if (h * t < 0.5) {
      const double e = std::exp(mean * t);
      K1 = e * std::sinh(h * t) / h;
      C = e * std::cosh(h * t);
    } else {
      const double minus = mean - h;
      const double plus = b / minus;
      const double ep = std::exp(plus * t);
      const double em = std::exp(minus * t);
      K1 = -ep * std::expm1((minus - plus) * t) / (plus - minus);
      C = 0.5 * (ep + em);
    }
  } else {
    const double w = std::sqrt(-disc);
    const double e = std::exp(mean * t);
    K1 = e * std::sin(w * t) / w;
    C = e * std::cos(w * t);
  }
  Multipliers m;
  m.K1 = K1;
  m.K0 = C - mean * K1;
  m.dK0 = -b * K1;
  m.dK1 = m.K0 - a * K1;
  return m;
}

Multipliers propagator_multipliers(double t, double xi_mag, double sigma, double delta) {
  if (!(t >= 0.0)) throw DomainError("propagator time must be nonnegative");
  if (!(xi_mag >= 0.0)) throw DomainError("frequency magnitude must be nonnegative");
  const double xi2 = xi_mag * xi_mag;
  return propagator_from_symbols(t, symbol_power(xi2, 2.0 * delta), symbol_power(xi2, 2.0 * sigma));
}

std::pair<double, double> propagator_moments(double dt, double a, double b) {
  const double rho = std::max(a * dt, std::sqrt(b) * dt);
  if (rho <= 1.0) {
    // Taylor series of K1 in s: c0 = 0, c1 = 1, c_{k+2} = -(a (k+1) c_{k+1} + b c_k) / ((k+2)(k+1)),
    // carried as d_k = c_k dt^k.
    double dk = 0.0, dk1 = dt;
    double s1 = dk1 / 2.0, s2 = dk1 / 3.0;
    for (int k = 0; k < 80; ++k) {
      const double dk2 = -(a * dt * (k + 1) * dk1 + b * dt * dt * dk) / ((k + 2.0) * (k + 1.0));
      s1 += dk2 / (k + 3);
      s2 += dk2 / (k + 4);
      dk = dk1;
      dk1 = dk2;
      if (std::fabs(dk) + std::fabs(dk1) < 1e-18 * std::fabs(s1)) break;
    }
    return {dt * s1, dt * dt * s2};
  }
  const double disc = 0.25 * a * a - b;
  if (disc > 0.0 && 2.0 * std::sqrt(disc) * dt >= 0.5) {
    const double h = std::sqrt(disc);
    const double minus = -0.5 * a - h;
    const double plus = b / minus;
    const double gap = plus - minus;
    return {(exp_moment0(plus, dt) - exp_moment0(minus, dt)) / gap,
            (exp_moment1(plus, dt) - exp_moment1(minus, dt)) / gap};
  }
  // Integrating K1'' + a K1' + b K1 = 0 against 1 and s.
  const Multipliers m = propagator_from_symbols(dt, a, b);
  const double phi1 = (1.0 - m.K0) / b;
  const double phi2 = (m.K1 + a * phi1 - dt * m.K0) / b;
  return {phi1, phi2};
}

DuhamelWeights duhamel_weights(double dt, double a, double b) {
  const auto [phi1, phi2] = propagator_moments(dt, a, b);
  const Multipliers m = propagator_from_symbols(dt, a, b);
  DuhamelWeights w;
  w.Au = phi2 / dt;
  w.Bu = phi1 - phi2 / dt;
  w.Av = m.K1 - phi1 / dt;
  w.Bv = phi1 / dt;
  return w;
}

struct SpectralGrid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

SpectralGrid::SpectralGrid(const GridSpec& grid) : grid_(grid), plans_(std::make_unique<Plans>()) {
  grid_.validate();
  const int N = grid_.N;
  const int half = N / 2 + 1;
  std::size_t count = static_cast<std::size_t>(half);
  for (int d = 1; d < grid_.n; ++d) count *= static_cast<std::size_t>(N);
  xi2_.resize(count);
  weight_.resize(count);
  const double unit = grid_.wavenumber_unit();
  for (std::size_t i = 0; i < count; ++i) {
    const auto k = wavenumbers(i);
    double s = 0.0;
    for (int d = 0; d < grid_.n; ++d) s += static_cast<double>(k[d]) * k[d];
    xi2_[i] = s * unit * unit;
    const int last = static_cast<int>(i % static_cast<std::size_t>(half));
    weight_[i] = (last == 0 || last == N / 2) ? 1.0 : 2.0;
  }

  std::vector<int> dims(grid_.n, N);
  Field rbuf(grid_.size());
  Spectrum cbuf(count);
  std::lock_guard<std::mutex> lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->r2c = fftw_plan_dft_r2c(grid_.n, dims.data(), rbuf.data(), as_fftw(cbuf.data()), flags);
  plans_->c2r = fftw_plan_dft_c2r(grid_.n, dims.data(), as_fftw(cbuf.data()), rbuf.data(), flags);
  if (!plans_->r2c || !plans_->c2r) throw Error("FFT plan creation failed");
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plans_->r2c) fftw_destroy_plan(plans_->r2c);
  if (plans_->c2r) fftw_destroy_plan(plans_->c2r);
}

std::array<int, 3> SpectralGrid::wavenumbers(std::size_t index) const {
  const int N = grid_.N;
  const std::size_t half = static_cast<std::size_t>(N / 2 + 1);
  std::array<int, 3> k{0, 0, 0};
  k[grid_.n - 1] = static_cast<int>(index % half);
  index /= half;
  for (int d = grid_.n - 2; d >= 0; --d) {
    const int i = static_cast<int>(index % static_cast<std::size_t>(N));
    index /= static_cast<std::size_t>(N);
    k[d] = i < N / 2 ? i : i - N;
  }
  return k;
}

Spectrum SpectralGrid::forward(const Field& f) const {
  require_shape(f, grid_, "forward transform");
  Field in = f;
  Spectrum out(xi2_.size());
  fftw_execute_dft_r2c(plans_->r2c, in.data(), as_fftw(out.data()));
  return out;
}

Field SpectralGrid::inverse(const Spectrum& s) const {
  if (s.size() != xi2_.size()) throw ShapeError("inverse transform: spectrum size does not match grid");
  Spectrum in = s;
  Field out(grid_.size());
  fftw_execute_dft_c2r(plans_->c2r, as_fftw(in.data()), out.data());
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (double& v : out) v *= scale;
  return out;
}

std::vector<bool> SpectralGrid::band_mask(double fraction) const {
  std::vector<bool> mask(xi2_.size(), true);
  if (fraction >= 1.0) return mask;
  const double limit = fraction * grid_.N / 2.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const auto k = wavenumbers(i);
    for (int d = 0; d < grid_.n; ++d)
      if (std::abs(k[d]) >= limit) mask[i] = false;
  }
  return mask;
}

void SpectralGrid::truncate(Spectrum& s, double fraction) const {
  if (fraction >= 1.0) return;
  const auto mask = band_mask(fraction);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!mask[i]) s[i] = 0.0;
}

double SpectralGrid::l2_squared(const Spectrum& s) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += weight_[i] * std::norm(s[i]);
  return sum * grid_.cell_volume() / static_cast<double>(grid_.size());
}

double SpectralGrid::inner(const Spectrum& a, const Spectrum& b) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += weight_[i] * (a[i] * std::conj(b[i])).real();
  return sum * grid_.cell_volume() / static_cast<double>(grid_.size());
}

MultiplierCache::MultiplierCache(const SpectralGrid& grid, double sigma, double delta)
    : sigma_(sigma), delta_(delta) {
  const auto& xi2 = grid.xi2();
  const std::size_t count = xi2.size();
  a_.resize(count);
  b_.resize(count);
  lambda_plus_.resize(count);
  lambda_minus_.resize(count);
  degenerate_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    a_[i] = symbol_power(xi2[i], 2.0 * delta);
    b_[i] = symbol_power(xi2[i], 2.0 * sigma);
    const auto roots = characteristic_roots(std::sqrt(xi2[i]), sigma, delta);
    lambda_plus_[i] = roots.first;
    lambda_minus_[i] = roots.second;
    degenerate_[i] = roots_degenerate(a_[i], b_[i]);
  }
}

std::vector<Multipliers> MultiplierCache::propagators(double t) const {
  std::vector<Multipliers> out(a_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = propagator_from_symbols(t, a_[i], b_[i]);
  return out;
}

std::vector<DuhamelWeights> MultiplierCache::duhamel(double dt) const {
  std::vector<DuhamelWeights> out(a_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = duhamel_weights(dt, a_[i], b_[i]);
  return out;
}

FieldState linear_evolve(const Field& u0, const Field& u1, double t, const MultiplierCache& cache,
                         const SpectralGrid& sgrid) {
  if (!(t >= 0.0)) throw DomainError("evolution time must be nonnegative");
  require_shape(u0, sgrid.grid(), "linear_evolve u0");
  require_shape(u1, sgrid.grid(), "linear_evolve u1");
  if (t == 0.0) return {u0, u1, 0.0};
  const Spectrum s0 = sgrid.forward(u0);
  const Spectrum s1 = sgrid.forward(u1);
  const auto mult = cache.propagators(t);
  Spectrum su(s0.size()), sv(s0.size());
  for (std::size_t i = 0; i < s0.size(); ++i) {
    su[i] = mult[i].K0 * s0[i] + mult[i].K1 * s1[i];
    sv[i] = mult[i].dK0 * s0[i] + mult[i].dK1 * s1[i];
  }
  return {sgrid.inverse(su), sgrid.inverse(sv), t};
}

FieldState linear_evolve(const Field& u0, const Field& u1, double t, const EquationParams& params, const GridSpec& grid) {
  const SpectralGrid sgrid(grid);
  const MultiplierCache cache(sgrid, params.sigma, params.delta);
  return linear_evolve(u0, u1, t, cache, sgrid);
}

Field fractional_derivative(const Field& f, double s, const SpectralGrid& sgrid) {
  if (!(s >= 0.0)) throw DomainError("derivative order must be nonnegative");
  if (s == 0.0) {
    require_shape(f, sgrid.grid(), "fractional_derivative");
    return f;
  }
  Spectrum sp = sgrid.forward(f);
  sgrid.apply(sp, [s](double xi2) { return symbol_power(xi2, s); });
  return sgrid.inverse(sp);
}

Field fractional_derivative(const Field& f, double s, const GridSpec& grid) {
  const SpectralGrid sgrid(grid);
  return fractional_derivative(f, s, sgrid);
}

}  // namespace sigmadamp
