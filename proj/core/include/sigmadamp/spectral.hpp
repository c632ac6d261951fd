#pragma once

// Fourier-side solution of u_tt + (-Delta)^sigma u + (-Delta)^delta u_t = 0 on
// the torus: characteristic roots, propagator multipliers and transforms.

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sigmadamp/grid.hpp"

namespace sigmadamp {

struct EquationParams;

using Spectrum = std::vector<std::complex<double>>;

/// |xi|^s from |xi|^2, with |xi|^0 = 1 everywhere (including xi = 0) and
/// 0^s = 0 for s > 0.
double symbol_power(double xi2, double s);

/// Roots (lambda_plus, lambda_minus) of lambda^2 + |xi|^{2 delta} lambda + |xi|^{2 sigma} = 0,
/// lambda_plus having the larger real part (ties: larger imaginary part).
std::pair<std::complex<double>, std::complex<double>> characteristic_roots(double xi_mag, double sigma, double delta);

// Values at time t of the per-mode solutions with data (1, 0) -> K0 and
// (0, 1) -> K1, and their time derivatives. Real because the symbols are real.
struct Multipliers {
  double K0 = 1.0;
  double K1 = 0.0;
  double dK0 = 0.0;
  double dK1 = 1.0;
};

/// Multipliers for damping symbol a = |xi|^{2 delta} and elastic symbol b = |xi|^{2 sigma}.
Multipliers propagator_from_symbols(double t, double a, double b);
Multipliers propagator_multipliers(double t, double xi_mag, double sigma, double delta);

/// Near-coalescence test used to switch to the double-root formulas.
bool roots_degenerate(double a, double b);
constexpr double kDegenerateTolerance = 1e-8;

// Weights of the exponential trapezoid rule for one step of length dt:
//   u_hat  += Au * f_n + Bu * f_{n+1},   ut_hat += Av * f_n + Bv * f_{n+1},
// exact for f linear in time.
struct DuhamelWeights {
  double Au = 0.0, Bu = 0.0, Av = 0.0, Bv = 0.0;
};

/// The moments  int_0^dt K1(s) ds  and  int_0^dt s K1(s) ds.
std::pair<double, double> propagator_moments(double dt, double a, double b);
DuhamelWeights duhamel_weights(double dt, double a, double b);

// Real-to-complex transforms on a GridSpec. Plans are created once per
// instance; transforms on distinct arrays may run concurrently.
class SpectralGrid {
 public:
  explicit SpectralGrid(const GridSpec& grid);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  const GridSpec& grid() const { return grid_; }
  std::size_t spectral_size() const { return xi2_.size(); }

  Spectrum forward(const Field& f) const;
  /// Inverse transform including the 1/N^n normalisation.
  Field inverse(const Spectrum& s) const;

  const std::vector<double>& xi2() const { return xi2_; }
  /// Multiplicity of each stored mode in the full (Hermitian) spectrum: 1 or 2.
  const std::vector<double>& hermitian_weight() const { return weight_; }
  /// Integer wavenumbers of mode `index` (trailing entries 0).
  std::array<int, 3> wavenumbers(std::size_t index) const;

  /// Mask keeping modes with |k_i| < fraction * N/2 on every axis; fraction >= 1 keeps all.
  std::vector<bool> band_mask(double fraction) const;
  void truncate(Spectrum& s, double fraction) const;

  /// Integral over the torus of |f|^2 computed from its spectrum.
  double l2_squared(const Spectrum& s) const;
  /// Integral over the torus of f * g from spectra.
  double inner(const Spectrum& a, const Spectrum& b) const;

  /// Multiplies each mode by symbol(|xi|^2).
  template <class F>
  void apply(Spectrum& s, F&& symbol) const {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= symbol(xi2_[i]);
  }

 private:
  struct Plans;
  GridSpec grid_;
  std::vector<double> xi2_;
  std::vector<double> weight_;
  std::unique_ptr<Plans> plans_;
};

struct FieldState {
  Field u;
  Field ut;
  double time = 0.0;
};

// Symbols, roots and masks of one equation on one grid.
class MultiplierCache {
 public:
  MultiplierCache(const SpectralGrid& grid, double sigma, double delta);

  double sigma() const { return sigma_; }
  double delta() const { return delta_; }
  const std::vector<double>& damping() const { return a_; }  // |xi|^{2 delta}
  const std::vector<double>& elastic() const { return b_; }  // |xi|^{2 sigma}
  const std::vector<std::complex<double>>& lambda_plus() const { return lambda_plus_; }
  const std::vector<std::complex<double>>& lambda_minus() const { return lambda_minus_; }
  const std::vector<bool>& degenerate_mask() const { return degenerate_; }

  std::vector<Multipliers> propagators(double t) const;
  std::vector<DuhamelWeights> duhamel(double dt) const;

 private:
  double sigma_, delta_;
  std::vector<double> a_, b_;
  std::vector<std::complex<double>> lambda_plus_, lambda_minus_;
  std::vector<bool> degenerate_;
};

/// Exact solution (u, u_t) at time t of the linear problem.
FieldState linear_evolve(const Field& u0, const Field& u1, double t, const EquationParams& params, const GridSpec& grid);
FieldState linear_evolve(const Field& u0, const Field& u1, double t, const MultiplierCache& cache,
                         const SpectralGrid& sgrid);

/// |D|^s f (multiplication of the spectrum by |xi|^s).
Field fractional_derivative(const Field& f, double s, const GridSpec& grid);
Field fractional_derivative(const Field& f, double s, const SpectralGrid& sgrid);

// Flat little-endian binary with a short text header naming n, N, L and time.
void write_field_binary(const std::string& path, const Field& f, const GridSpec& grid, double time);
Field read_field_binary(const std::string& path, GridSpec& grid, double& time);
/// Two columns x,value; only for n = 1.
void write_field_csv(const std::string& path, const Field& f, const GridSpec& grid);
/// Reads a field from binary or (n = 1) from a CSV whose last column holds values.
Field load_field(const std::string& path, const GridSpec& grid);

}  // namespace sigmadamp
