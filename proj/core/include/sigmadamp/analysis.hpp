#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sigmadamp/solver.hpp"

namespace sigmadamp {

struct FitWindow {
  double t_min = 10.0;
  double t_max = 1e300;
};

struct DecayFit {
  double exponent = 0.0;       // slope of log(value) against log(1 + t)
  double log_amplitude = 0.0;  // intercept
  FitWindow window;
  double residual_rms = 0.0;
  int point_count = 0;
};

/// Least-squares power law value ~ C (1 + t)^exponent over the points with t
/// in [t_min, t_max]. Throws DataError on a nonpositive value inside the
/// window and InsufficientDataError with fewer than three points.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, FitWindow window);

struct Comparison {
  bool pass = false;
  double difference = 0.0;  // fit - predicted
  double margin = 0.0;      // tolerance - |difference|; negative on failure
};

Comparison compare_to_theory(const DecayFit& fit, double predicted, double tolerance);

/// Time after which mass starting within `data_radius` of the origin is expected
/// to reach the torus boundary under the diffusive scaling |x| ~ t^{1/(2(sigma - delta))}:
/// ((L - data_radius) / 8)^{2(sigma - delta)}.
double torus_wrap_time(const GridSpec& grid, const EquationParams& params, double data_radius);

/// [10, min(t_end, wrap time)].
FitWindow default_fit_window(double t_end, double wrap_time);

/// Column names of norms.csv, in order.
const std::vector<std::string>& norm_columns();
double norm_value(const NormRow& row, const std::string& column);
std::vector<std::pair<double, double>> norm_series(const std::vector<NormRow>& rows, const std::string& column);

struct EnergyAudit {
  bool nonincreasing = true;
  double max_relative_error = 0.0;  // per step |dE + 2 int D| / (2 int D)
  double worst_time = 0.0;
  int steps = 0;
};

/// Audits the energy column of a linear run: E must not increase between rows
/// and each increment must equal -2 int || |D|^delta u_t ||^2 dt, the integral
/// taken over the exact flow by composite Gauss-Legendre quadrature.
EnergyAudit audit_linear_energy(const Field& u0, const Field& u1, const EquationParams& params, const GridSpec& grid,
                                const std::vector<NormRow>& rows);

}  // namespace sigmadamp
