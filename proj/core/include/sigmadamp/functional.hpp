#pragma once

// Test-function functionals evaluated on computed trajectories: cutoffs
// phi_R, phi*_R on Q_R, the functionals I_R, J_R, Psi and the averaged
// functionals g, G.

#include <optional>
#include <string>
#include <vector>

#include "sigmadamp/modulus.hpp"
#include "sigmadamp/params.hpp"
#include "sigmadamp/solver.hpp"

namespace sigmadamp {

/// Quintic smoothstep cutoff: 1 on [0, 1/2], 0 on [1, inf), C^2 at both junctions.
double cutoff(double r);
/// d^k/dr^k of the cutoff, k = 0, 1, 2.
double cutoff_derivative(double r, int k);
/// 0 on [0, 1/2), cutoff(r) on [1/2, inf).
double cutoff_star(double r);

// phi_R(t, x) = cutoff((|x|^space_exponent + t) / R)^power.
struct TestFunctionSpec {
  Target target = Target::OnU;
  double sigma = 1.0;
  double delta = 0.0;
  int n = 1;
  double space_exponent = 2.0;  // 2(sigma - delta) for OnU, sigma for OnUt
  double power = 3.0;           // n + 2(sigma - delta) for OnU, 2(n + sigma) for OnUt

  static TestFunctionSpec for_params(const EquationParams& params);
  /// Radius of the spatial section of Q_R: R^{1/space_exponent}.
  double support_radius(double R) const;
  /// False when sigma or delta is not an integer (functional has no theorem behind it).
  bool theory_backed() const;
};

double phi_R(double t, double radius, double R, const TestFunctionSpec& spec);
double phi_star_R(double t, double radius, double R, const TestFunctionSpec& spec);

/// (t, |x|) in [0, R] x [0, R^{1/space_exponent}].
bool in_Q_R(double t, double radius, double R, const TestFunctionSpec& spec);
/// Support of phi*_R: t >= 0 and R/2 <= |x|^space_exponent + t <= R.
bool in_Q_star_R(double t, double radius, double R, const TestFunctionSpec& spec);

struct SupportCheck {
  long long samples = 0;
  long long phi_violations = 0;       // phi_R != 0 outside Q_R
  long long phi_star_violations = 0;  // phi*_R != 0 outside Q*_R
  bool pass() const { return phi_violations == 0 && phi_star_violations == 0; }
};

/// Samples both cutoffs on grid x times and counts nonzero values outside their boxes.
SupportCheck check_support(const GridSpec& grid, const std::vector<double>& times, double R,
                           const TestFunctionSpec& spec);

/// Measure of Q*_R over the grid: Riemann sum in x of the exact t-length of the section.
double support_measure_star(const GridSpec& grid, double R, const TestFunctionSpec& spec);

/// Psi(s) = s^p0 mu(s).
double psi(double s, double p0, const ModulusSpec& mu);
/// Solves Psi(s) = y by bisection to relative tolerance 1e-12. Throws
/// DomainError for y < 0 and RangeError when y exceeds Psi(s_max).
double psi_inverse(double y, double p0, const ModulusSpec& mu, double s_max = 1e150);

// The functionals read snapshots of u (OnU) or u_t (OnUt). Snapshots must be
// uniformly spaced from t = 0 and reach t = R; the ball of radius
// R^{1/space_exponent} must fit inside the torus. Otherwise CoverageError.
double compute_I_R(const Trajectory& traj, const ModulusSpec& mu, double p0, double R, const TestFunctionSpec& spec);
double compute_J_R(const Trajectory& traj, double R, const TestFunctionSpec& spec);
/// int u1(x) phi_R(0, x) dx; with u0 = 0 the weak form reads I_R = J_R - boundary_term.
double boundary_term(const Field& u1, const GridSpec& grid, double R, const TestFunctionSpec& spec);

struct GPoint {
  double R = 0.0;
  double g = 0.0;
  double G = 0.0;
};

/// g(r) = int Psi(|w|) phi*_r over space-time, G(R) = int_0^R g(r) dr / r,
/// accumulated with the trapezoid rule in log r (points_per_octave per
/// doubling, starting 2^-octaves_below below the smallest R).
std::vector<GPoint> compute_G(const Trajectory& traj, const ModulusSpec& mu, double p0, const TestFunctionSpec& spec,
                              const std::vector<double>& R_grid, int points_per_octave = 16, int octaves_below = 12);

struct ScanRow {
  double R = 0.0;
  double I_R = 0.0;
  double J_R = 0.0;
  double boundary = 0.0;
  double g = 0.0;
  double G = 0.0;
  double measure_star = 0.0;
  bool support_ok = false;
  bool ordered = false;     // 0 <= I_R < J_R
  bool G_bounded = false;   // G <= log(1 + e) I_R (1 + tolerance)
};

struct ScanReport {
  std::vector<ScanRow> rows;
  /// Smallest scanned R from which every larger scanned R satisfies 0 <= I_R < J_R.
  std::optional<double> R0;
  /// Log-log slope of |Q*_R| against R.
  double measure_exponent = 0.0;
  double expected_measure_exponent = 0.0;  // 1 + n / space_exponent
  bool exploratory = false;
  std::string verdict(const ScanRow& row) const;
};

/// Evaluates every functional at each R (in parallel up to `workers`).
ScanReport blowup_scan(const Trajectory& traj, const Field& u1, const ModulusSpec& mu, const EquationParams& params,
                       const std::vector<double>& R_grid, double quadrature_tolerance = 0.01, int workers = 1);

}  // namespace sigmadamp
