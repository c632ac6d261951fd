#pragma once

// The standard experiments behind the command-line subcommands. Each takes a
// validated RunConfig, writes its artifacts when given a directory and
// returns the numbers it reported.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sigmadamp/analysis.hpp"
#include "sigmadamp/config.hpp"
#include "sigmadamp/functional.hpp"
#include "sigmadamp/modulus.hpp"

namespace sigmadamp {

void report_modulus(const ModulusSpec& mu, double c0, CriterionMode mode, std::ostream& out);
void report_rates(const EquationParams& params, std::ostream& out);

/// Linear-problem exponent of a norms.csv column: the slower of the u0 and u1
/// parts among the data that are not identically zero.
double predicted_linear_exponent(const EquationParams& params, const std::string& column, bool u0_zero, bool u1_zero);

/// Fit window from the settings, defaulting to [10, min(t_end, wrap time)].
FitWindow resolve_fit_window(const RunConfig& cfg, const Field& u0, const Field& u1);

struct LinearDecayResult {
  Trajectory trajectory;
  DecayFit fit;
  double predicted = 0.0;
  Comparison comparison;
  EnergyAudit audit;
};

/// Linear run (nonlinearity off), fit of cfg.fit.column and energy audit.
/// Writes config.json, norms.csv, manifest.json and fit.csv when dir is set.
LinearDecayResult run_linear_decay(const RunConfig& cfg, const std::string& dir);

struct SemilinearResult {
  Trajectory trajectory;
  Field u0, u1;
  std::optional<DecayFit> fit;  // when the run completes and the window holds >= 3 rows
};

SemilinearResult run_semilinear(const RunConfig& cfg, const std::string& dir);

/// Functional sweep over a stored run; writes functional.csv into run_dir.
ScanReport run_blowup_scan(const std::string& run_dir, std::vector<double> R_values, int workers);
void write_functional_csv(const std::string& path, const ScanReport& report);

// Sum of random-phase cosines on modes 1..kmax per axis (no mean), amplitude
// ~ N(0, 1) / (1 + |k|^2). Sampling on any grid of the same half-width gives the
// same continuum function.
struct RandomField {
  std::vector<std::array<int, 3>> modes;
  std::vector<double> amplitude;
  std::vector<double> phase;
  Field sample(const GridSpec& grid) const;
};
RandomField random_band_limited(int n, int kmax, std::mt19937_64& rng);

struct InequalityReport {
  static constexpr std::array<const char*, 3> names{"gagliardo-nirenberg", "embedding", "fractional-powers"};
  int fields = 0;
  std::array<double, 3> max_coarse{0.0, 0.0, 0.0};
  std::array<double, 3> max_fine{0.0, 0.0, 0.0};
  bool all_finite = true;
  double growth(int k) const { return max_fine[k] / max_coarse[k]; }
};

/// Evaluates the three inequality ratios on `count` seeded random fields on
/// `grid` and on the grid refined twice per axis.
InequalityReport inequality_suite(const GridSpec& grid, int kmax, int count, std::uint64_t seed);

struct SweepMember {
  std::string dir;
  double amplitude = 1.0;
  double p = 0.0;
  double delta = 0.0;
  std::string verdict;
  double blowup_time = 0.0;
  double final_t = 0.0;
  double final_L2_u = 0.0;
  double max_Linf_u = 0.0;
};

/// Cartesian product of cfg.sweep lists, one run directory each, at most
/// `workers` concurrent runs; writes summary.csv into dir.
std::vector<SweepMember> run_sweep(const RunConfig& cfg, const std::string& dir, int workers);

struct FitRecord {
  DecayFit fit;
  std::optional<double> predicted;
  std::optional<Comparison> comparison;
};

/// Fits `column` of a norms.csv file and appends one row to ledger_path (if set).
FitRecord run_fit(const std::string& norms_path, const std::string& column, FitWindow window,
                  std::optional<double> predicted, double tolerance, const std::string& ledger_path);

}  // namespace sigmadamp
