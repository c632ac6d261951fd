#pragma once

// Equation parameters for u_tt + (-Delta)^sigma u + (-Delta)^delta u_t = f,
// admissibility windows, critical exponents and predicted (1+t)-exponents.

#include <optional>
#include <string>
#include <vector>

#include "sigmadamp/exact.hpp"

namespace sigmadamp {

// Which quantity the nonlinearity |.|^p mu(|.|) acts on.
enum class Target { OnU, OnUt };

struct EquationParams {
  double sigma = 1.0;
  double delta = 0.0;
  double m = 1.0;  // additional L^m regularity of the data, m in [1, 2)
  int n = 1;       // spatial dimension
  double p = 3.0;  // nonlinearity exponent
  Target target = Target::OnU;
  double r = 1.0;  // Sobolev regularity of u0

  /// Throws AdmissibilityError unless sigma >= 1, delta in [0, sigma/2],
  /// m in [1, 2), n >= 1, p > 1 and r >= 0.
  void validate() const;

  /// m0 with 1/m0 = 1/m - 1/2; +inf for m = 2.
  double m0() const;
  bool visco_elastic() const;  // delta == sigma/2
};

/// p1*(m, n) = 1 + 2 m sigma / (n - 2 m delta) for OnU, p2*(m, n) = 1 + m sigma / n
/// for OnUt. OnU requires n > 2 m delta.
Exact critical_exponent(const EquationParams& params);

// Where a predicted exponent comes from.
enum class RateSource {
  SobolevSmallData,       // global Sobolev solutions, nonlinearity on u
  EnergySmallData,        // energy solutions, delta = sigma/2
  DerivativeNonlinearity, // nonlinearity on u_t, delta = sigma/2
  ViscoElasticLinear,     // linear, delta = sigma/2
  StructuralLinearCoarse, // linear, delta in (0, sigma/2), any n
  StructuralLinearSharp,  // linear, delta in (0, sigma/2), n > 2 m0 delta
  FrictionalLinear,       // linear, delta = 0
};

std::string to_string(RateSource s);

struct WindowCheck {
  std::string name;
  bool applicable = false;   // structural preconditions (delta regime, r range)
  bool satisfied = false;    // applicable and every inequality holds
  bool empty_window = false; // the inequalities cannot hold for any n (resp. r)
  std::string violated;      // first violated inequality, human readable
};

struct AdmissibilityReport {
  WindowCheck sobolev;     // 0 < r <= sigma and 2 m0 delta < n < 2r, or m sigma < n < 2r at delta = sigma/2
  WindowCheck energy;      // delta = sigma/2 and m sigma < n < 2 sigma
  WindowCheck derivative;  // delta = sigma/2, sigma + n/2 < r <= 2 sigma - n/m0

  const WindowCheck& for_source(RateSource s) const;
};

AdmissibilityReport check_admissibility(const EquationParams& params);

enum class DataClass { LmCapL2, L2Only };

struct LinearRate {
  Exact u0_part;
  Exact u1_part;
  RateSource source = RateSource::FrictionalLinear;
};

/// (1+t)-exponents of || d_t^j |D|^a u(t) ||_{L^2} for the u0 and u1 parts of
/// the linear problem. delta = sigma/2 selects the visco-elastic estimate,
/// delta = 0 the frictional one, and intermediate delta the sharp structural
/// estimate when n > 2 m0 delta, otherwise the coarse one. m = 2 is accepted
/// and is the L^2-L^2 case.
LinearRate predict_linear_rate(const EquationParams& params, double a, int j, DataClass data_class);

struct RatePrediction {
  Exact u_L2;
  Exact Dr_u_L2;  // |D|^r u, or the energy pair (|D|^sigma u, u_t) for energy solutions
  std::optional<Exact> ut_L2;
  std::optional<Exact> Dr_minus_sigma_ut_L2;
  RateSource source = RateSource::SobolevSmallData;
};

/// Predicted exponents of the applicable global-existence result: nonlinearity
/// on u_t selects DerivativeNonlinearity; on u, delta = sigma/2 selects
/// EnergySmallData and delta < sigma/2 SobolevSmallData. Throws
/// AdmissibilityError naming the failed inequality.
RatePrediction predict_theorem_rates(const EquationParams& params);

/// The same exponent formulas for an explicitly chosen result, without the
/// admissibility gate (for experiments that probe outside the windows).
RatePrediction theorem_rate_formula(const EquationParams& params, RateSource source);

struct RateTableRow {
  std::string quantity;
  Exact exponent;
  std::string source;
};

/// Every predicted exponent for a parameter set: critical exponent, linear
/// u0/u1 exponents for a in {0, r} and j in {0, 1}, and the theorem rates when
/// admissible.
std::vector<RateTableRow> rate_table(const EquationParams& params);

}  // namespace sigmadamp
