#pragma once

// Moduli of continuity: closed-form families, sampled axiom checks and the
// tail-integral criterion that separates the global-existence regime from the
// blow-up regime.

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sigmadamp {

enum class ModulusFamily { Lipschitz, LogLip, LogLogLip, Hoelder, LogPower, Tabulated };

enum class ExtensionRule {
  FormulaEverywhere,  // closed form up to its natural limit, clamped beyond it
  ClampAtCap,         // mu(s) = mu(cap) for s > cap
};

struct TablePoint {
  double s;
  double value;
};

/// Immutable description of a modulus mu on [0, cap].
///
/// Log-based families use log(1/s) + 1 and are defined by formula on (0, 1];
/// the default cap is the largest interval on which the family is
/// nondecreasing and concave (e^{-1} for log-log-lip, min(1, e^{-alpha}) for
/// log-power, 1 otherwise). Tabulated moduli interpolate linearly between
/// knots, with an implicit (0, 0) knot when the table starts at s > 0.
class ModulusSpec {
 public:
  static ModulusSpec lipschitz();
  static ModulusSpec log_lip();
  static ModulusSpec log_log_lip(int order);
  static ModulusSpec hoelder(double alpha);
  static ModulusSpec log_power(double alpha);
  static ModulusSpec tabulated(std::vector<TablePoint> points, std::string source = {});

  /// Parses "lipschitz", "log-lip", "log-log-lip:m", "hoelder:alpha",
  /// "log-power:alpha" or "tabulated:<csv path>".
  static ModulusSpec parse(std::string_view key);
  static ModulusSpec load_table(const std::string& csv_path);

  [[nodiscard]] ModulusSpec with_domain_cap(double cap) const;
  [[nodiscard]] ModulusSpec with_extension(ExtensionRule rule) const;

  ModulusFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  int order() const { return order_; }
  double domain_cap() const { return cap_; }
  ExtensionRule extension() const { return extension_; }
  const std::vector<TablePoint>& table() const { return table_; }
  bool has_closed_form() const { return family_ != ModulusFamily::Tabulated; }

  /// Upper end of the interval on which the closed form is used under
  /// FormulaEverywhere (1 for log families, +inf for power families, last
  /// knot for tables).
  double formula_limit() const;

  /// Canonical config key; parse(key()) reproduces this modulus.
  std::string key() const;
  std::string display_name() const;

 private:
  ModulusSpec() = default;

  ModulusFamily family_ = ModulusFamily::Lipschitz;
  double alpha_ = 1.0;
  int order_ = 1;
  double cap_ = 1.0;
  ExtensionRule extension_ = ExtensionRule::FormulaEverywhere;
  std::vector<TablePoint> table_;
  std::string source_;
};

/// mu(s); throws DomainError for s < 0 or NaN.
double evaluate(const ModulusSpec& mu, double s);

/// mu'(s). Returns +infinity when the derivative is unbounded at s = 0
/// (Hoelder, log families); see is_infinite_derivative.
double derivative(const ModulusSpec& mu, double s);

inline bool is_infinite_derivative(double value) { return value == std::numeric_limits<double>::infinity(); }

/// mu(e^{-t}) for t >= 0 without underflowing the argument.
double evaluate_at_exp_minus(const ModulusSpec& mu, double t);

struct AxiomReport {
  bool zero_at_origin = false;
  bool monotone = false;
  bool concave = false;
  double worst_monotone_violation = 0.0;
  std::pair<double, double> worst_monotone_pair{0.0, 0.0};
  double worst_concavity_violation = 0.0;
  std::pair<double, double> worst_concavity_pair{0.0, 0.0};
  int sample_count = 0;

  bool all_pass() const { return zero_at_origin && monotone && concave; }
};

/// Samples mu on a log-spaced grid in (0, cap] (plus 0 and any table knots)
/// and checks mu(0) = 0, monotonicity and midpoint concavity with tolerance
/// 1e-10. sample_count must be at least 3.
AxiomReport check_modulus_axioms(const ModulusSpec& mu, int sample_count);

struct DerivativeBound {
  double supremum = 0.0;
  double argmax = 0.0;
  std::vector<double> excluded;  // grid points with mu(s) = 0, s > 0
};

/// sup of s mu'(s) / mu(s) over the log-spaced sample grid in (0, cap].
DerivativeBound check_derivative_bound(const ModulusSpec& mu, int sample_count);

enum class Verdict { Convergent, Divergent, Inconclusive };
enum class CriterionMode { Analytic, Numeric, Both };

struct CriterionEvidence {
  std::vector<double> partial_integrals;  // A_k, k = 1..K
  std::vector<double> increments;         // A_{k+1} - A_k
  double fitted_ratio = 0.0;
  bool tail_nondecreasing = false;
  bool tail_underflow = false;
};

struct CriterionVerdict {
  Verdict verdict = Verdict::Inconclusive;
  CriterionMode method = CriterionMode::Analytic;
  std::optional<Verdict> analytic;
  std::optional<Verdict> numeric;
  CriterionEvidence evidence;
};

inline constexpr int kCriterionDoublings = 20;
inline constexpr double kCriterionRatioThreshold = 0.95;
inline constexpr int kCriterionTail = 5;

/// Decides whether the tail integral of mu(1/s)/s from c0 to infinity
/// converges. Numeric mode substitutes t = log s and integrates over
/// doublings [t0 2^k, t0 2^{k+1}] of t0 = log c0; geometric increments
/// (ratio < 0.95) mean convergence, non-decreasing increments over the last
/// five doublings mean divergence. Both mode returns Inconclusive when the
/// two routes disagree. Requires c0 >= e.
CriterionVerdict classify_integral_criterion(const ModulusSpec& mu, double c0, CriterionMode mode);

std::string to_string(Verdict v);
std::string to_string(ModulusFamily f);

}  // namespace sigmadamp
