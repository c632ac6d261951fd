#include "sigmadamp/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sigmadamp/errors.hpp"
#include "sigmadamp/format.hpp"

namespace sigmadamp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAxiomTolerance = 1e-10;

bool is_log_family(ModulusFamily f) {
  return f == ModulusFamily::LogLip || f == ModulusFamily::LogLogLip || f == ModulusFamily::LogPower;
}

// log^[m](x) with log^[1](x) = log x + 1, given lx = log x.
double iterated_log_from_log(double lx, int order) {
  double v = lx + 1.0;
  for (int k = 2; k <= order; ++k) v = std::log(v) + 1.0;
  return v;
}

double table_value(const std::vector<TablePoint>& table, double s) {
  // Implicit (0, 0) knot ahead of the first entry when it starts above 0.
  double s0 = 0.0, v0 = 0.0;
  if (table.front().s == 0.0) {
    if (s == 0.0) return table.front().value;
  } else if (s <= table.front().s) {
    const auto& p = table.front();
    return v0 + (p.value - v0) * (s - s0) / (p.s - s0);
  }
  if (s >= table.back().s) return table.back().value;
  auto it = std::upper_bound(table.begin(), table.end(), s, [](double x, const TablePoint& p) { return x < p.s; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return lo.value + (hi.value - lo.value) * (s - lo.s) / (hi.s - lo.s);
}

// Closed form on (0, formula_limit].
double closed_form(const ModulusSpec& mu, double s) {
  switch (mu.family()) {
    case ModulusFamily::Lipschitz:
      return s;
    case ModulusFamily::LogLip:
      return s * (-std::log(s) + 1.0);
    case ModulusFamily::LogLogLip: {
      const double lx = -std::log(s);
      return s * (lx + 1.0) * iterated_log_from_log(lx, mu.order());
    }
    case ModulusFamily::Hoelder:
      return std::pow(s, mu.alpha());
    case ModulusFamily::LogPower:
      return std::pow(-std::log(s) + 1.0, -mu.alpha());
    case ModulusFamily::Tabulated:
      return table_value(mu.table(), s);
  }
  return 0.0;
}

double closed_form_derivative(const ModulusSpec& mu, double s) {
  switch (mu.family()) {
    case ModulusFamily::Lipschitz:
      return 1.0;
    case ModulusFamily::LogLip:
      return -std::log(s);
    case ModulusFamily::LogLogLip: {
      // mu = s L1 Lm, L_k' = -1 / (s L1 ... L_{k-1}).
      const double lx = -std::log(s);
      double product = 1.0;  // L1 ... L_{m-1}
      double lk = lx + 1.0;
      const double l1 = lk;
      for (int k = 2; k <= mu.order(); ++k) {
        product *= lk;
        lk = std::log(lk) + 1.0;
      }
      return l1 * lk - lk - l1 / product;
    }
    case ModulusFamily::Hoelder:
      return mu.alpha() * std::pow(s, mu.alpha() - 1.0);
    case ModulusFamily::LogPower: {
      const double l1 = -std::log(s) + 1.0;
      return mu.alpha() * std::pow(l1, -mu.alpha() - 1.0) / s;
    }
    case ModulusFamily::Tabulated: {
      const double h = 1e-6 * std::max(s, 1e-300);
      const double lo = std::max(0.0, s - h);
      return (table_value(mu.table(), s + h) - table_value(mu.table(), lo)) / (s + h - lo);
    }
  }
  return 0.0;
}

double effective_limit(const ModulusSpec& mu) {
  const double formula = mu.formula_limit();
  return mu.extension() == ExtensionRule::ClampAtCap ? std::min(mu.domain_cap(), formula) : formula;
}

void check_alpha(double alpha, const char* what) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError(std::string(what) + " exponent must be positive");
}

// Log-spaced grid in (0, cap], plus table knots.
std::vector<double> sample_grid(const ModulusSpec& mu, int sample_count) {
  if (sample_count < 3) throw ParameterError("sample_count must be at least 3");
  const double cap = mu.domain_cap();
  std::vector<double> grid;
  grid.reserve(sample_count + mu.table().size());
  const double decades = 12.0;
  for (int i = 0; i < sample_count; ++i) {
    const double e = -decades + decades * static_cast<double>(i) / (sample_count - 1);
    grid.push_back(cap * std::pow(10.0, e));
  }
  grid.back() = cap;
  for (const auto& p : mu.table())
    if (p.s > 0.0 && p.s <= cap) grid.push_back(p.s);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

Verdict analytic_verdict(const ModulusSpec& mu) {
  switch (mu.family()) {
    case ModulusFamily::Lipschitz:
    case ModulusFamily::LogLip:
    case ModulusFamily::LogLogLip:
    case ModulusFamily::Hoelder:
      return Verdict::Convergent;
    case ModulusFamily::LogPower:
      return mu.alpha() > 1.0 ? Verdict::Convergent : Verdict::Divergent;
    case ModulusFamily::Tabulated:
      return Verdict::Inconclusive;
  }
  return Verdict::Inconclusive;
}

Verdict numeric_verdict(const ModulusSpec& mu, double c0, CriterionEvidence& ev) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double t0 = std::log(c0);
  auto integrand = [&mu](double t) { return evaluate_at_exp_minus(mu, t); };

  const int K = kCriterionDoublings;
  ev.partial_integrals.clear();
  ev.increments.clear();
  // A_1 over [t0, 2 t0], then increments over [t0 2^k, t0 2^{k+1}].
  double a = Quad::integrate(integrand, t0, 2.0 * t0, 15, 1e-13);
  ev.partial_integrals.push_back(a);
  for (int k = 1; k < K; ++k) {
    const double lo = std::ldexp(t0, k);
    const double d = Quad::integrate(integrand, lo, 2.0 * lo, 15, 1e-13);
    ev.increments.push_back(d);
    a += d;
    ev.partial_integrals.push_back(a);
  }

  const auto& inc = ev.increments;
  const std::size_t tail_begin = inc.size() - kCriterionTail;
  bool all_zero = true;
  bool nondecreasing = true;
  for (std::size_t i = tail_begin; i < inc.size(); ++i) {
    if (inc[i] > 0.0) all_zero = false;
    if (i > tail_begin && inc[i] < inc[i - 1] * (1.0 - 1e-12)) nondecreasing = false;
  }
  if (all_zero) {
    ev.tail_underflow = true;
    ev.fitted_ratio = 0.0;
    return Verdict::Convergent;
  }
  ev.tail_nondecreasing = nondecreasing;

  // Least-squares slope of log increment against k over the positive tail.
  std::vector<double> ks, logs;
  for (std::size_t i = tail_begin; i < inc.size(); ++i) {
    if (inc[i] > 0.0) {
      ks.push_back(static_cast<double>(i));
      logs.push_back(std::log(inc[i]));
    }
  }
  if (ks.size() >= 2) {
    const double km = std::accumulate(ks.begin(), ks.end(), 0.0) / ks.size();
    const double lm = std::accumulate(logs.begin(), logs.end(), 0.0) / logs.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      sxy += (ks[i] - km) * (logs[i] - lm);
      sxx += (ks[i] - km) * (ks[i] - km);
    }
    ev.fitted_ratio = std::exp(sxy / sxx);
  } else {
    // A single surviving increment followed by underflow.
    ev.fitted_ratio = 0.0;
    ev.tail_underflow = true;
    return Verdict::Convergent;
  }

  if (nondecreasing) return Verdict::Divergent;
  if (ev.fitted_ratio < kCriterionRatioThreshold) return Verdict::Convergent;
  return Verdict::Inconclusive;
}

}  // namespace

ModulusSpec ModulusSpec::lipschitz() {
  ModulusSpec m;
  m.family_ = ModulusFamily::Lipschitz;
  return m;
}

ModulusSpec ModulusSpec::log_lip() {
  ModulusSpec m;
  m.family_ = ModulusFamily::LogLip;
  return m;
}

ModulusSpec ModulusSpec::log_log_lip(int order) {
  if (order < 1) throw DomainError("log-log-lip order must be >= 1");
  ModulusSpec m;
  m.family_ = ModulusFamily::LogLogLip;
  m.order_ = order;
  m.cap_ = std::exp(-1.0);
  return m;
}

ModulusSpec ModulusSpec::hoelder(double alpha) {
  check_alpha(alpha, "hoelder");
  if (alpha >= 1.0) throw DomainError("hoelder exponent must lie in (0, 1)");
  ModulusSpec m;
  m.family_ = ModulusFamily::Hoelder;
  m.alpha_ = alpha;
  return m;
}

ModulusSpec ModulusSpec::log_power(double alpha) {
  check_alpha(alpha, "log-power");
  ModulusSpec m;
  m.family_ = ModulusFamily::LogPower;
  m.alpha_ = alpha;
  // Concave only where log(1/s) >= alpha.
  m.cap_ = std::min(1.0, std::exp(-alpha));
  return m;
}

ModulusSpec ModulusSpec::tabulated(std::vector<TablePoint> points, std::string source) {
  if (points.empty()) throw DomainError("tabulated modulus needs at least one point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].s) || !std::isfinite(points[i].value) || points[i].s < 0.0)
      throw DomainError("tabulated modulus: non-finite or negative entry");
    if (i > 0 && !(points[i].s > points[i - 1].s)) throw DomainError("tabulated modulus: abscissae must increase");
  }
  if (points.back().s <= 0.0) throw DomainError("tabulated modulus needs a positive abscissa");
  ModulusSpec m;
  m.family_ = ModulusFamily::Tabulated;
  m.table_ = std::move(points);
  m.source_ = std::move(source);
  m.cap_ = m.table_.back().s;
  return m;
}

ModulusSpec ModulusSpec::load_table(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open modulus table " + csv_path);
  std::vector<TablePoint> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find_first_of(",;\t ");
    if (comma == std::string::npos) continue;
    double s = 0.0, v = 0.0;
    const std::string_view lv(line);
    std::size_t rest = lv.find_first_not_of(",;\t ", comma);
    if (rest == std::string_view::npos) continue;
    if (!parse_number(lv.substr(0, comma), s) || !parse_number(lv.substr(rest), v)) {
      if (points.empty()) continue;  // header row
      throw IoError("malformed row in modulus table " + csv_path + ": " + line);
    }
    points.push_back({s, v});
  }
  return tabulated(std::move(points), csv_path);
}

ModulusSpec ModulusSpec::parse(std::string_view key) {
  const auto colon = key.find(':');
  const std::string_view name = key.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : key.substr(colon + 1);
  auto number = [&](const char* what) {
    double v = 0.0;
    if (arg.empty() || !parse_number(arg, v))
      throw ConfigError(std::string("modulus '") + std::string(key) + "': expected numeric " + what);
    return v;
  };
  if (name == "lipschitz") return lipschitz();
  if (name == "log-lip") return log_lip();
  if (name == "log-log-lip") {
    const double m = arg.empty() ? 1.0 : number("order");
    if (m != std::floor(m)) throw ConfigError("log-log-lip order must be an integer");
    return log_log_lip(static_cast<int>(m));
  }
  if (name == "hoelder") return hoelder(number("alpha"));
  if (name == "log-power") return log_power(number("alpha"));
  if (name == "tabulated") {
    if (arg.empty()) throw ConfigError("tabulated modulus needs a CSV path");
    return load_table(std::string(arg));
  }
  throw ConfigError("unknown modulus family '" + std::string(name) + "'");
}

ModulusSpec ModulusSpec::with_domain_cap(double cap) const {
  if (!(cap > 0.0) || !std::isfinite(cap)) throw DomainError("domain cap must be positive and finite");
  ModulusSpec m = *this;
  m.cap_ = cap;
  return m;
}

ModulusSpec ModulusSpec::with_extension(ExtensionRule rule) const {
  ModulusSpec m = *this;
  m.extension_ = rule;
  return m;
}

double ModulusSpec::formula_limit() const {
  if (family_ == ModulusFamily::Tabulated) return table_.back().s;
  return is_log_family(family_) ? 1.0 : kInf;
}

std::string ModulusSpec::key() const {
  switch (family_) {
    case ModulusFamily::Lipschitz:
      return "lipschitz";
    case ModulusFamily::LogLip:
      return "log-lip";
    case ModulusFamily::LogLogLip:
      return "log-log-lip:" + std::to_string(order_);
    case ModulusFamily::Hoelder:
      return "hoelder:" + format_number(alpha_);
    case ModulusFamily::LogPower:
      return "log-power:" + format_number(alpha_);
    case ModulusFamily::Tabulated:
      return "tabulated:" + source_;
  }
  return {};
}

std::string ModulusSpec::display_name() const {
  switch (family_) {
    case ModulusFamily::Lipschitz:
      return "mu(s) = s";
    case ModulusFamily::LogLip:
      return "mu(s) = s (log(1/s) + 1)";
    case ModulusFamily::LogLogLip:
      return "mu(s) = s (log(1/s) + 1) log^[" + std::to_string(order_) + "](1/s)";
    case ModulusFamily::Hoelder:
      return "mu(s) = s^" + format_number(alpha_);
    case ModulusFamily::LogPower:
      return "mu(s) = (log(1/s) + 1)^-" + format_number(alpha_);
    case ModulusFamily::Tabulated:
      return "tabulated (" + std::to_string(table_.size()) + " knots)";
  }
  return {};
}

double evaluate(const ModulusSpec& mu, double s) {
  if (!(s >= 0.0)) throw DomainError("modulus evaluated at negative or NaN argument");
  if (s == 0.0) return mu.family() == ModulusFamily::Tabulated ? table_value(mu.table(), 0.0) : 0.0;
  const double limit = effective_limit(mu);
  return closed_form(mu, std::min(s, limit));
}

double derivative(const ModulusSpec& mu, double s) {
  if (!(s >= 0.0)) throw DomainError("modulus derivative at negative or NaN argument");
  if (s == 0.0) {
    switch (mu.family()) {
      case ModulusFamily::Lipschitz:
        return 1.0;
      case ModulusFamily::Tabulated:
        return closed_form_derivative(mu, 0.0);
      default:
        return kInf;
    }
  }
  if (s > effective_limit(mu)) return 0.0;
  return closed_form_derivative(mu, s);
}

double evaluate_at_exp_minus(const ModulusSpec& mu, double t) {
  if (!(t >= 0.0)) throw DomainError("evaluate_at_exp_minus needs t >= 0");
  const double limit = effective_limit(mu);
  if (std::log(limit) < -t) return closed_form(mu, limit);
  switch (mu.family()) {
    case ModulusFamily::Lipschitz:
      return std::exp(-t);
    case ModulusFamily::LogLip:
      return std::exp(-t) * (t + 1.0);
    case ModulusFamily::LogLogLip:
      return std::exp(-t) * (t + 1.0) * iterated_log_from_log(t, mu.order());
    case ModulusFamily::Hoelder:
      return std::exp(-mu.alpha() * t);
    case ModulusFamily::LogPower:
      return std::pow(t + 1.0, -mu.alpha());
    case ModulusFamily::Tabulated:
      return table_value(mu.table(), std::exp(-t));
  }
  return 0.0;
}

AxiomReport check_modulus_axioms(const ModulusSpec& mu, int sample_count) {
  std::vector<double> grid = sample_grid(mu, sample_count);
  grid.insert(grid.begin(), 0.0);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = evaluate(mu, grid[i]);

  AxiomReport report;
  report.sample_count = static_cast<int>(grid.size());
  report.zero_at_origin = values.front() == 0.0;

  // Worst drop mu(s_i) - mu(s_j) over i < j, via the running maximum.
  std::size_t arg_max = 0;
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double drop = values[arg_max] - values[j];
    if (drop > report.worst_monotone_violation) {
      report.worst_monotone_violation = drop;
      report.worst_monotone_pair = {grid[arg_max], grid[j]};
    }
    if (values[j] > values[arg_max]) arg_max = j;
  }
  report.monotone = report.worst_monotone_violation <= kAxiomTolerance;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double mid = evaluate(mu, 0.5 * (grid[i] + grid[j]));
      const double gap = 0.5 * (values[i] + values[j]) - mid;
      if (gap > report.worst_concavity_violation) {
        report.worst_concavity_violation = gap;
        report.worst_concavity_pair = {grid[i], grid[j]};
      }
    }
  }
  report.concave = report.worst_concavity_violation <= kAxiomTolerance;
  return report;
}

DerivativeBound check_derivative_bound(const ModulusSpec& mu, int sample_count) {
  DerivativeBound bound;
  bound.supremum = -kInf;
  for (double s : sample_grid(mu, sample_count)) {
    const double value = evaluate(mu, s);
    if (value == 0.0) {
      bound.excluded.push_back(s);
      continue;
    }
    const double ratio = s * derivative(mu, s) / value;
    if (ratio > bound.supremum) {
      bound.supremum = ratio;
      bound.argmax = s;
    }
  }
  if (bound.supremum == -kInf) bound.supremum = 0.0;
  return bound;
}

CriterionVerdict classify_integral_criterion(const ModulusSpec& mu, double c0, CriterionMode mode) {
  if (!(c0 >= std::exp(1.0) * (1.0 - 1e-15))) throw DomainError("criterion constant c0 must be >= e");
  CriterionVerdict out;
  out.method = mode;
  if (mode != CriterionMode::Numeric) out.analytic = analytic_verdict(mu);
  if (mode != CriterionMode::Analytic) out.numeric = numeric_verdict(mu, c0, out.evidence);

  switch (mode) {
    case CriterionMode::Analytic:
      out.verdict = *out.analytic;
      break;
    case CriterionMode::Numeric:
      out.verdict = *out.numeric;
      break;
    case CriterionMode::Both:
      if (*out.analytic == Verdict::Inconclusive)
        out.verdict = *out.numeric;
      else
        out.verdict = *out.analytic == *out.numeric ? *out.analytic : Verdict::Inconclusive;
      break;
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Convergent:
      return "Convergent";
    case Verdict::Divergent:
      return "Divergent";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

std::string to_string(ModulusFamily f) {
  switch (f) {
    case ModulusFamily::Lipschitz:
      return "Lipschitz";
    case ModulusFamily::LogLip:
      return "LogLip";
    case ModulusFamily::LogLogLip:
      return "LogLogLip";
    case ModulusFamily::Hoelder:
      return "Hoelder";
    case ModulusFamily::LogPower:
      return "LogPower";
    case ModulusFamily::Tabulated:
      return "Tabulated";
  }
  return "?";
}

}  // namespace sigmadamp
