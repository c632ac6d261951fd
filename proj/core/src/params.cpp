#include "sigmadamp/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sigmadamp/errors.hpp"
#include "sigmadamp/format.hpp"

namespace sigmadamp {

namespace {

bool near(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

Exact gain(const EquationParams& p) { return Exact(1.0) / Exact(p.m) - Exact(Rational(1, 2)); }

// Whether some integer lies strictly between lo and hi.
bool integer_between(double lo, double hi) { return std::floor(lo) + 1.0 < hi; }

std::string fmt(double x) { return format_number(x); }

}  // namespace

void EquationParams::validate() const {
  if (!(sigma >= 1.0)) throw AdmissibilityError("sigma must be >= 1, got " + fmt(sigma));
  if (!(delta >= 0.0) || delta > sigma / 2.0 + 1e-15)
    throw AdmissibilityError("delta must lie in [0, sigma/2], got " + fmt(delta));
  if (!(m >= 1.0 && m < 2.0)) throw AdmissibilityError("m must lie in [1, 2), got " + fmt(m));
  if (n < 1) throw AdmissibilityError("n must be a positive integer");
  if (!(p > 1.0)) throw AdmissibilityError("p must be > 1, got " + fmt(p));
  if (!(r >= 0.0)) throw AdmissibilityError("r must be >= 0, got " + fmt(r));
}

double EquationParams::m0() const {
  const double inv = 1.0 / m - 0.5;
  return inv <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv;
}

bool EquationParams::visco_elastic() const { return near(delta, sigma / 2.0); }

Exact critical_exponent(const EquationParams& params) {
  const Exact sigma(params.sigma), m(params.m), n(static_cast<double>(params.n));
  if (params.target == Target::OnUt) return Exact(1.0) + m * sigma / n;
  const double denom = params.n - 2.0 * params.m * params.delta;
  if (!(denom > 0.0))
    throw AdmissibilityError("critical exponent for the nonlinearity on u needs n > 2 m delta (n = " +
                             std::to_string(params.n) + ", 2 m delta = " + fmt(2.0 * params.m * params.delta) + ")");
  return Exact(1.0) + Exact(2.0) * m * sigma / (n - Exact(2.0) * m * Exact(params.delta));
}

std::string to_string(RateSource s) {
  switch (s) {
    case RateSource::SobolevSmallData: return "sobolev-small-data";
    case RateSource::EnergySmallData: return "energy-small-data";
    case RateSource::DerivativeNonlinearity: return "derivative-nonlinearity";
    case RateSource::ViscoElasticLinear: return "visco-elastic-linear";
    case RateSource::StructuralLinearCoarse: return "structural-linear-coarse";
    case RateSource::StructuralLinearSharp: return "structural-linear-sharp";
    case RateSource::FrictionalLinear: return "frictional-linear";
  }
  return "unknown";
}

const WindowCheck& AdmissibilityReport::for_source(RateSource s) const {
  switch (s) {
    case RateSource::EnergySmallData: return energy;
    case RateSource::DerivativeNonlinearity: return derivative;
    default: return sobolev;
  }
}

AdmissibilityReport check_admissibility(const EquationParams& p) {
  AdmissibilityReport rep;
  const double n = p.n;
  const double m0 = p.m0();
  const bool ve = p.visco_elastic();

  {
    WindowCheck& w = rep.sobolev;
    w.name = "sobolev-small-data";
    if (!(p.r > 0.0 && p.r <= p.sigma + 1e-15)) {
      w.violated = "0 < r <= sigma (r = " + fmt(p.r) + ", sigma = " + fmt(p.sigma) + ")";
    } else {
      w.applicable = true;
      const double lo = ve ? p.m * p.sigma : 2.0 * m0 * p.delta;
      const std::string lo_name = ve ? "m sigma" : "2 m0 delta";
      const double hi = 2.0 * p.r;
      w.empty_window = !integer_between(lo, hi);
      if (!(lo < n))
        w.violated = lo_name + " < n (" + fmt(lo) + " < " + std::to_string(p.n) + ")";
      else if (!(n < hi))
        w.violated = "n < 2r (" + std::to_string(p.n) + " < " + fmt(hi) + ")";
      else
        w.satisfied = true;
    }
  }
  {
    WindowCheck& w = rep.energy;
    w.name = "energy-small-data";
    if (!ve) {
      w.violated = "delta = sigma/2 (delta = " + fmt(p.delta) + ", sigma/2 = " + fmt(p.sigma / 2.0) + ")";
    } else {
      w.applicable = true;
      const double lo = p.m * p.sigma, hi = 2.0 * p.sigma;
      w.empty_window = !integer_between(lo, hi);
      if (!(lo < n))
        w.violated = "m sigma < n (" + fmt(lo) + " < " + std::to_string(p.n) + ")";
      else if (!(n < hi))
        w.violated = "n < 2 sigma (" + std::to_string(p.n) + " < " + fmt(hi) + ")";
      else
        w.satisfied = true;
    }
  }
  {
    WindowCheck& w = rep.derivative;
    w.name = "derivative-nonlinearity";
    if (!ve) {
      w.violated = "delta = sigma/2 (delta = " + fmt(p.delta) + ", sigma/2 = " + fmt(p.sigma / 2.0) + ")";
    } else {
      w.applicable = true;
      const double lo = p.sigma + n / 2.0;
      const double hi = 2.0 * p.sigma - n / m0;
      w.empty_window = !(lo < hi);
      if (!(p.r > lo))
        w.violated = "r > sigma + n/2 (" + fmt(p.r) + " > " + fmt(lo) + ")";
      else if (!(p.r <= hi + 1e-12))
        w.violated = "r <= 2 sigma - n/m0 (" + fmt(p.r) + " <= " + fmt(hi) + ")";
      else
        w.satisfied = true;
      if (w.empty_window && !w.violated.empty()) w.violated += "; window sigma + n/2 < r <= 2 sigma - n/m0 is empty";
    }
  }
  return rep;
}

LinearRate predict_linear_rate(const EquationParams& p, double a, int j, DataClass data_class) {
  if (!(p.sigma >= 1.0)) throw AdmissibilityError("sigma must be >= 1");
  if (!(p.delta >= 0.0) || p.delta > p.sigma / 2.0 + 1e-15) throw AdmissibilityError("delta must lie in [0, sigma/2]");
  if (!(p.m >= 1.0 && p.m <= 2.0)) throw AdmissibilityError("m must lie in [1, 2]");
  if (!(a >= 0.0)) throw AdmissibilityError("derivative order a must be >= 0");
  if (j != 0 && j != 1) throw AdmissibilityError("time derivative order j must be 0 or 1");

  const Exact sigma(p.sigma), delta(p.delta), n(static_cast<double>(p.n)), ea(a), ej(static_cast<double>(j));
  const Exact g = data_class == DataClass::L2Only ? Exact(0.0) : gain(p);
  LinearRate out;

  if (p.visco_elastic()) {
    out.source = RateSource::ViscoElasticLinear;
    out.u0_part = -(n / sigma) * g - ea / sigma - ej;
    out.u1_part = Exact(1.0) + out.u0_part;
    return out;
  }
  if (p.delta == 0.0) {
    out.source = RateSource::FrictionalLinear;
    const Exact k = Exact(2.0) * sigma;
    out.u0_part = -(n / k) * g - ea / k - ej;
    out.u1_part = out.u0_part;
    return out;
  }
  const Exact k = Exact(2.0) * (sigma - delta);
  if (p.n > 2.0 * p.m0() * p.delta) {
    out.source = RateSource::StructuralLinearSharp;
    out.u0_part = -(n / k) * g - ea / k - ej;
    out.u1_part = -(n / k) * g - (ea - Exact(2.0) * delta) / k - ej;
  } else {
    out.source = RateSource::StructuralLinearCoarse;
    out.u0_part = -(n / k) * g - (ea + Exact(2.0) * ej * delta) / k;
    out.u1_part = Exact(1.0) + out.u0_part;
  }
  return out;
}

RatePrediction theorem_rate_formula(const EquationParams& p, RateSource source) {
  const Exact sigma(p.sigma), delta(p.delta), n(static_cast<double>(p.n)), r(p.r);
  const Exact g = gain(p);
  RatePrediction out;
  out.source = source;
  switch (source) {
    case RateSource::SobolevSmallData: {
      if (!(p.delta < p.sigma)) throw AdmissibilityError("sobolev rates need delta < sigma");
      const Exact k = Exact(2.0) * (sigma - delta);
      out.u_L2 = -(n / k) * g + delta / (sigma - delta);
      out.Dr_u_L2 = -(n / k) * g - (r - Exact(2.0) * delta) / k;
      return out;
    }
    case RateSource::EnergySmallData:
      out.u_L2 = -(n / sigma) * g + Exact(1.0);
      out.Dr_u_L2 = -(n / sigma) * g;
      out.ut_L2 = out.Dr_u_L2;
      return out;
    case RateSource::DerivativeNonlinearity:
      out.u_L2 = -(n / sigma) * g + Exact(1.0);
      out.ut_L2 = -(n / sigma) * g;
      out.Dr_u_L2 = -(n / sigma) * g - (r - sigma) / sigma;
      out.Dr_minus_sigma_ut_L2 = out.Dr_u_L2;
      return out;
    default:
      throw ParameterError("theorem rates are only defined for the three global existence results, not " +
                           to_string(source));
  }
}

RatePrediction predict_theorem_rates(const EquationParams& p) {
  p.validate();
  RateSource source = RateSource::SobolevSmallData;
  if (p.target == Target::OnUt)
    source = RateSource::DerivativeNonlinearity;
  else if (p.visco_elastic())
    source = RateSource::EnergySmallData;
  const WindowCheck& w = check_admissibility(p).for_source(source);
  if (!w.satisfied) throw AdmissibilityError(w.name + ": violated " + w.violated);
  return theorem_rate_formula(p, source);
}

std::vector<RateTableRow> rate_table(const EquationParams& p) {
  std::vector<RateTableRow> rows;
  try {
    rows.push_back({"critical_exponent", critical_exponent(p), "critical"});
  } catch (const AdmissibilityError&) {
  }
  std::vector<double> orders{0.0};
  if (p.r > 0.0) orders.push_back(p.r);
  for (double a : orders) {
    for (int j : {0, 1}) {
      const LinearRate lr = predict_linear_rate(p, a, j, DataClass::LmCapL2);
      std::ostringstream q;
      q << "linear a=" << format_number(a) << " j=" << j;
      rows.push_back({q.str() + " u0", lr.u0_part, to_string(lr.source)});
      rows.push_back({q.str() + " u1", lr.u1_part, to_string(lr.source)});
    }
  }
  try {
    const RatePrediction rp = predict_theorem_rates(p);
    const std::string src = to_string(rp.source);
    rows.push_back({"u L2", rp.u_L2, src});
    rows.push_back({rp.source == RateSource::EnergySmallData ? "(|D|^sigma u, u_t) L2" : "|D|^r u L2", rp.Dr_u_L2, src});
    if (rp.ut_L2) rows.push_back({"u_t L2", *rp.ut_L2, src});
    if (rp.Dr_minus_sigma_ut_L2) rows.push_back({"|D|^(r-sigma) u_t L2", *rp.Dr_minus_sigma_ut_L2, src});
  } catch (const AdmissibilityError&) {
  }
  return rows;
}

}  // namespace sigmadamp
