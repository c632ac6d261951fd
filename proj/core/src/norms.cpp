#include "sigmadamp/norms.hpp"

#include <cmath>
#include <limits>

#include "sigmadamp/errors.hpp"
#include "sigmadamp/format.hpp"

namespace sigmadamp {

double lebesgue_norm(const Field& f, double p, const GridSpec& grid) {
  require_shape(f, grid, "lebesgue_norm");
  if (!(p >= 1.0)) throw ParameterError("Lebesgue exponent must be >= 1, got " + format_number(p));
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::fabs(v));
    return m;
  }
  // scale by the max to avoid overflow for large p
  double m = 0.0;
  for (double v : f) m = std::max(m, std::fabs(v));
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  if (p == 2.0) {
    for (double v : f) sum += (v / m) * (v / m);
  } else {
    for (double v : f) sum += std::pow(std::fabs(v) / m, p);
  }
  return m * std::pow(sum * grid.cell_volume(), 1.0 / p);
}

double sobolev_norm(const Field& f, double s, const SpectralGrid& sgrid) {
  if (!(s >= 0.0)) throw ParameterError("Sobolev order must be >= 0");
  Spectrum sp = sgrid.forward(f);
  if (s != 0.0) sgrid.apply(sp, [s](double xi2) { return symbol_power(xi2, s); });
  return std::sqrt(sgrid.l2_squared(sp));
}

double sobolev_norm(const Field& f, double s, const GridSpec& grid) {
  const SpectralGrid sgrid(grid);
  return sobolev_norm(f, s, sgrid);
}

double data_norm(const Field& u0, const Field& u1, double m, double r, const GridSpec& grid) {
  if (!(m >= 1.0 && m < 2.0)) throw ParameterError("data norm needs m in [1, 2)");
  if (!(r >= 0.0)) throw ParameterError("data norm needs r >= 0");
  const SpectralGrid sgrid(grid);
  return lebesgue_norm(u0, m, grid) + lebesgue_norm(u0, 2.0, grid) + sobolev_norm(u0, r, sgrid) +
         lebesgue_norm(u1, m, grid) + lebesgue_norm(u1, 2.0, grid);
}

double gagliardo_nirenberg_theta(int n, double p, double p0, double p1, double s, double sigma_gn) {
  return (1.0 / p0 - 1.0 / p + s / n) / (1.0 / p0 - 1.0 / p1 + sigma_gn / n);
}

double check_gagliardo_nirenberg(const Field& f, const SpectralGrid& sgrid, double p, double p0, double p1, double s,
                                 double sigma_gn) {
  for (double q : {p, p0, p1})
    if (!(q > 1.0 && std::isfinite(q))) throw ParameterError("exponents must satisfy 1 < p, p0, p1 < inf");
  if (p != 2.0 || p1 != 2.0) throw ParameterError("only the Hilbert case p = p1 = 2 is supported");
  if (!(sigma_gn > 0.0)) throw ParameterError("sigma must be positive");
  if (!(s >= 0.0 && s < sigma_gn)) throw ParameterError("s must lie in [0, sigma)");
  const int n = sgrid.grid().n;
  const double theta = gagliardo_nirenberg_theta(n, p, p0, p1, s, sigma_gn);
  if (!(theta >= s / sigma_gn - 1e-14 && theta <= 1.0 + 1e-14))
    throw ParameterError("theta = " + format_number(theta) + " outside [s/sigma, 1]");
  const double num = sobolev_norm(f, s, sgrid);
  if (num == 0.0) return 0.0;
  const double den =
      std::pow(lebesgue_norm(f, p0, sgrid.grid()), 1.0 - theta) * std::pow(sobolev_norm(f, sigma_gn, sgrid), theta);
  return num / den;
}

double check_embedding(const Field& f, const SpectralGrid& sgrid, double s1, double s2) {
  const double half = 0.5 * sgrid.grid().n;
  if (!(s1 > 0.0 && s1 < half && half < s2))
    throw ParameterError("embedding check needs 0 < s1 < n/2 < s2 (s1 = " + format_number(s1) +
                         ", s2 = " + format_number(s2) + ")");
  const double sup = lebesgue_norm(f, std::numeric_limits<double>::infinity(), sgrid.grid());
  if (sup == 0.0) return 0.0;
  return sup / (sobolev_norm(f, s1, sgrid) + sobolev_norm(f, s2, sgrid));
}

double check_fractional_powers(const Field& f, const SpectralGrid& sgrid, double p, double s) {
  if (!(p > 1.0)) throw ParameterError("power must be > 1");
  const double half = 0.5 * sgrid.grid().n;
  if (!(s > half && s < p))
    throw ParameterError("fractional power check needs n/2 < s < p (s = " + format_number(s) + ")");
  const double den_h = sobolev_norm(f, s, sgrid);
  const double sup = lebesgue_norm(f, std::numeric_limits<double>::infinity(), sgrid.grid());
  const double den = den_h * std::pow(sup, p - 1.0);
  if (den == 0.0) return 0.0;
  Field F(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) F[i] = std::pow(std::fabs(f[i]), p);
  Spectrum sp = sgrid.forward(F);
  sgrid.truncate(sp, 2.0 / 3.0);
  sgrid.apply(sp, [s](double xi2) { return symbol_power(xi2, s); });
  return std::sqrt(sgrid.l2_squared(sp)) / den;
}

}  // namespace sigmadamp
