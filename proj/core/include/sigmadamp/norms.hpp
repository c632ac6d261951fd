#pragma once

#include "sigmadamp/grid.hpp"
#include "sigmadamp/spectral.hpp"

namespace sigmadamp {

/// (sum |u_i|^p dx^n)^{1/p}; p = +inf gives max |u_i|. Requires p >= 1.
double lebesgue_norm(const Field& f, double p, const GridSpec& grid);

/// Homogeneous || |D|^s f ||_{L^2}, computed on the spectrum.
double sobolev_norm(const Field& f, double s, const SpectralGrid& sgrid);
double sobolev_norm(const Field& f, double s, const GridSpec& grid);

/// ||u0||_{L^m} + ||u0||_{L^2} + ||u0||_{H^r dot} + ||u1||_{L^m} + ||u1||_{L^2}.
double data_norm(const Field& u0, const Field& u1, double m, double r, const GridSpec& grid);

/// Interpolation exponent (1/p0 - 1/p + s/n) / (1/p0 - 1/p1 + sigma/n).
double gagliardo_nirenberg_theta(int n, double p, double p0, double p1, double s, double sigma_gn);

/// ||u||_{H^s dot} / (||u||_{L^p0}^{1-theta} ||u||_{H^sigma dot}^theta) in the
/// Hilbert case p = p1 = 2. Throws ParameterError naming the violated constraint.
double check_gagliardo_nirenberg(const Field& f, const SpectralGrid& sgrid, double p, double p0, double p1, double s,
                                 double sigma_gn);

/// ||u||_inf / (||u||_{H^s1 dot} + ||u||_{H^s2 dot}) for 0 < s1 < n/2 < s2; 0 for the zero field.
double check_embedding(const Field& f, const SpectralGrid& sgrid, double s1, double s2);

/// || |u|^p ||_{H^s dot} / (||u||_{H^s dot} ||u||_inf^{p-1}) for s in (n/2, p), with
/// |u|^p truncated by the 2/3 rule; 0 when the denominator vanishes.
double check_fractional_powers(const Field& f, const SpectralGrid& sgrid, double p, double s);

}  // namespace sigmadamp
