#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sigmadamp/errors.hpp"
#include "sigmadamp/norms.hpp"

using namespace sigmadamp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Field cosine(const GridSpec& g, double k, double amp = 1.0) {
  Field f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = amp * std::cos(k * g.coordinate(static_cast<int>(i)));
  return f;
}

}  // namespace

TEST_CASE("Lebesgue norms") {
  GridSpec g{1, 64, 1.0};
  CHECK(lebesgue_norm(Field(g.size(), 1.0), 2.0, g) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  for (double p : {1.0, 2.0, 3.5, kInf}) CHECK(lebesgue_norm(Field(g.size(), 0.0), p, g) == 0.0);
  CHECK_THROWS_AS(lebesgue_norm(Field(g.size(), 0.0), 0.5, g), ParameterError);

  GridSpec wide{1, 1024, 20.0};
  const Field gauss = sample_radial(wide, [](double r) { return std::exp(-r * r); });
  CHECK(std::fabs(lebesgue_norm(gauss, 1.0, wide) - std::sqrt(M_PI)) < 1e-8);
  CHECK(lebesgue_norm(gauss, kInf, wide) == 1.0);
}

TEST_CASE("Hoelder monotonicity on the torus") {
  GridSpec g{2, 32, 2.0};
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = oracle::random_band_limited(g, 3, rng);
    const double vol = g.volume();
    const double ps[] = {1.0, 1.5, 2.0, 4.0, kInf};
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        const double p = ps[i], q = ps[j];
        const double factor = std::pow(vol, 1.0 / p - (std::isinf(q) ? 0.0 : 1.0 / q));
        CHECK(lebesgue_norm(f, p, g) <= factor * lebesgue_norm(f, q, g) * (1 + 1e-12));
      }
  }
}

TEST_CASE("Sobolev norms") {
  GridSpec g{1, 64, M_PI};
  SpectralGrid sg(g);
  const Field c = cosine(g, 1.0);
  CHECK(sobolev_norm(c, 0.0, sg) == doctest::Approx(lebesgue_norm(c, 2.0, g)).epsilon(1e-12));
  CHECK(sobolev_norm(c, 1.0, sg) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));

  // Plancherel on random fields
  std::mt19937_64 rng(8);
  GridSpec g3{3, 16, 2.0};
  SpectralGrid sg3(g3);
  for (int i = 0; i < 10; ++i) {
    const Field f = oracle::random_band_limited(g3, 2, rng);
    CHECK(sobolev_norm(f, 0.0, sg3) == doctest::Approx(lebesgue_norm(f, 2.0, g3)).epsilon(1e-10));
  }

  // s = 2 against a second-difference Laplacian on a fine grid
  GridSpec fine{1, 4096, 4.0};
  SpectralGrid sgf(fine);
  const Field f = oracle::random_band_limited(fine, 6, rng);
  Field lap(f.size());
  const double h = fine.dx();
  for (int i = 0; i < fine.N; ++i) {
    const double l = f[(i + fine.N - 1) % fine.N], r = f[(i + 1) % fine.N];
    lap[i] = -(l - 2.0 * f[i] + r) / (h * h);
  }
  CHECK(sobolev_norm(f, 2.0, sgf) == doctest::Approx(lebesgue_norm(lap, 2.0, fine)).epsilon(1e-4));
}

TEST_CASE("data norm") {
  GridSpec g{1, 4096, M_PI};
  const Field zero(g.size(), 0.0);
  CHECK(data_norm(zero, zero, 1.0, 1.0, g) == 0.0);
  // |cos| has kinks, so the Riemann sum is only second order
  CHECK(data_norm(cosine(g, 1.0), zero, 1.0, 0.0, g) == doctest::Approx(4.0 + 2.0 * std::sqrt(M_PI)).epsilon(1e-6));

  // Gaussian pair: closed forms  ||e^{-x^2}||_{L^m} = (pi/m)^{1/(2m)},
  // || |D|^r e^{-x^2} ||^2 = 2^{r - 1/2} Gamma(r + 1/2)
  GridSpec wide{1, 8192, 100.0};
  const Field u0 = sample_radial(wide, [](double r) { return std::exp(-r * r); });
  const Field u1 = sample_radial(wide, [](double r) { return 0.5 * std::exp(-r * r); });
  const double m = 1.5, r = 0.75;
  const double lm = std::pow(M_PI / m, 1.0 / (2.0 * m));
  const double l2 = std::pow(M_PI / 2.0, 0.25);
  const double hr = std::sqrt(std::pow(2.0, r - 0.5) * std::tgamma(r + 0.5));
  CHECK(lebesgue_norm(u0, m, wide) == doctest::Approx(lm).epsilon(1e-12));
  // |xi|^{2r} is not smooth at 0, so the frequency sum converges algebraically
  CHECK(sobolev_norm(u0, r, wide) == doctest::Approx(hr).epsilon(1e-5));
  CHECK(data_norm(u0, u1, m, r, wide) == doctest::Approx(lm + l2 + hr + 0.5 * (lm + l2)).epsilon(1e-5));
}

TEST_CASE("Gagliardo-Nirenberg ratio") {
  GridSpec g{1, 128, 4.0};
  SpectralGrid sg(g);
  std::mt19937_64 rng(12);
  const Field f = oracle::random_band_limited(g, 8, rng);
  CHECK(check_gagliardo_nirenberg(f, sg, 2.0, 2.0, 2.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gagliardo_nirenberg_theta(1, 2, 2, 2, 0.5, 1.0) == doctest::Approx(0.5));
  const double ratio = check_gagliardo_nirenberg(f, sg, 2.0, 2.0, 2.0, 0.5, 1.0);
  CHECK(std::isfinite(ratio));
  CHECK(ratio <= 1.0 + 1e-12);  // Hilbert interpolation is an exact inequality with constant 1
  // s approaching sigma drives theta to 1 and the ratio to 1
  CHECK(check_gagliardo_nirenberg(f, sg, 2.0, 2.0, 2.0, 1.0 - 1e-9, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(check_gagliardo_nirenberg(f, sg, 3.0, 2.0, 2.0, 0.5, 1.0), ParameterError);
  CHECK_THROWS_AS(check_gagliardo_nirenberg(f, sg, 2.0, 2.0, 2.0, 1.5, 1.0), ParameterError);
  CHECK_THROWS_AS(check_gagliardo_nirenberg(f, sg, 2.0, 4.0, 2.0, 0.9, 1.0), ParameterError);
}

TEST_CASE("embedding ratio") {
  GridSpec g{1, 64, M_PI};
  SpectralGrid sg(g);
  CHECK(check_embedding(Field(g.size(), 0.0), sg, 0.25, 1.0) == 0.0);
  CHECK(check_embedding(cosine(g, 1.0), sg, 0.25, 1.0) == doctest::Approx(1.0 / (2.0 * std::sqrt(M_PI))).epsilon(1e-12));
  CHECK_THROWS_AS(check_embedding(cosine(g, 1.0), sg, 0.6, 1.0), ParameterError);
}

TEST_CASE("fractional powers ratio") {
  GridSpec g{1, 256, M_PI};
  SpectralGrid sg(g);
  CHECK(check_fractional_powers(Field(g.size(), 0.3), sg, 3.0, 1.0) == 0.0);
  const double small = check_fractional_powers(cosine(g, 1.0, 1e-3), sg, 3.0, 1.0);
  CHECK(small > 0.0);
  CHECK(small < 10.0);
  // fine-grid oracle
  GridSpec fine{1, 2048, M_PI};
  SpectralGrid sgf(fine);
  CHECK(check_fractional_powers(cosine(fine, 1.0, 1e-3), sgf, 3.0, 1.0) == doctest::Approx(small).epsilon(1e-2));
  CHECK_THROWS_AS(check_fractional_powers(cosine(g, 1.0), sg, 3.0, 0.4), ParameterError);
}
