#include "sigmadamp/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sigmadamp/errors.hpp"

namespace sigmadamp {

void GridSpec::validate() const {
  if (n < 1 || n > 3) throw ShapeError("grid dimension must be 1, 2 or 3, got " + std::to_string(n));
  if (N < 4 || (N & (N - 1)) != 0) throw ShapeError("points per axis must be a power of two >= 4, got " + std::to_string(N));
  if (!(L > 0.0) || !std::isfinite(L)) throw ShapeError("half-length must be positive and finite");
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int d = 0; d < n; ++d) s *= static_cast<std::size_t>(N);
  return s;
}

double GridSpec::cell_volume() const { return std::pow(dx(), n); }

double GridSpec::volume() const { return std::pow(2.0 * L, n); }

double GridSpec::wavenumber_unit() const { return std::numbers::pi / L; }

std::array<int, 3> GridSpec::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = n - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % static_cast<std::size_t>(N));
    flat /= static_cast<std::size_t>(N);
  }
  return idx;
}

double GridSpec::radius(std::size_t flat) const {
  const auto idx = unflatten(flat);
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) {
    const double x = coordinate(idx[d]);
    r2 += x * x;
  }
  return std::sqrt(r2);
}

void require_shape(const Field& f, const GridSpec& g, const char* what) {
  if (f.size() != g.size())
    throw ShapeError(std::string(what) + ": field has " + std::to_string(f.size()) + " samples, grid expects " +
                     std::to_string(g.size()));
}

}  // namespace sigmadamp
