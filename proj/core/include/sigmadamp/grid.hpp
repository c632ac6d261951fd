#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace sigmadamp {

using Field = std::vector<double>;

// Periodic box [-L, L)^n sampled with N points per axis, row-major with the
// last axis fastest.
struct GridSpec {
  int n = 1;
  int N = 256;
  double L = 10.0;

  /// Throws ShapeError unless n in 1..3, N a power of two >= 4 and L > 0.
  void validate() const;

  std::size_t size() const;  // N^n
  double dx() const { return 2.0 * L / N; }
  double cell_volume() const;
  double volume() const;     // (2L)^n
  double wavenumber_unit() const;  // pi / L
  double coordinate(int index) const { return -L + index * dx(); }

  /// Axis indices of flat sample `flat` (unused trailing entries are 0).
  std::array<int, 3> unflatten(std::size_t flat) const;
  /// Euclidean |x| of sample `flat`.
  double radius(std::size_t flat) const;

  bool operator==(const GridSpec& o) const { return n == o.n && N == o.N && L == o.L; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Samples f(|x|) on the grid.
template <class F>
Field sample_radial(const GridSpec& g, F&& f) {
  Field out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.radius(i));
  return out;
}

void require_shape(const Field& f, const GridSpec& g, const char* what);

}  // namespace sigmadamp
