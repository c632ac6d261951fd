#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace sigmadamp {

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  // Overflow-checked arithmetic; nullopt when a result leaves int64.
  static std::optional<Rational> add(Rational a, Rational b);
  static std::optional<Rational> mul(Rational a, Rational b);
  static std::optional<Rational> div(Rational a, Rational b);

  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// The exact fraction p/q (q <= max_den) equal to x as a double, if any.
std::optional<Rational> rational_from_double(double x, std::int64_t max_den = 1 << 16);

/// A real quantity carried alongside its exact rational value whenever every
/// input that produced it was rational.
class Exact {
 public:
  Exact() = default;
  Exact(double value);  // NOLINT: implicit from double is intended
  Exact(Rational r);    // NOLINT

  double value() const { return value_; }
  const std::optional<Rational>& rational() const { return rational_; }
  bool is_exact() const { return rational_.has_value(); }
  std::string to_string() const;  // "-1/4" when exact, decimal otherwise

  friend Exact operator+(const Exact& a, const Exact& b);
  friend Exact operator-(const Exact& a, const Exact& b);
  friend Exact operator*(const Exact& a, const Exact& b);
  friend Exact operator/(const Exact& a, const Exact& b);
  friend Exact operator-(const Exact& a);

 private:
  double value_ = 0.0;
  std::optional<Rational> rational_{Rational{0}};
};

}  // namespace sigmadamp
