#include "sigmadamp/exact.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sigmadamp/format.hpp"

namespace sigmadamp {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::optional<Rational> Rational::add(Rational a, Rational b) {
  std::int64_t x = 0, y = 0, d = 0, n = 0;
  if (__builtin_mul_overflow(a.num_, b.den_, &x) || __builtin_mul_overflow(b.num_, a.den_, &y) ||
      __builtin_add_overflow(x, y, &n) || __builtin_mul_overflow(a.den_, b.den_, &d))
    return std::nullopt;
  return Rational(n, d);
}

std::optional<Rational> Rational::mul(Rational a, Rational b) {
  std::int64_t n = 0, d = 0;
  if (__builtin_mul_overflow(a.num_, b.num_, &n) || __builtin_mul_overflow(a.den_, b.den_, &d)) return std::nullopt;
  return Rational(n, d);
}

std::optional<Rational> Rational::div(Rational a, Rational b) {
  if (b.num_ == 0) return std::nullopt;
  return mul(a, Rational(b.den_, b.num_));
}

std::optional<Rational> rational_from_double(double x, std::int64_t max_den) {
  if (!std::isfinite(x) || std::fabs(x) > 1e15) return std::nullopt;
  // Continued-fraction convergents; accept the first one that reproduces x.
  double rem = x;
  std::int64_t h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rem);
    if (std::fabs(a) > 1e15) return std::nullopt;
    const auto ai = static_cast<std::int64_t>(a);
    std::int64_t h2 = 0, k2 = 0, t = 0;
    if (__builtin_mul_overflow(ai, h0, &t) || __builtin_add_overflow(t, h1, &h2)) return std::nullopt;
    if (__builtin_mul_overflow(ai, k0, &t) || __builtin_add_overflow(t, k1, &k2)) return std::nullopt;
    if (k2 > max_den) return std::nullopt;
    if (static_cast<double>(h2) / static_cast<double>(k2) == x) return Rational(h2, k2);
    h1 = h0;
    h0 = h2;
    k1 = k0;
    k0 = k2;
    const double frac = rem - a;
    if (frac == 0.0) return std::nullopt;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

Exact::Exact(double value) : value_(value), rational_(rational_from_double(value)) {}

Exact::Exact(Rational r) : value_(r.to_double()), rational_(r) {}

std::string Exact::to_string() const {
  if (rational_) return rational_->to_string();
  return format_number(value_);
}

Exact operator+(const Exact& a, const Exact& b) {
  if (a.rational_ && b.rational_)
    if (auto r = Rational::add(*a.rational_, *b.rational_)) return Exact(*r);
  Exact out;
  out.value_ = a.value_ + b.value_;
  out.rational_.reset();
  return out;
}

Exact operator-(const Exact& a) {
  Exact out = a;
  out.value_ = -a.value_;
  if (a.rational_) out.rational_ = Rational(-a.rational_->num(), a.rational_->den());
  return out;
}

Exact operator-(const Exact& a, const Exact& b) { return a + (-b); }

Exact operator*(const Exact& a, const Exact& b) {
  if (a.rational_ && b.rational_)
    if (auto r = Rational::mul(*a.rational_, *b.rational_)) return Exact(*r);
  Exact out;
  out.value_ = a.value_ * b.value_;
  out.rational_.reset();
  return out;
}

Exact operator/(const Exact& a, const Exact& b) {
  if (a.rational_ && b.rational_)
    if (auto r = Rational::div(*a.rational_, *b.rational_)) return Exact(*r);
  Exact out;
  out.value_ = a.value_ / b.value_;
  out.rational_.reset();
  return out;
}

}  // namespace sigmadamp
