#pragma once

#include <numeric>
#include <stdexcept>

namespace fide {

// A fractional order a/b stored as a reduced integer pair. The equation
// orders alpha, beta are rationals so that their exponents land on the
// common grid {t^(mu/b)} with b = lcm of the two denominators.
struct RationalOrder {
  long num = 1;
  long den = 2;

  RationalOrder() = default;
  RationalOrder(long a, long b) : num(a), den(b) {
    if (b <= 0 || a <= 0) throw std::invalid_argument("RationalOrder: requires a >= 1, b >= 1");
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  bool reduced() const { return std::gcd(num, den) == 1; }

  // Returns the co-prime equivalent; callers that care emit a warning.
  RationalOrder reduce() const {
    long g = std::gcd(num, den);
    return RationalOrder(num / g, den / g);
  }

  long ceil() const { return (num + den - 1) / den; }

  // Index shift on a grid of denominator b (requires den | b).
  long grid_index(long b) const {
    if (b % den != 0) throw std::invalid_argument("RationalOrder: order does not lie on grid");
    return num * (b / den);
  }

  friend bool operator==(const RationalOrder& x, const RationalOrder& y) {
    return x.num * y.den == y.num * x.den;
  }
};

}  // namespace fide
