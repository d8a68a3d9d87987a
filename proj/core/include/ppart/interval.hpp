#pragma once

// Closed double intervals with outward rounding: an inexact bound is moved
// one ulp outward from the nearest-rounded result, so the enclosure always
// contains the exact real result.

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppart/rational.hpp"

namespace ppart {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  // Enclosure of an exact rational.
  static Interval of(const Rational& q) {
    const double v = to_double(q);
    const Rational back = from_double(v);
    if (back == q) return {v, v};
    if (back < q) return {v, std::nextafter(v, INFINITY)};
    return {std::nextafter(v, -INFINITY), v};
  }
  static Interval of(const Rational& lo, const Rational& hi) { return {of(lo).lo, of(hi).hi}; }

  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
};

namespace detail {

inline double down(double v) { return std::nextafter(v, -INFINITY); }
inline double up(double v) { return std::nextafter(v, INFINITY); }

// Rounded results with the exact error recovered by fma / two-sum; the
// bound moves by one ulp only when the operation was inexact. Products near
// the subnormal range always move, since their error may not be representable.
constexpr double kTinyProduct = 0x1.0p-960;
inline double mul_down(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p) || std::fabs(p) < kTinyProduct) return p == 0.0 && (a == 0.0 || b == 0.0) ? 0.0 : down(p);
  return std::fma(a, b, -p) < 0.0 ? down(p) : p;
}
inline double mul_up(double a, double b) {
  const double p = a * b;
  if (!std::isfinite(p) || std::fabs(p) < kTinyProduct) return p == 0.0 && (a == 0.0 || b == 0.0) ? 0.0 : up(p);
  return std::fma(a, b, -p) > 0.0 ? up(p) : p;
}
inline double sum_err(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}
inline double add_down(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return down(s);
  return sum_err(a, b, s) < 0.0 ? down(s) : s;
}
inline double add_up(double a, double b) {
  const double s = a + b;
  if (!std::isfinite(s)) return up(s);
  return sum_err(a, b, s) > 0.0 ? up(s) : s;
}

}  // namespace detail

inline Interval operator+(const Interval& a, const Interval& b) {
  return {detail::add_down(a.lo, b.lo), detail::add_up(a.hi, b.hi)};
}
inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
inline Interval operator*(const Interval& a, const Interval& b) {
  const double x[2] = {a.lo, a.hi};
  const double y[2] = {b.lo, b.hi};
  double lo = INFINITY;
  double hi = -INFINITY;
  for (double u : x) {
    for (double v : y) {
      // 0 * inf yields NaN; an unbounded factor makes the enclosure unbounded.
      if (std::isnan(u * v)) return {-INFINITY, INFINITY};
      lo = std::min(lo, detail::mul_down(u, v));
      hi = std::max(hi, detail::mul_up(u, v));
    }
  }
  return {lo, hi};
}

// x^e, tight for even e over intervals straddling zero.
inline Interval ipow(const Interval& x, int e) {
  if (e == 0) return {1.0, 1.0};
  if (e == 1) return x;
  auto pow_up = [e](double b) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r = detail::mul_up(r, b);
    return r;
  };
  auto pow_down = [e](double b) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r = std::max(0.0, detail::mul_down(r, b));
    return r;
  };
  if (x.lo >= 0.0) return {pow_down(x.lo), pow_up(x.hi)};
  if (x.hi <= 0.0) {
    if (e % 2 == 0) return {pow_down(-x.hi), pow_up(-x.lo)};
    return {-pow_up(-x.lo), -pow_down(-x.hi)};
  }
  const double m = std::max(-x.lo, x.hi);
  if (e % 2 == 0) return {0.0, pow_up(m)};
  return {-pow_up(-x.lo), pow_up(x.hi)};
}

}  // namespace ppart
