#pragma once

// Univariate polynomials over Q, real-root isolation and Sylvester
// resultants of bivariate polynomials.

#include <optional>
#include <vector>

#include "ppart/polycore.hpp"

namespace ppart {

class UniPoly {
 public:
  UniPoly() = default;
  // Coefficients in ascending powers; trailing zeros are dropped.
  explicit UniPoly(std::vector<Rational> coeffs);
  static UniPoly constant(const Rational& c) { return UniPoly({c}); }
  static UniPoly x() { return UniPoly({Rational(0), Rational(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& operator[](std::size_t i) const { return c_[i]; }
  Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational evaluate(const Rational& x) const;
  Sign sign_at(const Rational& x) const { return sign_from_int(sgn(evaluate(x))); }
  // Sign as x -> +inf (plus_inf) or -inf.
  Sign sign_at_infinity(bool plus_inf) const;

  UniPoly operator-() const;
  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly operator*(const Rational& c) const;
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }

  UniPoly derivative() const;
  // Quotient and remainder; divisor nonzero.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& divisor) const;
  // Monic multiple (zero stays zero).
  UniPoly monic() const;
  // Integer coefficients with gcd 1 and positive leading coefficient.
  UniPoly primitive() const;

  std::string to_string() const;

 private:
  std::vector<Rational> c_;
};

UniPoly gcd(UniPoly a, UniPoly b);
UniPoly square_free_part(const UniPoly& p);

// Contains exactly one real root of its polynomial. `exact` means lo = hi is
// the root; otherwise the root lies in the open interval (lo, hi) and the
// polynomial has opposite nonzero signs at lo and hi.
struct IsolatingInterval {
  Rational lo;
  Rational hi;
  bool exact = false;

  bool contains(const Rational& x) const { return exact ? x == lo : (lo < x && x < hi); }
};

// One interval per distinct real root, ascending and pairwise disjoint
// (closed intervals do not touch). p nonzero.
std::vector<IsolatingInterval> isolate_roots(const UniPoly& p);

// Halves a non-exact interval of a square-free p.
void refine(const UniPoly& square_free, IsolatingInterval& iv);
// Refines until x is outside iv or iv is the exact root x. Returns true
// when x is the root.
bool separate(const UniPoly& square_free, IsolatingInterval& iv, const Rational& x);

// Sturm sequence of a square-free polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const UniPoly& square_free);
  // Distinct real roots in (a, b]; nullopt bounds are infinite.
  int count(const std::optional<Rational>& a, const std::optional<Rational>& b) const;
  int count_all() const { return count(std::nullopt, std::nullopt); }

 private:
  int variations(const std::optional<Rational>& x, bool plus_inf) const;
  std::vector<UniPoly> seq_;
};

// Bivariate f(x, y) viewed as a polynomial in y with coefficients in Q[x];
// entry i is the coefficient of y^i.
std::vector<UniPoly> as_poly_in_y(const MultiPoly& f);
// f(x0, y) as a polynomial in y.
UniPoly restrict_x(const std::vector<UniPoly>& in_y, const Rational& x0);

// Determinant of the Sylvester matrix of f and g with respect to y (rows of
// f first, coefficients from the highest power). Res(y^2 - x, y) = -x.
UniPoly sylvester_resultant(const MultiPoly& f, const MultiPoly& g);

}  // namespace ppart
