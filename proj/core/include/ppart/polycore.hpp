#pragma once

// Exact multivariate polynomials over the rationals, monomial bases, the
// Veronese lift, and certified sign evaluation.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ppart/rational.hpp"

namespace ppart {

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_from_int(int s) { return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero); }
inline Sign operator*(Sign a, Sign b) { return sign_from_int(static_cast<int>(a) * static_cast<int>(b)); }
const char* to_string(Sign s);

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> exponents);
  static Monomial one(int dimension) { return Monomial(std::vector<int>(static_cast<std::size_t>(dimension), 0)); }
  static Monomial variable(int dimension, int index);

  int dimension() const { return static_cast<int>(exponents_.size()); }
  int total_degree() const { return total_degree_; }
  int exponent(int var) const { return exponents_[static_cast<std::size_t>(var)]; }
  const std::vector<int>& exponents() const { return exponents_; }

  Monomial operator*(const Monomial& other) const;

  // Graded-lex: total degree ascending; within a degree, larger exponent
  // of the earlier variable first (x1^2 < x1 x2 < x2^2).
  friend bool operator<(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exponents_ == b.exponents_; }

 private:
  std::vector<int> exponents_;
  int total_degree_ = 0;
};

struct Term {
  Monomial monomial;
  Rational coefficient;
};

using RationalPoint = std::vector<Rational>;

// Polynomial in `dimension` variables with exact rational coefficients.
// Terms are kept sorted in graded-lex order with no zero coefficients.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(int dimension) : dimension_(dimension) {}
  MultiPoly(int dimension, std::vector<Term> terms);

  static MultiPoly constant(int dimension, const Rational& c);
  static MultiPoly variable(int dimension, int index);

  int dimension() const { return dimension_; }
  // -1 for the zero polynomial.
  int degree() const;
  int degree_in(int var) const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  Rational coefficient(const Monomial& m) const;

  MultiPoly operator-() const;
  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator*(const Rational& c) const;
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

  MultiPoly derivative(int var) const;
  MultiPoly pow(unsigned e) const;

  // Replaces variable i by subs[i]; the result lives in subs' dimension.
  MultiPoly substitute(std::span<const MultiPoly> subs) const;

  Rational evaluate(std::span<const Rational> x) const;

  // Same polynomial divided by the gcd of its numerators and the lcm of its
  // denominators, with a positive leading (graded-lex largest) coefficient
  // when `positive_lead`. Zero stays zero.
  MultiPoly primitive(bool positive_lead = false) const;

  std::string to_string() const;

 private:
  void check_dimension(const MultiPoly& o) const;

  int dimension_ = 0;
  std::vector<Term> terms_;
};

nlohmann::json to_json(const MultiPoly& f);
// Throws ParseError.
MultiPoly multipoly_from_json(const nlohmann::json& j);

// All monomials with 1 <= total degree <= max_degree in graded-lex order.
std::vector<Monomial> monomial_basis(int dimension, int max_degree);

// Smallest D with binom(D+d, d) - 1 >= k.
int min_degree(long k, int dimension);

// Values of the basis monomials at x, lower degrees first, one
// multiplication per monomial whenever the predecessor is in the basis.
std::vector<Rational> veronese(std::span<const Rational> x, std::span<const Monomial> basis);
std::vector<double> veronese(std::span<const double> x, std::span<const Monomial> basis);

MultiPoly product(std::span<const MultiPoly> fs);

// Float-filtered sign evaluation of one polynomial. Evaluates in double
// with a running forward-error bound and falls back to exact rational
// arithmetic when the bound straddles zero.
class SignEvaluator {
 public:
  SignEvaluator() = default;
  explicit SignEvaluator(const MultiPoly& f);

  const MultiPoly& polynomial() const { return poly_; }

  // `approx` holds to_double(x[i]); both views describe the same point.
  Sign sign(std::span<const Rational> x, std::span<const double> approx) const;
  Sign sign(std::span<const Rational> x) const;

 private:
  MultiPoly poly_;
  int dim_ = 0;
  std::vector<int> max_exp_;       // per variable
  std::vector<double> coeffs_;     // scaled by 2^-shift_
  std::vector<int> flat_exps_;     // size() * dim_
  int unit_count_ = 0;             // rounding units in the error bound
};

Sign eval_sign(const MultiPoly& f, std::span<const Rational> p);
std::vector<Sign> multi_eval_sign(const MultiPoly& f, std::span<const RationalPoint> points);

}  // namespace ppart
