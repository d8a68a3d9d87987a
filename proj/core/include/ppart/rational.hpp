#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace ppart {

using Integer = mpz_class;
using Rational = mpq_class;

// Parses "12", "-0.125", "3/7", "1.5e-3" into an exact rational.
// Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);

// Shortest exact textual form: "a" for integers, "a/b" otherwise.
std::string to_string(const Rational& q);

// Finite decimal form when the denominator is 2^a 5^b, otherwise "a/b".
std::string to_decimal_string(const Rational& q);

// Truncates toward zero; relative error below 2^-52 for normal results.
inline double to_double(const Rational& q) { return q.get_d(); }

// Exact conversion of a finite double.
Rational from_double(double v);

inline int sign_of(const Rational& q) { return sgn(q); }
inline int sign_of(const Integer& z) { return sgn(z); }

// Integer power of a rational.
Rational pow(const Rational& base, unsigned exponent);

Integer binomial(unsigned n, unsigned k);

std::uint64_t hash_value(const Rational& q);

}  // namespace ppart
