#pragma once

#include "ppart/rational.hpp"

// Canonical a/b; gmp arithmetic requires canonical operands.
inline ppart::Rational ratio(long a, long b) {
  ppart::Rational q(a, b);
  q.canonicalize();
  return q;
}
