#pragma once

// Exact dense linear algebra over the integers and rationals.

#include <optional>
#include <span>
#include <vector>

#include "ppart/rational.hpp"

namespace ppart::linalg {

using IntRow = std::vector<Integer>;

// Row echelon form from fraction-free (Bareiss) elimination.
struct Echelon {
  std::vector<IntRow> rows;     // first `rank` rows are pivot rows
  std::vector<int> pivot_cols;  // one per pivot row, increasing
  std::size_t columns = 0;
  std::size_t rank() const { return pivot_cols.size(); }
};

Echelon bareiss_echelon(std::vector<IntRow> m);

// Nonzero primitive integer vector spanning the kernel when the kernel is
// one-dimensional; nullopt otherwise.
std::optional<IntRow> unique_null_vector(const Echelon& e);

// Row multiplied by the lcm of its denominators.
IntRow to_integer_row(std::span<const Rational> row);

Rational determinant(std::vector<std::vector<Rational>> m);

}  // namespace ppart::linalg
