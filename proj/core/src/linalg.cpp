#include "ppart/linalg.hpp"

#include <stdexcept>

namespace ppart::linalg {

Echelon bareiss_echelon(std::vector<IntRow> m) {
  Echelon e;
  e.columns = m.empty() ? 0 : m.front().size();
  const std::size_t rows = m.size();
  Integer prev(1);
  Integer t;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < e.columns && rank < rows; ++c) {
    // Smallest nonzero entry as pivot keeps intermediate sizes down.
    std::size_t best = rows;
    std::size_t best_bits = 0;
    for (std::size_t r = rank; r < rows; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      std::size_t bits = mpz_sizeinbase(m[r][c].get_mpz_t(), 2);
      if (best == rows || bits < best_bits) {
        best = r;
        best_bits = bits;
      }
    }
    if (best == rows) continue;
    std::swap(m[rank], m[best]);
    const Integer& pivot = m[rank][c];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const Integer factor = m[r][c];
      for (std::size_t j = c + 1; j < e.columns; ++j) {
        // m[r][j] = (pivot * m[r][j] - factor * m[rank][j]) / prev, exact.
        mpz_mul(t.get_mpz_t(), pivot.get_mpz_t(), m[r][j].get_mpz_t());
        mpz_submul(t.get_mpz_t(), factor.get_mpz_t(), m[rank][j].get_mpz_t());
        mpz_divexact(m[r][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[r][c] = 0;
    }
    prev = pivot;
    e.pivot_cols.push_back(static_cast<int>(c));
    ++rank;
  }
  m.resize(rank);
  e.rows = std::move(m);
  return e;
}

std::optional<IntRow> unique_null_vector(const Echelon& e) {
  if (e.columns == 0 || e.rank() + 1 != e.columns) return std::nullopt;
  std::vector<bool> is_pivot(e.columns, false);
  for (int c : e.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;

  std::vector<Rational> x(e.columns, Rational(0));
  x[free_col] = 1;
  for (std::size_t i = e.rank(); i-- > 0;) {
    const auto c = static_cast<std::size_t>(e.pivot_cols[i]);
    Rational s(0);
    for (std::size_t j = c + 1; j < e.columns; ++j) {
      if (sgn(x[j]) != 0 && sgn(e.rows[i][j]) != 0) s += Rational(e.rows[i][j]) * x[j];
    }
    x[c] = -s / Rational(e.rows[i][c]);
  }
  Integer l(1);
  for (const auto& v : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  IntRow out(e.columns);
  Integer g(0);
  for (std::size_t j = 0; j < e.columns; ++j) {
    out[j] = x[j].get_num() * (l / x[j].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out[j].get_mpz_t());
  }
  if (g > 1) {
    for (auto& v : out) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }
  return out;
}

IntRow to_integer_row(std::span<const Rational> row) {
  Integer l(1);
  for (const auto& v : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  IntRow out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) out[j] = row[j].get_num() * (l / row[j].get_den());
  return out;
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[c].size() != n) throw std::invalid_argument("determinant: matrix not square");
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

}  // namespace ppart::linalg
