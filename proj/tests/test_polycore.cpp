#include <doctest.h>

#include <nlohmann/json.hpp>

#include "ppart/errors.hpp"
#include "ppart/polycore.hpp"
#include "ppart/rng.hpp"

using namespace ppart;

namespace {

MultiPoly x(int d, int i) { return MultiPoly::variable(d, i); }
MultiPoly c(int d, long v) { return MultiPoly::constant(d, Rational(v)); }

Rational random_rational(Rng& rng, long span = 40) {
  Rational q(static_cast<long>(rng.below(2 * span + 1)) - span, static_cast<long>(rng.below(9) + 1));
  q.canonicalize();
  return q;
}

MultiPoly random_poly(int d, int max_deg, Rng& rng) {
  std::vector<Term> terms;
  for (const auto& m : monomial_basis(d, max_deg)) {
    if (rng.below(2) == 0) terms.push_back(Term{m, random_rational(rng, 5)});
  }
  Rational c0 = random_rational(rng, 5);
  if (sgn(c0) == 0) c0 = 1;
  terms.push_back(Term{Monomial::one(d), c0});
  return MultiPoly(d, std::move(terms));
}

// Independent count of monomials of total degree 1..D in d variables.
long brute_basis_size(int d, int D) {
  long count = 0;
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  while (true) {
    int total = 0;
    for (int v : e) total += v;
    if (total >= 1 && total <= D) ++count;
    std::size_t i = 0;
    while (i < e.size() && e[i] == D) e[i++] = 0;
    if (i == e.size()) break;
    ++e[i];
  }
  return count;
}

}  // namespace

TEST_CASE("monomial_basis lengths and order") {
  CHECK(monomial_basis(2, 1).size() == 2);
  CHECK(monomial_basis(2, 3).size() == 9);
  CHECK(monomial_basis(3, 2).size() == 9);
  for (int d = 1; d <= 6; ++d) {
    for (int D = 0; D <= (d <= 3 ? 12 : 6); ++D) {
      CHECK(static_cast<long>(monomial_basis(d, D).size()) == brute_basis_size(d, D));
    }
  }
  const auto basis = monomial_basis(3, 4);
  for (std::size_t i = 1; i < basis.size(); ++i) {
    CHECK(basis[i - 1] < basis[i]);
    CHECK(basis[i - 1].total_degree() <= basis[i].total_degree());
  }
}

TEST_CASE("min_degree") {
  CHECK(min_degree(2, 2) == 1);
  CHECK(min_degree(8, 2) == 3);
  CHECK(min_degree(10, 2) == 4);
  for (int d = 1; d <= 4; ++d) {
    int prev = 0;
    for (long k = 1; k <= 300; ++k) {
      const int D = min_degree(k, d);
      CHECK(D >= prev);
      prev = D;
      CHECK(binomial(static_cast<unsigned>(D + d), static_cast<unsigned>(d)) - 1 >= k);
      CHECK(binomial(static_cast<unsigned>(D - 1 + d), static_cast<unsigned>(d)) - 1 < k);
    }
  }
}

TEST_CASE("veronese lift") {
  auto basis = monomial_basis(2, 3);
  basis.resize(8);
  const RationalPoint p{Rational(2), Rational(3)};
  const auto lifted = veronese(p, basis);
  const std::vector<long> expected{2, 3, 4, 6, 9, 8, 12, 18};
  REQUIRE(lifted.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(lifted[i] == expected[i]);

  CHECK(veronese(p, std::span<const Monomial>{}).empty());

  const std::vector<double> pd{0.5, -1.5};
  const auto ld = veronese(pd, basis);
  const auto lq = veronese(RationalPoint{Rational(1, 2), Rational(-3, 2)}, basis);
  for (std::size_t i = 0; i < ld.size(); ++i) CHECK(ld[i] == to_double(lq[i]));
}

TEST_CASE("eval_sign examples") {
  const MultiPoly circle = x(2, 0) * x(2, 0) + x(2, 1) * x(2, 1) - c(2, 1);
  CHECK(eval_sign(circle, RationalPoint{Rational(1), Rational(0)}) == Sign::Zero);
  CHECK(eval_sign(circle, RationalPoint{Rational(3, 5), Rational(4, 5)}) == Sign::Zero);
  CHECK(eval_sign(circle, RationalPoint{Rational(1), Rational(1)}) == Sign::Positive);
  CHECK(eval_sign(circle, RationalPoint{Rational(0), Rational(0)}) == Sign::Negative);
  CHECK(eval_sign(MultiPoly(2), RationalPoint{Rational(5), Rational(1)}) == Sign::Zero);
  CHECK_THROWS_AS(eval_sign(circle, RationalPoint{Rational(1)}), DimensionMismatch);
}

TEST_CASE("eval_sign near zero falls back to exact arithmetic") {
  // (x - a)(x - b) with a, b one ulp-ish apart: the double filter cannot decide.
  const Rational a = Rational(1, 3);
  const Rational b = a + Rational(1) / pow(Rational(2), 80);
  const MultiPoly f = (x(1, 0) - MultiPoly::constant(1, a)) * (x(1, 0) - MultiPoly::constant(1, b));
  CHECK(eval_sign(f, RationalPoint{a}) == Sign::Zero);
  CHECK(eval_sign(f, RationalPoint{b}) == Sign::Zero);
  CHECK(eval_sign(f, RationalPoint{(a + b) / 2}) == Sign::Negative);
  CHECK(eval_sign(f, RationalPoint{b + Rational(1) / pow(Rational(2), 90)}) == Sign::Positive);
}

TEST_CASE("eval_sign agrees with exact evaluation on random instances") {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + static_cast<int>(rng.below(3));
    const MultiPoly f = random_poly(d, 1 + static_cast<int>(rng.below(4)), rng);
    RationalPoint p(static_cast<std::size_t>(d));
    for (auto& v : p) v = random_rational(rng, 6);
    CHECK(static_cast<int>(eval_sign(f, p)) == sgn(f.evaluate(p)));
  }
}

TEST_CASE("multi_eval_sign") {
  const std::vector<RationalPoint> pts{{Rational(-1), Rational(0)}, {Rational(0), Rational(0)}, {Rational(1), Rational(0)}};
  CHECK(multi_eval_sign(x(2, 0), pts) == std::vector<Sign>{Sign::Negative, Sign::Zero, Sign::Positive});
  CHECK(multi_eval_sign(x(2, 0), std::vector<RationalPoint>{}).empty());

  Rng rng(5);
  const MultiPoly xy = x(2, 0) * x(2, 1);
  std::vector<RationalPoint> many;
  for (int i = 0; i < 100; ++i) many.push_back({random_rational(rng), random_rational(rng)});
  const auto signs = multi_eval_sign(xy, many);
  for (std::size_t i = 0; i < many.size(); ++i) CHECK(signs[i] == eval_sign(xy, many[i]));
}

TEST_CASE("product") {
  const std::vector<MultiPoly> xs{x(2, 0), x(2, 1)};
  CHECK(product(xs) == x(2, 0) * x(2, 1));
  const MultiPoly f = x(2, 0) * x(2, 1) + c(2, 3);
  CHECK(product(std::vector<MultiPoly>{f}) == f);
  const std::vector<MultiPoly> pm{x(1, 0) - c(1, 1), x(1, 0) + c(1, 1)};
  CHECK(product(pm) == x(1, 0) * x(1, 0) - c(1, 1));
}

TEST_CASE("product signs multiply and vanish together") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const RationalPoint p{random_rational(rng, 3), random_rational(rng, 3)};
    std::vector<MultiPoly> fs;
    const int count = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < count; ++i) fs.push_back(random_poly(2, 1 + static_cast<int>(rng.below(2)), rng));
    // Half of the products get a factor through p.
    if (rng.below(2) == 0) fs.push_back(x(2, 0) - MultiPoly::constant(2, p[0]));
    int deg_sum = 0;
    Sign expected = Sign::Positive;
    for (const auto& f : fs) {
      deg_sum += f.degree();
      expected = expected * eval_sign(f, p);
    }
    const MultiPoly g = product(fs);
    CHECK(g.degree() == deg_sum);
    CHECK(eval_sign(g, p) == expected);
  }
}

TEST_CASE("degree conventions and arithmetic") {
  CHECK(MultiPoly(2).degree() == -1);
  CHECK(c(2, 4).degree() == 0);
  const MultiPoly f = x(2, 0) * x(2, 0) * x(2, 1) - c(2, 2) * x(2, 1);
  CHECK(f.degree() == 3);
  CHECK(f.degree_in(0) == 2);
  CHECK(f.degree_in(1) == 1);
  CHECK((f - f).is_zero());
  CHECK(f.derivative(0) == c(2, 2) * x(2, 0) * x(2, 1));
  CHECK(f.pow(2) == f * f);
}

TEST_CASE("polynomial JSON round trip") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const MultiPoly f = random_poly(3, 3, rng);
    const nlohmann::json j = to_json(f);
    CHECK(j["d"] == 3);
    CHECK(multipoly_from_json(j) == f);
    CHECK(multipoly_from_json(nlohmann::json::parse(j.dump())) == f);
  }
}
