#include <doctest.h>

#include <numeric>

#include "ppart/oracle.hpp"
#include "ppart/weight.hpp"
#include "ppart/workload.hpp"

using namespace ppart;

namespace {

template <class T>
concept Subtractable = requires(T a, T b) { a - b; };
template <class T>
concept SubtractAssignable = requires(T a, T b) { a -= b; };
template <class T>
concept Negatable = requires(T a) { -a; };

// The zero polynomial is not a valid atom; "everything" is 1 >= 0.
SemialgebraicRange everything(int d) {
  return SemialgebraicRange(d, {Atom{MultiPoly::constant(d, Rational(1))}}, Formula::atom(0));
}
SemialgebraicRange nothing(int d) {
  return SemialgebraicRange(d, {Atom{MultiPoly::constant(d, Rational(-1))}}, Formula::atom(0));
}

}  // namespace

static_assert(!Subtractable<Weight>);
static_assert(!SubtractAssignable<Weight>);
static_assert(!Negatable<Weight>);

TEST_CASE("oracle examples") {
  const WeightedPointSet empty(2);
  CHECK(oracle_count(empty, everything(2)) == 0);
  CHECK(oracle_report(empty, everything(2)).empty());

  Rng rng(1);
  const WeightedPointSet P = gen_uniform_box(37, 2, rng);
  CHECK(oracle_count(P, everything(2)) == 37);
  std::vector<std::size_t> all(37);
  std::iota(all.begin(), all.end(), 0);
  CHECK(oracle_report(P, everything(2)) == all);
  CHECK(oracle_report(P, nothing(2)).empty());
  CHECK(oracle_count(P, nothing(2)) == 0);

  WeightedPointSet D(2);
  D.add(RationalPoint{Rational(0), Rational(0)}, Rational(2));
  D.add(RationalPoint{Rational(1), Rational(0)}, Rational(3));
  D.add(RationalPoint{Rational(2), Rational(0)}, Rational(5));
  const SemialgebraicRange disk = make_ball(RationalPoint{Rational(0), Rational(0)}, Rational(1));
  CHECK(oracle_count(D, disk) == 5);
  CHECK(oracle_report(D, disk) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("oracle count equals the weight of the report") {
  Rng rng(2);
  const RangeKind kinds[] = {RangeKind::Halfspace, RangeKind::Ball, RangeKind::Simplex, RangeKind::Annulus,
                             RangeKind::Conjunction};
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 2;
    const WeightedPointSet P = gen_uniform_box(1 + rng.below(200), d, rng, WeightMode::SmallIntegers);
    const SemialgebraicRange range = random_range(kinds[trial % 5], d, rng);
    const auto report = oracle_report(P, range);
    CHECK(std::is_sorted(report.begin(), report.end()));
    Rational sum(0);
    for (std::size_t i : report) sum += P.weight(i);
    CHECK(oracle_count(P, range) == sum);
  }
}

TEST_CASE("WeightTree range sums") {
  Rng rng(3);
  for (std::size_t n : {0u, 1u, 2u, 7u, 64u, 100u}) {
    std::vector<Rational> w(n);
    for (auto& v : w) v = Rational(static_cast<long>(rng.below(100)), static_cast<long>(1 + rng.below(5)));
    for (auto& v : w) v.canonicalize();
    const WeightTree t(w);
    CHECK(t.size() == n);
    for (int q = 0; q < 50 && n > 0; ++q) {
      std::size_t a = rng.below(n + 1), b = rng.below(n + 1);
      if (a > b) std::swap(a, b);
      Rational expected(0);
      for (std::size_t i = a; i < b; ++i) expected += w[i];
      CHECK(t.sum(a, b).value() == expected);
    }
    Rational total(0);
    for (const auto& v : w) total += v;
    CHECK(t.total().value() == total);
  }
}
