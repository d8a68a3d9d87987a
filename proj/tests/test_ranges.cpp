#include <doctest.h>

#include <nlohmann/json.hpp>

#include "ppart/errors.hpp"
#include "ppart/ranges.hpp"
#include "ppart/workload.hpp"

using namespace ppart;

namespace {

RationalPoint pt(Rational a, Rational b) { return {std::move(a), std::move(b)}; }

Box box2(Rational x0, Rational x1, Rational y0, Rational y1) { return Box{{x0, y0}, {x1, y1}}; }

Rational random_in(Rng& rng, const Rational& lo, const Rational& hi) {
  Rational t(static_cast<long>(rng.below(1025)), 1024L);
  t.canonicalize();
  return lo + (hi - lo) * t;
}

RationalPoint random_point_in(const Box& b, Rng& rng) {
  RationalPoint p;
  for (int v = 0; v < b.dimension(); ++v) p.push_back(random_in(rng, b.lo[static_cast<std::size_t>(v)], b.hi[static_cast<std::size_t>(v)]));
  return p;
}

Box random_box(int d, Rng& rng) {
  Box b;
  for (int v = 0; v < d; ++v) {
    Rational a = random_in(rng, Rational(-1, 2), Rational(3, 2));
    Rational w = random_in(rng, Rational(0), Rational(1, 2));
    b.lo.push_back(a);
    b.hi.push_back(a + w);
  }
  return b;
}

// Direct all-rational evaluation of the formula, independent of the evaluator.
bool direct_contains(const SemialgebraicRange& range, const RationalPoint& p) {
  std::vector<bool> truth;
  for (const auto& a : range.atoms()) truth.push_back(sgn(a.g.evaluate(p)) >= 0);
  std::vector<bool> copy(truth.begin(), truth.end());
  std::function<bool(const Formula&)> eval = [&](const Formula& f) -> bool {
    switch (f.op) {
      case Formula::Op::Atom:
        return copy[f.index];
      case Formula::Op::Not:
        return !eval(f.args[0]);
      case Formula::Op::And:
        for (const auto& g : f.args) {
          if (!eval(g)) return false;
        }
        return true;
      case Formula::Op::Or:
        for (const auto& g : f.args) {
          if (eval(g)) return true;
        }
        return false;
    }
    return false;
  };
  return eval(range.formula());
}

}  // namespace

TEST_CASE("contains on the unit disk") {
  const RationalPoint origin{Rational(0), Rational(0)};
  const SemialgebraicRange disk = make_ball(origin, Rational(1));
  CHECK(contains(disk, pt(0, 0)));
  CHECK(contains(disk, pt(1, 0)));
  CHECK_FALSE(contains(disk, pt(2, 0)));
  CHECK(contains(disk, pt(Rational(3, 5), Rational(-4, 5))));
  REQUIRE(disk.atoms().size() == 1);
  const MultiPoly x = MultiPoly::variable(2, 0);
  const MultiPoly y = MultiPoly::variable(2, 1);
  CHECK(disk.atoms()[0].g == MultiPoly::constant(2, Rational(1)) - x * x - y * y);
  CHECK(disk.formula().op == Formula::Op::Atom);
  CHECK_THROWS_AS(contains(disk, RationalPoint{Rational(0)}), DimensionMismatch);
}

TEST_CASE("classify_box on halfplanes") {
  const Box unit = box2(0, 1, 0, 1);
  const std::vector<Rational> e1{Rational(1), Rational(0)};
  CHECK(classify_box(make_halfspace(e1, Rational(2)), unit) == BoxClass::Outside);
  CHECK(classify_box(make_halfspace(e1, Rational(-1)), unit) == BoxClass::Inside);
  CHECK(classify_box(make_halfspace(e1, Rational(1, 2)), unit) == BoxClass::Unknown);
  // Closed boundary: x1 >= 0 holds on the whole box.
  CHECK(classify_box(make_halfspace(e1, Rational(0)), unit) == BoxClass::Inside);
}

TEST_CASE("range constructors") {
  const RationalPoint origin{Rational(0), Rational(0)};
  const SemialgebraicRange h = make_halfspace(std::vector<Rational>{Rational(1), Rational(2)}, Rational(3));
  CHECK(h.atoms().size() == 1);
  CHECK(h.delta() == 1);

  const SemialgebraicRange tri = make_simplex({pt(0, 0), pt(1, 0), pt(0, 1)});
  CHECK(tri.atoms().size() == 3);
  CHECK(tri.formula().op == Formula::Op::And);
  for (const auto& a : tri.atoms()) CHECK(a.g.degree() == 1);
  CHECK(contains(tri, pt(Rational(1, 4), Rational(1, 4))));
  CHECK_FALSE(contains(tri, pt(1, 1)));
  CHECK(contains(tri, pt(Rational(1, 2), Rational(1, 2))));  // on the hypotenuse
  // Vertex order does not change the region.
  const SemialgebraicRange tri2 = make_simplex({pt(0, 1), pt(1, 0), pt(0, 0)});
  CHECK(contains(tri2, pt(Rational(1, 4), Rational(1, 4))));
  CHECK_FALSE(contains(tri2, pt(-1, 0)));
  CHECK_THROWS_AS(make_simplex({pt(0, 0), pt(1, 1), pt(2, 2)}), DegenerateSimplex);

  const SemialgebraicRange ann = make_annulus(origin, Rational(1), Rational(4));
  CHECK(ann.atoms().size() == 2);
  for (const auto& a : ann.atoms()) CHECK(a.g.degree() == 2);
  CHECK(contains(ann, pt(Rational(0), Rational(3, 2))));
  CHECK_FALSE(contains(ann, pt(Rational(0), Rational(1, 2))));
  CHECK(contains(ann, pt(0, 2)));
  CHECK_FALSE(contains(ann, pt(0, 3)));

  const std::vector<RationalPoint> tet{{Rational(0), Rational(0), Rational(0)},
                                       {Rational(1), Rational(0), Rational(0)},
                                       {Rational(0), Rational(1), Rational(0)},
                                       {Rational(0), Rational(0), Rational(1)}};
  const SemialgebraicRange t3 = make_simplex(tet);
  CHECK(contains(t3, RationalPoint{Rational(1, 5), Rational(1, 5), Rational(1, 5)}));
  CHECK_FALSE(contains(t3, RationalPoint{Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
}

TEST_CASE("constructor validation") {
  const MultiPoly x = MultiPoly::variable(2, 0);
  CHECK_THROWS_AS(SemialgebraicRange(2, {Atom{x}}, Formula::atom(1)), std::invalid_argument);
  CHECK_THROWS_AS(SemialgebraicRange(2, {Atom{MultiPoly(2)}}, Formula::atom(0)), std::invalid_argument);
  CHECK_THROWS_AS(SemialgebraicRange(3, {Atom{x}}, Formula::atom(0)), DimensionMismatch);
  CHECK_THROWS_AS(SemialgebraicRange(2, {Atom{x * x}}, Formula::atom(0), 1), std::invalid_argument);
  CHECK_THROWS_AS(SemialgebraicRange(2, {Atom{x}, Atom{x}}, Formula::atom(0), 1, 1), std::invalid_argument);
  const SemialgebraicRange declared(2, {Atom{x}}, Formula::atom(0), 4, 3);
  CHECK(declared.delta() == 4);
  CHECK(declared.s() == 3);
}

TEST_CASE("strict inequality through negation") {
  // x1 > 0 expressed as NOT(-x1 >= 0).
  const MultiPoly x = MultiPoly::variable(2, 0);
  const SemialgebraicRange open(2, {Atom{-x}}, Formula::negate(Formula::atom(0)));
  CHECK_FALSE(contains(open, pt(0, 5)));
  CHECK(contains(open, pt(Rational(1, 1000), Rational(0))));
  CHECK(classify_box(open, box2(1, 2, 0, 1)) == BoxClass::Inside);
  CHECK(classify_box(open, box2(0, 1, 0, 1)) == BoxClass::Unknown);
}

TEST_CASE("Kleene evaluation") {
  const MultiPoly x = MultiPoly::variable(1, 0);
  const SemialgebraicRange r(1, {Atom{x}, Atom{-x}},
                             Formula::any_of({Formula::atom(0), Formula::all_of({Formula::atom(1), Formula::negate(Formula::atom(0))})}));
  const std::vector<Tri> tu{Tri::True, Tri::Unknown};
  CHECK(r.evaluate(std::span<const Tri>(tu)) == Tri::True);
  const std::vector<Tri> uf{Tri::Unknown, Tri::False};
  CHECK(r.evaluate(std::span<const Tri>(uf)) == Tri::Unknown);
  const std::vector<Tri> ff{Tri::False, Tri::False};
  CHECK(r.evaluate(std::span<const Tri>(ff)) == Tri::False);
}

TEST_CASE("classification soundness and monotonicity on random ranges") {
  Rng rng(404);
  const RangeKind kinds[] = {RangeKind::Halfspace, RangeKind::Ball, RangeKind::Simplex, RangeKind::Annulus,
                             RangeKind::Conjunction};
  int decided = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const SemialgebraicRange range = random_range(kinds[trial % 5], d, rng);
    const Box b = random_box(d, rng);
    const BoxClass cls = classify_box(range, b);
    if (cls != BoxClass::Unknown) ++decided;
    for (int s = 0; s < 100; ++s) {
      const RationalPoint p = random_point_in(b, rng);
      if (cls == BoxClass::Inside) CHECK(contains(range, p));
      if (cls == BoxClass::Outside) CHECK_FALSE(contains(range, p));
    }
    // Shrink towards a random sub-box; a decided class never flips.
    Box sub = b;
    for (int level = 0; level < 4; ++level) {
      for (int v = 0; v < d; ++v) {
        const auto u = static_cast<std::size_t>(v);
        const Rational a = random_in(rng, sub.lo[u], sub.hi[u]);
        const Rational c = random_in(rng, sub.lo[u], sub.hi[u]);
        sub.lo[u] = a < c ? a : c;
        sub.hi[u] = a < c ? c : a;
      }
      const BoxClass inner = classify_box(range, sub);
      if (cls != BoxClass::Unknown) CHECK(inner == cls);
    }
  }
  CHECK(decided > 0);
}

TEST_CASE("disk enclosures are tight on axis boxes") {
  // r^2 - |x - c|^2 over a box: the enclosure should match the exact range
  // up to rounding, so a box just inside the disk is classified Inside.
  const RationalPoint c{Rational(1, 2), Rational(1, 2)};
  const SemialgebraicRange disk = make_ball(c, Rational(1, 4));
  CHECK(classify_box(disk, box2(Rational(3, 8), Rational(5, 8), Rational(3, 8), Rational(5, 8))) == BoxClass::Inside);
  // Corner at distance sqrt(2)*0.17 ~ 0.2404 < 0.25.
  CHECK(classify_box(disk, box2(Rational(33, 100), Rational(67, 100), Rational(33, 100), Rational(67, 100))) ==
        BoxClass::Inside);
  CHECK(classify_box(disk, box2(Rational(2), Rational(3), Rational(0), Rational(1))) == BoxClass::Outside);
  const IntervalBox ib = IntervalBox::of(box2(0, 1, 0, 1));
  const Interval e = disk.enclose(0, ib);
  CHECK(e.hi >= 0.25);
  CHECK(e.hi < 0.25 + 1e-12);
  CHECK(e.lo <= -0.25);
  CHECK(e.lo > -0.25 - 1e-12);
}

TEST_CASE("contains agrees with direct rational evaluation") {
  Rng rng(405);
  const RangeKind kinds[] = {RangeKind::Halfspace, RangeKind::Ball, RangeKind::Simplex, RangeKind::Annulus,
                             RangeKind::Conjunction};
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(2));
    const SemialgebraicRange range = random_range(kinds[trial % 5], d, rng);
    const WeightedPointSet P = gen_uniform_box(50, d, rng);
    for (std::size_t i = 0; i < P.size(); ++i) CHECK(contains(range, P.point(i)) == direct_contains(range, P.point_copy(i)));
  }
}

TEST_CASE("conjunction ranges pass through a sample point") {
  Rng rng(406);
  for (int trial = 0; trial < 30; ++trial) {
    const SemialgebraicRange r = random_range(RangeKind::Conjunction, 2, rng);
    CHECK(r.delta() == 3);
    CHECK(r.s() == 3);
    CHECK(r.atoms().size() >= 1);
    CHECK(r.atoms().size() <= 3);
    for (const auto& a : r.atoms()) CHECK(a.g.degree() <= 3);
  }
}

TEST_CASE("range JSON") {
  Rng rng(407);
  const RangeKind kinds[] = {RangeKind::Halfspace, RangeKind::Ball, RangeKind::Simplex, RangeKind::Annulus,
                             RangeKind::Conjunction};
  for (int trial = 0; trial < 25; ++trial) {
    const SemialgebraicRange r = random_range(kinds[trial % 5], 2 + trial % 2, rng);
    const nlohmann::json j = to_json(r);
    const SemialgebraicRange back = range_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(back) == j);
  }

  const nlohmann::json good = to_json(make_ball(RationalPoint{Rational(0), Rational(0)}, Rational(1)));
  nlohmann::json bad = good;
  bad["formula"] = {{"op", "xor"}};
  CHECK_THROWS_AS(range_from_json(bad), ParseError);
  bad = good;
  bad["formula"] = {{"op", "atom"}, {"index", 5}};
  CHECK_THROWS_AS(range_from_json(bad), ParseError);
  bad = good;
  bad.erase("atoms");
  CHECK_THROWS_AS(range_from_json(bad), ParseError);
  bad = good;
  bad["atoms"][0]["terms"][0]["num"] = "abc";
  try {
    range_from_json(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("$.atoms[0]") != std::string::npos);
  }
}
