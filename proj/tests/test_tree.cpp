#include <doctest.h>

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "ppart/errors.hpp"
#include "ppart/oracle.hpp"
#include "ppart/tree.hpp"
#include "ppart/workload.hpp"
#include "support.hpp"

using namespace ppart;

namespace {

constexpr RangeKind kKinds[] = {RangeKind::Halfspace, RangeKind::Ball, RangeKind::Simplex, RangeKind::Annulus,
                                RangeKind::Conjunction};

void check_against_oracle(const PartitionTree& t, const WeightedPointSet& P, int d, Rng& qr, int queries) {
  for (int q = 0; q < queries; ++q) {
    const auto range = random_range(kKinds[q % 5], d, qr);
    const auto c = t.count(range);
    const auto rep = t.report(range);
    REQUIRE_FALSE(c.fuzzy);
    CHECK(c.weight == oracle_count(P, range));
    CHECK(rep.indices == oracle_report(P, range));
  }
}

// Every point appears once among leaves, inline lists, patches and fuzzy maps.
void check_cover(const PartitionTree& t) {
  std::vector<int> seen(t.points().size(), 0);
  for (const auto& node : t.nodes()) {
    for (std::size_t i : node.points) ++seen[i];
    for (std::size_t i : node.exceptional) ++seen[i];
    for (const auto& part : node.patches.parts()) {
      for (std::size_t i : part.second.critical_points) ++seen[i];
      for (const auto& arc : part.second.arcs) {
        for (std::size_t i : arc.points) ++seen[i];
      }
    }
    for (std::size_t i : node.fuzzy.original) ++seen[i];
    if (node.leaf) CHECK(node.points.size() <= t.params().n0);
  }
  for (int s : seen) CHECK(s == 1);
}

SemialgebraicRange all_space(int d) {
  std::vector<Rational> a(static_cast<std::size_t>(d), Rational(0));
  a[0] = 1;
  return make_halfspace(a, Rational(-1000));
}

}  // namespace

TEST_CASE("tree agrees with the oracle in the plane and in space") {
  for (int d : {2, 3}) {
    for (std::size_t n : {1UL, 2UL, 40UL, 700UL}) {
      Rng rng(1000 + n + static_cast<std::size_t>(d));
      const WeightedPointSet P = gen_uniform_box(n, d, rng, WeightMode::SmallIntegers);
      TreeParams params;
      params.r = 6;
      params.n0 = 8;
      params.seed = n;
      const PartitionTree t = build_tree(P, params);
      check_cover(t);
      Rng qr(n * 7 + static_cast<std::size_t>(d));
      check_against_oracle(t, P, d, qr, 25);
    }
  }
}

TEST_CASE("strategies agree with the oracle on degenerate planar inputs") {
  Rng rng(44);
  WeightedPointSet P = gen_on_circle(300, rng, WeightMode::SmallIntegers);
  const WeightedPointSet Q = gen_on_nodal_cubic(300, rng);
  for (std::size_t i = 0; i < Q.size(); ++i) P.add(Q.point(i), Q.weight(i));
  for (auto s : {ExceptionalStrategy::Inline, ExceptionalStrategy::Patches2D}) {
    TreeParams params;
    params.r = 8;
    params.n0 = 4;
    params.strategy = s;
    const PartitionTree t = build_tree(P, params);
    check_cover(t);
    Rng qr(3);
    check_against_oracle(t, P, 2, qr, 60);
    for (int q = 0; q < 40; ++q) {
      const auto disk = random_disk(qr);
      CHECK(t.count(disk).weight == oracle_count(P, disk));
    }
  }
}

TEST_CASE("grid with duplicates and zero weights") {
  WeightedPointSet P = gen_grid(12, 2);
  for (std::size_t i = 0; i < 30; ++i) P.add(P.point(i * 3), Rational(0));
  TreeParams params;
  params.r = 5;
  params.n0 = 3;
  const PartitionTree t = build_tree(P, params);
  check_cover(t);
  Rng qr(9);
  check_against_oracle(t, P, 2, qr, 40);
}

TEST_CASE("trivial queries") {
  Rng rng(5);
  const WeightedPointSet P = gen_gaussian_clusters(500, 2, rng, WeightMode::SmallIntegers);
  TreeParams params;
  params.r = 8;
  const PartitionTree t = build_tree(P, params);
  const auto all = t.count(all_space(2));
  CHECK(all.weight == P.total_weight());
  // The whole point set fits in the root cells' boxes.
  CHECK(all.stats.cells_unknown == 0);
  std::vector<Rational> a{Rational(1), Rational(0)};
  CHECK(t.count(make_halfspace(a, Rational(5))).weight == 0);
  CHECK(t.report(make_halfspace(a, Rational(5))).indices.empty());
}

TEST_CASE("leaf-only tree") {
  Rng rng(8);
  const WeightedPointSet P = gen_uniform_box(20, 3, rng);
  TreeParams params;
  params.n0 = 20;
  const PartitionTree t = build_tree(P, params);
  REQUIRE(t.nodes().size() == 1);
  CHECK(t.nodes()[0].leaf);
  const auto s = t.structure_stats();
  CHECK(s.depth == 0);
  CHECK(s.leaf_count == 1);
  CHECK(s.stored_references == 20);
  Rng qr(2);
  check_against_oracle(t, P, 3, qr, 20);
}

TEST_CASE("structure statistics") {
  Rng rng(12);
  const WeightedPointSet P = gen_uniform_box(3000, 2, rng);
  TreeParams params;
  params.r = 8;
  params.n0 = 16;
  const PartitionTree t = build_tree(P, params);
  const auto s = t.structure_stats();
  CHECK(s.node_count == t.nodes().size());
  CHECK(s.stored_references == P.size());
  CHECK(s.leaf_count >= P.size() / params.n0);
  // Cells shrink by the fan-out, so depth is logarithmic.
  CHECK(s.depth <= 8);
  for (const auto& node : t.nodes()) {
    if (node.leaf) continue;
    CHECK(node.cells.size() >= 1);
    std::size_t sum = node.exceptional_size;
    for (const auto& c : node.cells) {
      CHECK(c.count >= 1);
      CHECK(!c.boxes.empty());
      CHECK(c.boxes.size() <= 4);
      CHECK(c.boxes.size() == c.enclosures.size());
      sum += c.count;
    }
    CHECK(sum >= 1);
  }
}

TEST_CASE("cell summaries are tight covering boxes") {
  Rng rng(15);
  const WeightedPointSet P = gen_uniform_box(200, 3, rng);
  std::vector<std::size_t> idx(P.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t k : {1UL, 2UL, 4UL}) {
    const auto boxes = cell_summary(P, idx, k);
    CHECK(boxes.size() <= k);
    for (std::size_t i : idx) {
      bool in = false;
      for (const auto& b : boxes) in = in || b.contains(P.point(i));
      CHECK(in);
    }
  }
  const auto one = cell_summary(P, {5}, 4);
  REQUIRE(one.size() == 1);
  CHECK(one[0].contains(P.point(5)));
}

TEST_CASE("classification shortcuts are sound") {
  // A cell summarized Inside or Outside must agree with every member point.
  Rng rng(21);
  const WeightedPointSet P = gen_uniform_box(1500, 2, rng);
  TreeParams params;
  params.r = 8;
  const PartitionTree t = build_tree(P, params);
  Rng qr(22);
  for (int q = 0; q < 30; ++q) {
    const auto range = random_range(kKinds[q % 5], 2, qr);
    for (const auto& node : t.nodes()) {
      for (const auto& cell : node.cells) {
        bool all_in = true;
        bool all_out = true;
        for (const auto& e : cell.enclosures) {
          const BoxClass c = range.classify(e);
          all_in = all_in && c == BoxClass::Inside;
          all_out = all_out && c == BoxClass::Outside;
        }
        if (!all_in && !all_out) continue;
        for (const auto& b : cell.boxes) {
          for (std::size_t i = 0; i < P.size(); ++i) {
            if (!b.contains(P.point(i))) continue;
            CHECK(range.contains(P.point(i)) == all_in);
          }
        }
      }
    }
  }
}

TEST_CASE("tree JSON round trip answers identically") {
  Rng rng(31);
  WeightedPointSet P = gen_on_circle(150, rng, WeightMode::SmallIntegers);
  const WeightedPointSet U = gen_uniform_box(150, 2, rng, WeightMode::SmallIntegers);
  for (std::size_t i = 0; i < U.size(); ++i) P.add(U.point(i), U.weight(i));
  for (auto s : {ExceptionalStrategy::Inline, ExceptionalStrategy::Patches2D, ExceptionalStrategy::Fuzzy}) {
    TreeParams params;
    params.r = 6;
    params.n0 = 4;
    params.strategy = s;
    const PartitionTree t = build_tree(P, params);
    const nlohmann::json j = to_json(t);
    const PartitionTree u = tree_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(u) == j);
    Rng qr(32);
    for (int q = 0; q < 30; ++q) {
      const auto range = random_range(kKinds[q % 5], 2, qr);
      const auto a = t.count(range);
      const auto b = u.count(range);
      CHECK(a.weight == b.weight);
      CHECK(a.fuzzy == b.fuzzy);
      CHECK(t.report(range).indices == u.report(range).indices);
    }
  }
  CHECK_THROWS_AS(tree_from_json(nlohmann::json::parse("{\"nodes\": 3}")), ParseError);
}

TEST_CASE("perturbation is deterministic and bounded") {
  const Rational eps(1, 1 << 20);
  for (int level = 0; level < 4; ++level) {
    for (std::size_t i = 0; i < 50; ++i) {
      const auto p = perturbation(3, eps, level, 77, i);
      CHECK(p == perturbation(3, eps, level, 77, i));
      Rational norm2(0);
      for (const auto& c : p) norm2 += c * c;
      const Rational bound = eps / pow(Rational(2), level);
      CHECK(norm2 <= bound * bound);
      CHECK(norm2 > 0);
    }
  }
  CHECK(perturbation(2, eps, 0, 1, 0) != perturbation(2, eps, 0, 1, 1));
}

TEST_CASE("fuzzy answers respect strict interiors") {
  Rng rng(51);
  WeightedPointSet P = gen_on_circle(400, rng);
  const WeightedPointSet U = gen_uniform_box(200, 2, rng);
  for (std::size_t i = 0; i < U.size(); ++i) P.add(U.point(i), U.weight(i));
  TreeParams params;
  params.r = 8;
  params.n0 = 4;
  params.strategy = ExceptionalStrategy::Fuzzy;
  params.fuzz_magnitude = Rational(1, 1 << 30);
  const PartitionTree t = build_tree(P, params);
  check_cover(t);
  const auto s = t.structure_stats();
  CHECK(s.fuzzy_nesting <= 8);
  const Rational margin(1, 1 << 20);
  Rng qr(52);
  for (int q = 0; q < 60; ++q) {
    const auto disk = random_disk(qr);
    const auto rep = t.report(disk);
    const std::set<std::size_t> got(rep.indices.begin(), rep.indices.end());
    if (!rep.fuzzy) CHECK(rep.indices == oracle_report(P, disk));
    // Points farther than the margin from the boundary circle must be decided.
    const auto& g = disk.atoms()[0].g;
    for (std::size_t i = 0; i < P.size(); ++i) {
      const Rational v = g.evaluate(P.point(i));
      if (abs(v) <= margin) continue;
      CHECK(got.count(i) == (v > 0 ? 1U : 0U));
    }
    const auto c = t.count(disk);
    CHECK(c.fuzzy == rep.fuzzy);
    Rational w(0);
    for (std::size_t i : rep.indices) w += P.weight(i);
    CHECK(c.weight == w);
  }
}

TEST_CASE("tree parameter validation") {
  WeightedPointSet P = gen_grid(3, 2);
  TreeParams bad;
  bad.r = 1;
  CHECK_THROWS_AS(build_tree(P, bad), std::invalid_argument);
  bad = TreeParams{};
  bad.n0 = 0;
  CHECK_THROWS_AS(build_tree(P, bad), std::invalid_argument);
  bad = TreeParams{};
  bad.strategy = ExceptionalStrategy::Fuzzy;
  bad.fuzz_magnitude = 0;
  CHECK_THROWS_AS(build_tree(P, bad), std::invalid_argument);
  CHECK(parse_strategy("patches2d") == ExceptionalStrategy::Patches2D);
  CHECK(std::string(to_string(ExceptionalStrategy::Fuzzy)) == "fuzzy");
  CHECK_THROWS_AS(parse_strategy("symbolic"), std::invalid_argument);
}
