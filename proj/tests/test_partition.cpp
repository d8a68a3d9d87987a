#include <doctest.h>

#include <nlohmann/json.hpp>
#include <set>

#include "ppart/partition.hpp"
#include "ppart/workload.hpp"
#include "support.hpp"

using namespace ppart;

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Checks every structural postcondition against an independent recomputation.
void audit(const PolynomialPartition& part, const WeightedPointSet& P, const Rational& r) {
  const std::size_t n = P.size();
  Rational r_eff = r > Rational(static_cast<long>(n)) ? Rational(static_cast<long>(n)) : r;

  // Cells and exceptional set partition the input.
  std::vector<int> seen(n, 0);
  for (const auto& cell : part.cells()) {
    CHECK(!cell.empty());
    for (std::size_t i : cell) ++seen[i];
  }
  for (std::size_t i : part.exceptional()) ++seen[i];
  for (std::size_t i = 0; i < n; ++i) CHECK(seen[i] == 1);

  // Balance: |cell| * r <= n, i.e. |cell| <= n / r.
  for (const auto& cell : part.cells()) {
    CHECK(Rational(static_cast<long>(cell.size())) * r_eff <= Rational(static_cast<long>(n)));
  }

  // Phase bound, by direct comparison (8/7)^m >= r at m and not at m - 1.
  const int m = static_cast<int>(part.phases().size());
  int bound = 0;
  Rational power(1);
  while (power < r_eff) {
    power *= Rational(8, 7);
    ++bound;
  }
  CHECK(m <= bound);
  CHECK(phase_bound(r_eff) == bound);

  // Halving and kappa.
  for (const auto& ph : part.phases()) {
    for (std::size_t s = 1; s < ph.family_counts.size(); ++s) {
      CHECK(static_cast<std::size_t>(ph.family_counts[s]) <= ceil_div(static_cast<std::size_t>(ph.family_counts[s - 1]), 2));
    }
    if (!ph.family_counts.empty()) CHECK(ph.kappa == ph.family_counts.front());
    CHECK(Rational(ph.kappa) <= pow(Rational(8, 7), static_cast<unsigned>(ph.index)));
  }

  // Exactness: f vanishes exactly on the exceptional points, evaluated
  // factor by factor with the exact evaluator.
  auto vanishes = [&](std::size_t i) {
    const RationalPoint local = part.frame().to_local(P.point(i));
    for (const auto& g : part.dissectors()) {
      if (sgn(g.evaluate(local)) == 0) return true;
    }
    return false;
  };
  for (std::size_t i : part.exceptional()) CHECK(vanishes(i));
  for (const auto& cell : part.cells()) {
    for (std::size_t i : cell) CHECK_FALSE(vanishes(i));
  }

  // locate replays the stored assignment.
  for (std::size_t c = 0; c < part.cells().size(); ++c) {
    for (std::size_t i : part.cells()[c]) {
      const Location loc = part.locate(P.point(i));
      CHECK_FALSE(loc.exceptional);
      CHECK(loc.cell == c);
    }
  }
  for (std::size_t i : part.exceptional()) CHECK(part.locate(P.point(i)).exceptional);
}

// Sign vector of x under every dissector, in construction order.
std::vector<Sign> signature(const PolynomialPartition& part, std::span<const Rational> x) {
  const RationalPoint local = part.frame().to_local(x);
  std::vector<Sign> s;
  for (const auto& g : part.dissectors()) s.push_back(eval_sign(g, local));
  return s;
}

}  // namespace

TEST_CASE("single point") {
  WeightedPointSet P(2);
  P.add(RationalPoint{Rational(1, 3), Rational(2)}, Rational(1));
  Rng rng(1);
  const PolynomialPartition part = build_partition(P, Rational(5), rng);
  CHECK(part.phases().size() <= 1);
  CHECK(part.cells().size() + part.exceptional().size() == 1);
  audit(part, P, Rational(5));
  const PartitionStats st = part.stats();
  CHECK(st.cells + st.exceptional == 1);
}

TEST_CASE("four generic points, r = 2") {
  WeightedPointSet P(2);
  P.add(RationalPoint{Rational(0), Rational(0)}, Rational(1));
  P.add(RationalPoint{Rational(3), Rational(1)}, Rational(1));
  P.add(RationalPoint{Rational(1), Rational(5)}, Rational(1));
  P.add(RationalPoint{Rational(-2), Rational(7, 2)}, Rational(1));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const PolynomialPartition part = build_partition(P, Rational(2), rng);
    for (const auto& cell : part.cells()) CHECK(cell.size() <= 2);
    audit(part, P, Rational(2));
  }
}

TEST_CASE("1000 uniform points, r = 10") {
  Rng data(1000);
  const WeightedPointSet P = gen_uniform_box(1000, 2, data);
  Rng rng(10);
  const PolynomialPartition part = build_partition(P, Rational(10), rng);
  const PartitionStats st = part.stats();
  CHECK(st.max_cell <= 100);
  CHECK(st.phases <= 18);
  CHECK(phase_bound(Rational(10)) == 18);
  CHECK(st.degree == part.f().degree());
  audit(part, P, Rational(10));

  // Cross-check cell membership by sign vectors: members of one cell share
  // the signs of every dissector applied on their path, so two points in
  // different cells must differ in sign on some dissector.
  std::vector<std::vector<Sign>> sig(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) sig[i] = signature(part, P.point(i));
  std::set<std::vector<Sign>> per_cell_reps;
  for (const auto& cell : part.cells()) {
    std::set<std::vector<Sign>> distinct;
    for (std::size_t i : cell) distinct.insert(sig[i]);
    for (const auto& s : distinct) CHECK(per_cell_reps.insert(s).second);
  }
}

TEST_CASE("rational r and r clamped to n") {
  Rng data(2);
  const WeightedPointSet P = gen_uniform_box(200, 2, data);
  Rng a(3);
  audit(build_partition(P, Rational(15, 2), a), P, Rational(15, 2));
  Rng b(3);
  const PolynomialPartition big = build_partition(P, Rational(1000), b);
  audit(big, P, Rational(1000));
  for (const auto& cell : big.cells()) CHECK(cell.size() == 1);
}

TEST_CASE("random builds satisfy every postcondition") {
  Rng meta(77);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(meta.below(2));
    const std::size_t n = 1 + meta.below(600);
    const long r = 2 + static_cast<long>(meta.below(30));
    Rng data(meta.next());
    const WeightedPointSet P = trial % 3 == 0 ? gen_gaussian_clusters(n, d, data) : gen_uniform_box(n, d, data);
    Rng rng(meta.next());
    audit(build_partition(P, Rational(r), rng), P, Rational(r));
  }
}

TEST_CASE("subset builds index into the shared point set") {
  Rng data(5);
  const WeightedPointSet P = gen_uniform_box(300, 2, data);
  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < P.size(); i += 3) subset.push_back(i);
  Rng rng(6);
  const PolynomialPartition part = build_partition(P, subset, Rational(8), rng);
  std::vector<std::size_t> got;
  for (const auto& cell : part.cells()) got.insert(got.end(), cell.begin(), cell.end());
  got.insert(got.end(), part.exceptional().begin(), part.exceptional().end());
  std::sort(got.begin(), got.end());
  CHECK(got == subset);
  for (const auto& cell : part.cells()) CHECK(cell.size() * 8 <= subset.size());
}

TEST_CASE("points on a line flow into the exceptional set when a dissector contains them") {
  WeightedPointSet P(2);
  for (long i = 0; i < 100; ++i) P.add(RationalPoint{ratio(i, 7), ratio(2 * i + 1, 7)}, Rational(1));
  Rng rng(4);
  const PolynomialPartition part = build_partition(P, Rational(4), rng);
  audit(part, P, Rational(4));
}

TEST_CASE("locate on fresh points: sign audit") {
  Rng data(500);
  const WeightedPointSet P = gen_uniform_box(500, 2, data);
  Rng rng(8);
  const PolynomialPartition part = build_partition(P, Rational(8), rng);

  // Dissectors applied on the path to each cell, from the member tree.
  const auto& members = part.members();
  std::vector<std::vector<std::size_t>> path_of(part.cells().size());
  std::vector<std::pair<long, std::vector<std::size_t>>> stack{{0, {}}};
  while (!stack.empty()) {
    auto [m, path] = stack.back();
    stack.pop_back();
    const Member& mem = members[static_cast<std::size_t>(m)];
    if (mem.dissector < 0) {
      if (mem.cell >= 0) path_of[static_cast<std::size_t>(mem.cell)] = path;
      continue;
    }
    path.push_back(static_cast<std::size_t>(mem.dissector));
    if (mem.plus >= 0) stack.push_back({mem.plus, path});
    if (mem.minus >= 0) stack.push_back({mem.minus, path});
  }

  Rng fresh(9);
  const WeightedPointSet Q = gen_uniform_box(400, 2, fresh);
  std::size_t located = 0;
  for (std::size_t q = 0; q < Q.size(); ++q) {
    const Location loc = part.locate(Q.point(q));
    if (loc.exceptional) continue;
    ++located;
    const auto sq = signature(part, Q.point(q));
    for (std::size_t g : path_of[loc.cell]) {
      for (std::size_t i : part.cells()[loc.cell]) CHECK(signature(part, P.point(i))[g] == sq[g]);
    }
  }
  CHECK(located > 0);
}

TEST_CASE("different cells are separated by some dissector along the segment") {
  Rng data(21);
  const WeightedPointSet P = gen_uniform_box(400, 2, data);
  Rng rng(22);
  const PolynomialPartition part = build_partition(P, Rational(8), rng);
  Rng pick(23);
  for (int t = 0; t < 200; ++t) {
    const std::size_t a = pick.below(P.size());
    const std::size_t b = pick.below(P.size());
    // Walk the segment a -> b in 16 steps and compare consecutive locations.
    RationalPoint prev = P.point_copy(a);
    Location prev_loc = part.locate(prev);
    for (int s = 1; s <= 16; ++s) {
      RationalPoint cur(2);
      for (std::size_t v = 0; v < 2; ++v) cur[v] = P.point(a)[v] + (P.point(b)[v] - P.point(a)[v]) * ratio(s, 16);
      const Location loc = part.locate(cur);
      if (!prev_loc.exceptional && !loc.exceptional && prev_loc.cell != loc.cell) {
        const auto s0 = signature(part, prev);
        const auto s1 = signature(part, cur);
        bool crosses = false;
        for (std::size_t g = 0; g < s0.size(); ++g) crosses = crosses || s0[g] != s1[g];
        CHECK(crosses);
      }
      prev = cur;
      prev_loc = loc;
    }
  }
}

TEST_CASE("seeded determinism") {
  Rng data(31);
  const WeightedPointSet P = gen_uniform_box(800, 2, data);
  Rng a(32), b(32);
  const PolynomialPartition p1 = build_partition(P, Rational(16), a);
  const PolynomialPartition p2 = build_partition(P, Rational(16), b);
  CHECK(to_json(p1) == to_json(p2));
}

TEST_CASE("partition JSON round trip") {
  Rng data(41);
  const WeightedPointSet P = gen_uniform_box(500, 3, data);
  Rng rng(42);
  const PolynomialPartition part = build_partition(P, Rational(12), rng);
  const nlohmann::json j = to_json(part);
  const PolynomialPartition back = partition_from_json(nlohmann::json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(back.cells() == part.cells());
  CHECK(back.exceptional() == part.exceptional());
  Rng fresh(43);
  const WeightedPointSet Q = gen_uniform_box(200, 3, fresh);
  for (std::size_t i = 0; i < Q.size(); ++i) {
    const Location x = part.locate(Q.point(i));
    const Location y = back.locate(Q.point(i));
    CHECK(x.exceptional == y.exceptional);
    if (!x.exceptional) CHECK(x.cell == y.cell);
  }
  const nlohmann::json st = to_json(part.stats());
  CHECK(st["degree"] == part.degree());
}

TEST_CASE("compact keeps locate") {
  Rng data(51);
  const WeightedPointSet P = gen_uniform_box(300, 2, data);
  Rng rng(52);
  PolynomialPartition part = build_partition(P, Rational(8), rng);
  std::vector<Location> before;
  for (std::size_t i = 0; i < P.size(); ++i) before.push_back(part.locate(P.point(i)));
  const std::size_t t = part.cell_count();
  part.compact();
  CHECK(part.cell_count() == t);
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Location loc = part.locate(P.point(i));
    CHECK(loc.exceptional == before[i].exceptional);
    CHECK(loc.cell == before[i].cell);
  }
}
