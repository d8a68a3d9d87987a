#include <benchmark/benchmark.h>

#include "ppart/dissector.hpp"
#include "ppart/partition.hpp"
#include "ppart/tree.hpp"
#include "ppart/workload.hpp"

using namespace ppart;

namespace {

void BM_BuildTree(benchmark::State& state) {
  Rng rng(1);
  const WeightedPointSet P = gen_uniform_box(static_cast<std::size_t>(state.range(0)), 2, rng);
  TreeParams params;
  params.r = 16;
  for (auto _ : state) benchmark::DoNotOptimize(build_tree(P, params));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildTree)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond)->Complexity();

void BM_DiskCount(benchmark::State& state) {
  Rng rng(2);
  TreeParams params;
  params.r = 16;
  const PartitionTree t = build_tree(gen_uniform_box(static_cast<std::size_t>(state.range(0)), 2, rng), params);
  Rng qr(3);
  std::vector<SemialgebraicRange> disks;
  for (int i = 0; i < 64; ++i) disks.push_back(random_disk(qr));
  std::size_t i = 0;
  double nodes = 0.0;
  for (auto _ : state) {
    const auto c = t.count(disks[i++ % disks.size()]);
    nodes += static_cast<double>(c.stats.nodes_visited);
  }
  state.counters["nodes_visited"] = benchmark::Counter(nodes, benchmark::Counter::kAvgIterations);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DiskCount)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMicrosecond)->Complexity();

void BM_Partition(benchmark::State& state) {
  Rng rng(4);
  const WeightedPointSet P = gen_uniform_box(20000, 2, rng);
  const Rational r(state.range(0));
  for (auto _ : state) {
    Rng br(5);
    benchmark::DoNotOptimize(build_partition(P, r, br));
  }
}
BENCHMARK(BM_Partition)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

void BM_Dissector(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Rng rng(6);
  const WeightedPointSet P = gen_uniform_box(k * 32, 2, rng);
  DissectInput in;
  in.dimension = 2;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> fam(32);
    for (std::size_t j = 0; j < fam.size(); ++j) fam[j] = f * 32 + j;
    in.families.push_back(std::move(fam));
  }
  for (auto _ : state) benchmark::DoNotOptimize(build_dissector(in, P, rng));
}
BENCHMARK(BM_Dissector)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

void BM_EvalSign(benchmark::State& state) {
  Rng rng(7);
  const WeightedPointSet P = gen_uniform_box(4096, 2, rng);
  const MultiPoly x = MultiPoly::variable(2, 0);
  const MultiPoly y = MultiPoly::variable(2, 1);
  MultiPoly f = MultiPoly::constant(2, Rational(1, 3));
  for (int i = 0; i < state.range(0); ++i) f = f * (x - y * MultiPoly::constant(2, Rational(i + 1, 7)));
  const SignEvaluator ev(f);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.sign(P.point(i % P.size()), P.approx(i % P.size())));
    ++i;
  }
}
BENCHMARK(BM_EvalSign)->RangeMultiplier(2)->Range(2, 32);

}  // namespace
BENCHMARK_MAIN();
