#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "commands.hpp"
#include "ppart/errors.hpp"

using namespace ppart;
using namespace ppart::cli;

namespace {

// Shared tree flags; --fuzz-eps takes an exact rational such as 1/1073741824.
void add_tree_flags(CLI::App* sub, TreeParams& p, std::string& strategy, std::string& fuzz_eps) {
  sub->add_option("--r", p.r, "fan-out parameter (>= 2)")->capture_default_str();
  sub->add_option("--n0", p.n0, "leaf threshold (>= 1)")->capture_default_str();
  sub->add_option("--strategy", strategy, "exceptional-set strategy")
      ->check(CLI::IsMember({"inline", "patches2d", "fuzzy"}))
      ->capture_default_str();
  sub->add_option("--fuzz-eps", fuzz_eps, "perturbation magnitude for --strategy fuzzy")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial-partitioning range searching"};
  app.require_subcommand(1);
  const std::uint64_t seed0 = default_seed();

  GenOptions gen;
  gen.seed = seed0;
  auto* g = app.add_subcommand("gen", "generate a points CSV");
  g->add_option("--dist", gen.distribution, "uniform-box, gaussian-clusters, on-circle, on-cubic, on-variety, grid")
      ->capture_default_str();
  g->add_option("--n", gen.n, "number of points (grid: points per side)")->capture_default_str();
  g->add_option("--d", gen.d, "dimension")->capture_default_str();
  g->add_option("--seed", gen.seed, "generator seed (default PPART_SEED or 1)")->capture_default_str();
  g->add_flag("--integer-weights", gen.integer_weights, "weights uniform in 1..10 instead of 1");
  g->add_option("--poly", gen.poly_file, "JSON polynomial for on-variety");
  g->add_option("-o,--output", gen.output, "output file (default stdout)");

  RangesOptions rng_opts;
  rng_opts.seed = seed0;
  auto* rg = app.add_subcommand("ranges", "generate a ranges JSON file");
  rg->add_option("--kind", rng_opts.kind, "halfspace, ball, disk, simplex, annulus, conjunction")->capture_default_str();
  rg->add_option("--count", rng_opts.count, "number of ranges")->capture_default_str();
  rg->add_option("--d", rng_opts.d, "dimension")->capture_default_str();
  rg->add_option("--seed", rng_opts.seed, "generator seed (default PPART_SEED or 1)")->capture_default_str();
  rg->add_option("-o,--output", rng_opts.output, "output file (default stdout)");

  BuildOptions build;
  build.params.seed = seed0;
  std::string build_strategy = "inline";
  std::string build_eps = "1/1073741824";
  auto* b = app.add_subcommand("build", "build a partition tree");
  b->add_option("points", build.points, "points CSV")->required();
  add_tree_flags(b, build.params, build_strategy, build_eps);
  b->add_option("--seed", build.params.seed, "build seed (default PPART_SEED or 1)")->capture_default_str();
  b->add_option("-o,--output", build.output, "tree JSON (default stdout)");
  b->add_option("--stats", build.stats_output, "partition and structure statistics JSON");

  QueryOptions query;
  std::string query_format = "json";
  auto* q = app.add_subcommand("query", "answer ranges with a built tree");
  q->add_option("tree", query.tree, "tree JSON")->required();
  q->add_option("ranges", query.ranges, "ranges JSON")->required();
  q->add_flag("--report", query.report, "include reported point indices");
  q->add_option("--format", query_format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  q->add_option("--threads", query.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  q->add_option("-o,--output", query.output, "output file (default stdout)");

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "compare tree answers with the brute-force oracle");
  v->add_option("points", verify.points, "points CSV")->required();
  v->add_option("ranges", verify.ranges, "ranges JSON")->required();
  v->add_option("tree", verify.tree, "tree JSON")->required();

  BenchOptions bench;
  auto* be = app.add_subcommand("bench", "run a scaling workload and fit log-log slopes");
  be->add_option("workload", bench.workload, "workload JSON")->required();
  be->add_option("--threads", bench.threads, "worker threads for queries")->check(CLI::PositiveNumber)->capture_default_str();
  be->add_option("-o,--output", bench.output, "report file (default stdout)");

  SelftestOptions self;
  self.seed = seed0;
  auto* st = app.add_subcommand("selftest", "run the bundled invariant corpus");
  st->add_option("--seed", self.seed, "corpus seed (default PPART_SEED or 1)")->capture_default_str();
  st->add_option("--instances", self.instances, "number of random instances")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (g->parsed()) return cmd_gen(gen);
    if (rg->parsed()) return cmd_ranges(rng_opts);
    if (b->parsed()) {
      build.params.strategy = parse_strategy(build_strategy);
      build.params.fuzz_magnitude = parse_rational(build_eps);
      return cmd_build(build);
    }
    if (q->parsed()) {
      query.format = query_format == "csv" ? Format::Csv : Format::Json;
      return cmd_query(query);
    }
    if (v->parsed()) return cmd_verify(verify);
    if (be->parsed()) return cmd_bench(bench);
    if (st->parsed()) return cmd_selftest(self);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: parse: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
