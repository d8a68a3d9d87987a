#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppart/errors.hpp"
#include "ppart/io.hpp"
#include "ppart/oracle.hpp"
#include "ppart/workload.hpp"

namespace ppart::cli {

namespace {

using Clock = std::chrono::steady_clock;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

WeightMode weight_mode(bool integer_weights) { return integer_weights ? WeightMode::SmallIntegers : WeightMode::Unit; }

SemialgebraicRange draw_range(const std::string& kind, int d, Rng& rng) {
  if (kind == "disk") {
    if (d != 2) throw std::invalid_argument("disk ranges are planar");
    return random_disk(rng);
  }
  return random_range(parse_range_kind(kind), d, rng);
}

PartitionTree read_tree(const std::string& path) {
  try {
    return tree_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.what(), path);
  }
}

// Runs f(i) for i in [0, count) on `threads` workers; results stay indexed.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Answer {
  Rational weight;
  bool fuzzy = false;
  QueryStats stats;
  std::vector<std::size_t> indices;
};

std::vector<Answer> answer_all(const PartitionTree& t, const std::vector<SemialgebraicRange>& ranges, bool report,
                               unsigned threads) {
  std::vector<Answer> out(ranges.size());
  parallel_for(ranges.size(), threads, [&](std::size_t i) {
    const CountResult c = t.count(ranges[i]);
    out[i].weight = c.weight;
    out[i].fuzzy = c.fuzzy;
    out[i].stats = c.stats;
    if (report) out[i].indices = t.report(ranges[i]).indices;
  });
  return out;
}

bool same_points(const WeightedPointSet& a, const WeightedPointSet& b) {
  if (a.size() != b.size() || a.dimension() != b.dimension()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.weight(i) != b.weight(i)) return false;
    if (!std::equal(a.point(i).begin(), a.point(i).end(), b.point(i).begin())) return false;
  }
  return true;
}

nlohmann::json index_diff(const std::vector<std::size_t>& expected, const std::vector<std::size_t>& got) {
  std::vector<std::size_t> missing;
  std::vector<std::size_t> extra;
  std::set_difference(expected.begin(), expected.end(), got.begin(), got.end(), std::back_inserter(missing));
  std::set_difference(got.begin(), got.end(), expected.begin(), expected.end(), std::back_inserter(extra));
  return {{"missing", missing}, {"extra", extra}};
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

nlohmann::json fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  }
  if (xs.size() < 4) return {{"slope", nullptr}, {"points", xs.size()}};
  const double slope = loglog_slope(xs, ys);
  // Intercept and RMS residual in natural-log space.
  double c = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) c += std::log(ys[i]) - slope * std::log(xs[i]);
  c /= static_cast<double>(xs.size());
  double rss = 0.0;
  nlohmann::json residuals = nlohmann::json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = std::log(ys[i]) - (c + slope * std::log(xs[i]));
    residuals.push_back(r);
    rss += r * r;
  }
  return {{"slope", slope},
          {"intercept", c},
          {"rms_residual", std::sqrt(rss / static_cast<double>(xs.size()))},
          {"residuals", residuals},
          {"points", xs.size()}};
}

nlohmann::json params_json(const TreeParams& p) {
  return {{"r", p.r},
          {"n0", p.n0},
          {"strategy", to_string(p.strategy)},
          {"fuzz_eps", to_string(p.fuzz_magnitude)},
          {"seed", p.seed}};
}

TreeParams params_from(const nlohmann::json& j, TreeParams p) {
  p.r = j.value("r", p.r);
  p.n0 = j.value("n0", p.n0);
  if (j.contains("strategy")) p.strategy = parse_strategy(j.at("strategy").get<std::string>());
  if (j.contains("fuzz_eps")) p.fuzz_magnitude = parse_rational(j.at("fuzz_eps").get<std::string>());
  p.seed = j.value("seed", p.seed);
  return p;
}

}  // namespace

std::uint64_t default_seed(std::uint64_t fallback) {
  const char* env = std::getenv("PPART_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  return *end == '\0' ? static_cast<std::uint64_t>(v) : fallback;
}

int cmd_gen(const GenOptions& o) {
  Rng rng(o.seed);
  WeightedPointSet P;
  if (o.distribution == "on-variety") {
    if (o.poly_file.empty()) throw std::invalid_argument("on-variety needs --poly");
    P = gen_on_variety(multipoly_from_json(read_json_file(o.poly_file)), o.n, rng, weight_mode(o.integer_weights));
  } else {
    P = generate_points(o.distribution, o.n, o.d, rng, weight_mode(o.integer_weights));
  }
  std::ostringstream out;
  out << "# ppart points distribution=" << o.distribution << " n=" << o.n << " d=" << o.d << " seed=" << o.seed << '\n';
  write_points_csv(out, P);
  write_text(o.output, out.str());
  return 0;
}

int cmd_ranges(const RangesOptions& o) {
  Rng rng(o.seed);
  std::vector<SemialgebraicRange> ranges;
  ranges.reserve(o.count);
  for (std::size_t i = 0; i < o.count; ++i) ranges.push_back(draw_range(o.kind, o.d, rng));
  nlohmann::json j = ranges_to_json(ranges);
  j["kind"] = o.kind;
  j["seed"] = o.seed;
  write_text(o.output, j.dump(1) + "\n");
  return 0;
}

int cmd_build(const BuildOptions& o) {
  WeightedPointSet P = read_points_csv_file(o.points);
  const auto t0 = Clock::now();
  const PartitionTree t = build_tree(std::move(P), o.params);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  write_text(o.output, to_json(t).dump() + "\n");
  if (!o.stats_output.empty()) {
    nlohmann::json stats{{"params", params_json(o.params)},
                         {"n", t.points().size()},
                         {"build_seconds", secs},
                         {"structure", to_json(t.structure_stats())}};
    const auto& root = t.nodes().front();
    if (!root.leaf) {
      nlohmann::json ps = to_json(root.partition->stats());
      // The tree releases per-cell index lists; sizes come from the cell entries.
      std::size_t max_cell = 0;
      for (const auto& c : root.cells) max_cell = std::max(max_cell, c.count);
      ps["cells"] = root.cells.size();
      ps["max_cell"] = max_cell;
      ps["exceptional"] = root.exceptional_size;
      stats["root_partition"] = std::move(ps);
    }
    write_text(o.stats_output, stats.dump(1) + "\n");
  }
  return 0;
}

int cmd_query(const QueryOptions& o) {
  const PartitionTree t = read_tree(o.tree);
  const auto ranges = read_ranges_file(o.ranges);
  const auto answers = answer_all(t, ranges, o.report, o.threads);
  if (o.format == Format::Csv) {
    std::ostringstream out;
    out << "index,weight,fuzzy,nodes_visited,cells_inside,cells_outside,cells_unknown,leaf_points_scanned,"
           "exceptional_points_scanned\n";
    for (std::size_t i = 0; i < answers.size(); ++i) {
      const auto& a = answers[i];
      out << i << ',' << to_decimal_string(a.weight) << ',' << (a.fuzzy ? 1 : 0) << ',' << a.stats.nodes_visited << ','
          << a.stats.cells_inside << ',' << a.stats.cells_outside << ',' << a.stats.cells_unknown << ','
          << a.stats.leaf_points_scanned << ',' << a.stats.exceptional_points_scanned << '\n';
    }
    write_text(o.output, out.str());
    return 0;
  }
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const auto& a = answers[i];
    nlohmann::json item{{"index", i}, {"weight", to_string(a.weight)}, {"fuzzy", a.fuzzy}, {"stats", to_json(a.stats)}};
    if (o.report) item["indices"] = a.indices;
    list.push_back(std::move(item));
  }
  const nlohmann::json out{{"tree_seed", t.params().seed}, {"answers", std::move(list)}};
  write_text(o.output, out.dump(1) + "\n");
  return 0;
}

int cmd_verify(const VerifyOptions& o) {
  const WeightedPointSet P = read_points_csv_file(o.points);
  const auto ranges = read_ranges_file(o.ranges);
  const PartitionTree t = read_tree(o.tree);
  if (!same_points(P, t.points())) {
    std::fprintf(stderr, "verify: the tree was built over a different point set\n");
    return 1;
  }
  std::size_t checked = 0;
  std::size_t fuzzy = 0;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto c = t.count(ranges[i]);
    const auto rep = t.report(ranges[i]);
    if (c.fuzzy || rep.fuzzy) {
      ++fuzzy;
      continue;
    }
    ++checked;
    const Rational expected = oracle_count(P, ranges[i]);
    const auto expected_idx = oracle_report(P, ranges[i]);
    if (c.weight != expected || rep.indices != expected_idx) {
      const nlohmann::json dump{{"range_index", i},
                                {"range", to_json(ranges[i])},
                                {"expected_weight", to_string(expected)},
                                {"got_weight", to_string(c.weight)},
                                {"report", index_diff(expected_idx, rep.indices)}};
      std::fprintf(stderr, "verify: FAIL at range %zu\n%s\n", i, dump.dump(1).c_str());
      return 1;
    }
  }
  std::printf("verify: PASS, %zu ranges checked against the oracle, %zu fuzzy answers skipped\n", checked, fuzzy);
  return 0;
}

int cmd_bench(const BenchOptions& o) {
  const nlohmann::json w = read_json_file(o.workload);
  nlohmann::json report;
  try {
    const auto& pts = w.at("points");
    const std::string dist = pts.value("distribution", std::string("uniform-box"));
    const int d = pts.value("d", 2);
    const std::uint64_t pseed = pts.at("seed").get<std::uint64_t>();
    const bool integer_weights = pts.value("weights", std::string("unit")) == "integer";
    const auto sizes = w.at("sizes").get<std::vector<std::size_t>>();
    if (sizes.size() < 4) throw std::invalid_argument("bench needs at least 4 sizes");
    const auto& qs = w.at("queries");
    const std::string kind = qs.value("kind", std::string("disk"));
    const std::size_t count = qs.value("count", std::size_t{100});
    const std::uint64_t qseed = qs.at("seed").get<std::uint64_t>();
    TreeParams params;
    params.seed = 1;
    params = params_from(w.value("tree", nlohmann::json::object()), params);
    const bool verify = w.value("verify", true);

    Rng qrng(qseed);
    std::vector<SemialgebraicRange> ranges;
    for (std::size_t i = 0; i < count; ++i) ranges.push_back(draw_range(kind, d, qrng));

    nlohmann::json records = nlohmann::json::array();
    std::vector<double> ns, build_times, mean_nodes, mean_unknown, mean_ms;
    for (std::size_t n : sizes) {
      Rng prng(pseed);
      WeightedPointSet P = generate_points(dist, n, d, prng, weight_mode(integer_weights));
      const std::size_t actual_n = P.size();
      auto t0 = Clock::now();
      const PartitionTree t = build_tree(std::move(P), params);
      const double build = std::chrono::duration<double>(Clock::now() - t0).count();

      std::vector<double> nodes(count), unknown(count), ms(count);
      std::vector<char> ok(count, 1);
      parallel_for(count, o.threads, [&](std::size_t i) {
        const auto q0 = Clock::now();
        const CountResult c = t.count(ranges[i]);
        ms[i] = std::chrono::duration<double, std::milli>(Clock::now() - q0).count();
        nodes[i] = static_cast<double>(c.stats.nodes_visited);
        unknown[i] = static_cast<double>(c.stats.cells_unknown);
        if (verify && !c.fuzzy) ok[i] = c.weight == oracle_count(t.points(), ranges[i]);
      });
      const bool verified = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
      records.push_back({{"n", actual_n},
                         {"build_seconds", build},
                         {"structure", to_json(t.structure_stats())},
                         {"nodes_visited", {{"mean", mean(nodes)}, {"median", median(nodes)}}},
                         {"cells_unknown", {{"mean", mean(unknown)}, {"median", median(unknown)}}},
                         {"query_ms", {{"mean", mean(ms)}, {"median", median(ms)}}},
                         {"counts_verified", verify ? nlohmann::json(verified) : nlohmann::json(nullptr)}});
      ns.push_back(static_cast<double>(actual_n));
      build_times.push_back(build);
      mean_nodes.push_back(mean(nodes));
      mean_unknown.push_back(mean(unknown));
      mean_ms.push_back(mean(ms));
    }
    report = {{"workload", w},
              {"params", params_json(params)},
              {"records", std::move(records)},
              {"fits",
               {{"nodes_visited_vs_n", fit(ns, mean_nodes)},
                {"cells_unknown_vs_n", fit(ns, mean_unknown)},
                {"query_ms_vs_n", fit(ns, mean_ms)},
                {"build_seconds_vs_n", fit(ns, build_times)}}},
              {"environment",
               {{"compiler", __VERSION__},
                {"hardware_threads", std::thread::hardware_concurrency()},
                {"query_threads", o.threads},
#ifdef NDEBUG
                {"assertions", false}
#else
                {"assertions", true}
#endif
               }}};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed workload: ") + e.what(), o.workload);
  }
  write_text(o.output, report.dump(1) + "\n");
  bool all_ok = true;
  for (const auto& r : report.at("records")) all_ok = all_ok && r.at("counts_verified") != false;
  return all_ok ? 0 : 1;
}

int cmd_selftest(const SelftestOptions& o) {
  constexpr RangeKind kinds[] = {RangeKind::Halfspace, RangeKind::Ball, RangeKind::Simplex, RangeKind::Annulus,
                                 RangeKind::Conjunction};
  const ExceptionalStrategy strategies[] = {ExceptionalStrategy::Inline, ExceptionalStrategy::Patches2D,
                                            ExceptionalStrategy::Fuzzy};
  const char* dists[] = {"uniform-box", "gaussian-clusters", "on-circle", "on-cubic"};
  std::size_t queries = 0;
  std::size_t failures = 0;
  for (int inst = 0; inst < o.instances; ++inst) {
    Rng rng(o.seed * 1000003 + static_cast<std::uint64_t>(inst));
    const std::string dist = dists[rng.below(4)];
    const int d = dist.rfind("on-", 0) == 0 ? 2 : 2 + static_cast<int>(rng.below(2));
    const std::size_t n = 1 + rng.below(400);
    const WeightedPointSet P = generate_points(dist, n, d, rng, WeightMode::SmallIntegers);
    TreeParams params;
    params.r = 2 + static_cast<long>(rng.below(15));
    params.n0 = 1 + rng.below(16);
    params.strategy = strategies[inst % 3];
    params.seed = rng.next();
    const PartitionTree t = build_tree(P, params);
    // Serialized trees must answer identically.
    const PartitionTree u = tree_from_json(nlohmann::json::parse(to_json(t).dump()));
    for (const auto& node : t.nodes()) {
      if (node.leaf) continue;
      std::size_t total = node.exceptional_size;
      for (const auto& c : node.cells) {
        total += c.count;
        if (static_cast<long>(c.count) * std::min<long>(params.r, static_cast<long>(node.partition->point_count())) >
            static_cast<long>(node.partition->point_count())) {
          ++failures;
        }
      }
      if (total != node.partition->point_count()) ++failures;
    }
    for (RangeKind k : kinds) {
      const auto range = random_range(k, d, rng);
      const auto c = t.count(range);
      const auto rep = t.report(range);
      ++queries;
      bool ok = c.weight == u.count(range).weight && rep.indices == u.report(range).indices;
      if (!c.fuzzy) ok = ok && c.weight == oracle_count(P, range);
      if (!rep.fuzzy) ok = ok && rep.indices == oracle_report(P, range);
      if (!ok) {
        ++failures;
        std::fprintf(stderr, "selftest: mismatch in instance %d (%s, n=%zu, d=%d, %s), range %s\n", inst, dist.c_str(), n,
                     d, to_string(params.strategy), to_string(k));
      }
    }
  }
  std::printf("selftest: %d instances, %zu queries, %zu failures\n", o.instances, queries, failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace ppart::cli
