#include "ppart/tree.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "ppart/errors.hpp"

namespace ppart {

namespace {

constexpr int kMaxFuzzyLevel = 8;
constexpr int kFormatVersion = 1;

BoxClass classify_cell(const SemialgebraicRange& range, const std::vector<IntervalBox>& boxes) {
  bool all_inside = true;
  bool all_outside = true;
  for (const auto& b : boxes) {
    switch (range.classify(b)) {
      case BoxClass::Inside:
        all_outside = false;
        break;
      case BoxClass::Outside:
        all_inside = false;
        break;
      case BoxClass::Unknown:
        return BoxClass::Unknown;
    }
  }
  if (all_inside) return BoxClass::Inside;
  if (all_outside) return BoxClass::Outside;
  return BoxClass::Unknown;
}

Box tight_box(const WeightedPointSet& P, std::span<const std::size_t> idx) {
  Box b;
  auto first = P.point(idx.front());
  b.lo.assign(first.begin(), first.end());
  b.hi.assign(first.begin(), first.end());
  for (std::size_t i : idx.subspan(1)) {
    auto p = P.point(i);
    for (std::size_t v = 0; v < p.size(); ++v) {
      if (p[v] < b.lo[v]) b.lo[v] = p[v];
      if (p[v] > b.hi[v]) b.hi[v] = p[v];
    }
  }
  return b;
}

nlohmann::json box_to_json(const Box& b) {
  nlohmann::json lo = nlohmann::json::array();
  nlohmann::json hi = nlohmann::json::array();
  for (const auto& v : b.lo) lo.push_back(to_string(v));
  for (const auto& v : b.hi) hi.push_back(to_string(v));
  return nlohmann::json::array({std::move(lo), std::move(hi)});
}

Box box_from_json(const nlohmann::json& j) {
  Box b;
  for (const auto& v : j.at(0)) b.lo.push_back(parse_rational(v.get<std::string>()));
  for (const auto& v : j.at(1)) b.hi.push_back(parse_rational(v.get<std::string>()));
  if (b.lo.size() != b.hi.size()) throw ParseError("box corners differ in dimension");
  return b;
}

void collect_patch_points(const CurvePatches& c, std::vector<std::size_t>& out) {
  for (const auto& [dc, store] : c.parts()) {
    out.insert(out.end(), store.critical_points.begin(), store.critical_points.end());
    for (const auto& arc : store.arcs) out.insert(out.end(), arc.points.begin(), arc.points.end());
  }
}

}  // namespace

const char* to_string(ExceptionalStrategy s) {
  switch (s) {
    case ExceptionalStrategy::Inline:
      return "inline";
    case ExceptionalStrategy::Patches2D:
      return "patches2d";
    case ExceptionalStrategy::Fuzzy:
      return "fuzzy";
  }
  return "inline";
}

ExceptionalStrategy parse_strategy(const std::string& name) {
  if (name == "inline") return ExceptionalStrategy::Inline;
  if (name == "patches2d") return ExceptionalStrategy::Patches2D;
  if (name == "fuzzy") return ExceptionalStrategy::Fuzzy;
  throw std::invalid_argument("unknown exceptional strategy \"" + name + "\" (inline, patches2d, fuzzy)");
}

void TreeParams::validate() const {
  if (r < 2) throw std::invalid_argument("tree parameter r must be at least 2");
  if (n0 < 1) throw std::invalid_argument("tree parameter n0 must be at least 1");
  if (strategy == ExceptionalStrategy::Fuzzy && sgn(fuzz_magnitude) <= 0) {
    throw std::invalid_argument("fuzzy strategy needs a positive perturbation magnitude");
  }
}

QueryStats& QueryStats::operator+=(const QueryStats& o) {
  nodes_visited += o.nodes_visited;
  cells_inside += o.cells_inside;
  cells_outside += o.cells_outside;
  cells_unknown += o.cells_unknown;
  leaf_points_scanned += o.leaf_points_scanned;
  exceptional_points_scanned += o.exceptional_points_scanned;
  return *this;
}

std::vector<Box> cell_summary(const WeightedPointSet& P, std::vector<std::size_t> indices, std::size_t max_boxes) {
  std::vector<Box> out;
  if (indices.empty()) return out;
  const auto d = static_cast<std::size_t>(P.dimension());
  std::vector<std::vector<std::size_t>> groups{std::move(indices)};
  // Split the largest group at the median of its widest axis.
  while (groups.size() < max_boxes) {
    auto largest = std::max_element(groups.begin(), groups.end(),
                                    [](const auto& a, const auto& b) { return a.size() < b.size(); });
    if (largest->size() < 2) break;
    std::vector<std::size_t> g = std::move(*largest);
    groups.erase(largest);
    std::size_t axis = 0;
    double widest = -1.0;
    for (std::size_t v = 0; v < d; ++v) {
      double lo = INFINITY;
      double hi = -INFINITY;
      for (std::size_t i : g) {
        lo = std::min(lo, P.approx(i)[v]);
        hi = std::max(hi, P.approx(i)[v]);
      }
      if (hi - lo > widest) {
        widest = hi - lo;
        axis = v;
      }
    }
    const std::size_t half = g.size() / 2;
    std::nth_element(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(half), g.end(),
                     [&](std::size_t a, std::size_t b) { return P.approx(a)[axis] < P.approx(b)[axis]; });
    groups.emplace_back(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(half));
    groups.emplace_back(g.begin() + static_cast<std::ptrdiff_t>(half), g.end());
  }
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(tight_box(P, g));
  return out;
}

RationalPoint perturbation(int dimension, const Rational& magnitude, int level, std::uint64_t seed, std::size_t index) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(level) * 0x9e3779b97f4a7c15ULL +
                                                       static_cast<std::uint64_t>(index)));
  Rational scale = magnitude / dimension;
  mpq_div_2exp(scale.get_mpq_t(), scale.get_mpq_t(), static_cast<mp_bitcnt_t>(level + 20));
  RationalPoint out(static_cast<std::size_t>(dimension));
  for (int k = 0; k < dimension; ++k) {
    const auto u = static_cast<long>(splitmix64(h + static_cast<std::uint64_t>(k)) >> 43);  // 21 bits
    out[static_cast<std::size_t>(k)] = scale * Rational(u - (1L << 20));
  }
  return out;
}

PartitionTree PartitionTree::build(WeightedPointSet points, const TreeParams& params) {
  params.validate();
  if (points.empty()) throw std::invalid_argument("build_tree: empty point set");
  return build_level(std::make_shared<const WeightedPointSet>(std::move(points)), params, 0);
}

PartitionTree PartitionTree::build_level(std::shared_ptr<const WeightedPointSet> points, const TreeParams& params,
                                         int level) {
  PartitionTree t;
  t.points_ = std::move(points);
  t.params_ = params;
  t.level_ = level;
  std::vector<std::size_t> all(t.points_->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  t.build_node(all, 0, Rng(params.seed).fork(0x5eed0000ULL + static_cast<std::uint64_t>(level)));
  return t;
}

long PartitionTree::build_node(const std::vector<std::size_t>& subset, int depth, Rng rng) {
  const auto id = static_cast<long>(nodes_.size());
  nodes_.emplace_back();
  nodes_.back().depth = depth;
  const WeightedPointSet& P = *points_;
  if (subset.size() <= params_.n0) {
    nodes_.back().points = subset;
    return id;
  }
  const long r = std::min<long>(params_.r, static_cast<long>(subset.size()));
  Rng prng = rng.fork(0);
  auto part = std::make_shared<PolynomialPartition>(build_partition(P, subset, Rational(r), prng, params_.partition));

  std::vector<CellEntry> cells(part->cell_count());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& members = part->cells()[c];
    Weight w;
    for (std::size_t i : members) w += Weight(P.weight(i));
    cells[c].weight = w;
    cells[c].count = members.size();
    cells[c].boxes = cell_summary(P, members);
    for (const auto& b : cells[c].boxes) cells[c].enclosures.push_back(IntervalBox::of(b));
  }

  const std::vector<std::size_t>& ex = part->exceptional();
  ExceptionalStrategy kind = ExceptionalStrategy::Inline;
  if (ex.size() > params_.n0) {
    if (params_.strategy == ExceptionalStrategy::Patches2D && P.dimension() == 2) kind = ExceptionalStrategy::Patches2D;
    if (params_.strategy == ExceptionalStrategy::Fuzzy) kind = ExceptionalStrategy::Fuzzy;
  }
  {
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.leaf = false;
    node.exceptional_kind = kind;
    node.exceptional_size = ex.size();
    switch (kind) {
      case ExceptionalStrategy::Inline:
        node.exceptional = ex;
        break;
      case ExceptionalStrategy::Patches2D: {
        std::vector<MultiPoly> curves;
        curves.reserve(part->dissectors().size());
        for (const auto& g : part->dissectors()) curves.push_back(part->frame().to_global(g));
        Rng patch_rng = rng.fork(1);
        node.patches = CurvePatches::build(curves, P, ex, patch_rng);
        break;
      }
      case ExceptionalStrategy::Fuzzy: {
        if (level_ + 1 > kMaxFuzzyLevel) {
          throw PerturbationExhausted("fuzzy perturbation nesting exceeds depth " + std::to_string(kMaxFuzzyLevel));
        }
        WeightedPointSet moved(P.dimension());
        moved.reserve(ex.size());
        for (std::size_t i : ex) {
          RationalPoint p = P.point_copy(i);
          const RationalPoint off = perturbation(P.dimension(), params_.fuzz_magnitude, level_ + 1, params_.seed, i);
          for (std::size_t v = 0; v < p.size(); ++v) p[v] += off[v];
          moved.add(p, P.weight(i));
        }
        TreeParams child_params = params_;
        child_params.seed = rng.fork(2).next();
        node.fuzzy.tree = std::make_shared<const PartitionTree>(
            build_level(std::make_shared<const WeightedPointSet>(std::move(moved)), child_params, level_ + 1));
        node.fuzzy.original = ex;
        break;
      }
    }
  }
  std::vector<std::vector<std::size_t>> members(part->cells().begin(), part->cells().end());
  part->compact();
  nodes_[static_cast<std::size_t>(id)].partition = part;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    cells[c].child = build_node(members[c], depth + 1, rng.fork(16 + c));
    std::vector<std::size_t>().swap(members[c]);
  }
  nodes_[static_cast<std::size_t>(id)].cells = std::move(cells);
  return id;
}

void PartitionTree::count_node(long id, const SemialgebraicRange& range, Weight& acc, bool& fuzzy,
                               QueryStats& st) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  const WeightedPointSet& P = *points_;
  ++st.nodes_visited;
  if (node.leaf) {
    for (std::size_t i : node.points) {
      ++st.leaf_points_scanned;
      if (range.contains(P.point(i), P.approx(i))) acc += Weight(P.weight(i));
    }
    return;
  }
  for (const auto& cell : node.cells) {
    switch (classify_cell(range, cell.enclosures)) {
      case BoxClass::Inside:
        ++st.cells_inside;
        acc += cell.weight;
        break;
      case BoxClass::Outside:
        ++st.cells_outside;
        break;
      case BoxClass::Unknown:
        ++st.cells_unknown;
        count_node(cell.child, range, acc, fuzzy, st);
        break;
    }
  }
  switch (node.exceptional_kind) {
    case ExceptionalStrategy::Inline:
      for (std::size_t i : node.exceptional) {
        ++st.exceptional_points_scanned;
        if (range.contains(P.point(i), P.approx(i))) acc += Weight(P.weight(i));
      }
      break;
    case ExceptionalStrategy::Patches2D: {
      ArcQueryStats as;
      acc += node.patches.count(range, P, &as);
      st.exceptional_points_scanned += as.points_scanned;
      break;
    }
    case ExceptionalStrategy::Fuzzy: {
      const CountResult sub = node.fuzzy.tree->count(range);
      acc += Weight(sub.weight);
      st += sub.stats;
      fuzzy = true;
      break;
    }
  }
}

void PartitionTree::collect(long id, std::vector<std::size_t>& out) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.leaf) {
    out.insert(out.end(), node.points.begin(), node.points.end());
    return;
  }
  for (const auto& cell : node.cells) collect(cell.child, out);
  switch (node.exceptional_kind) {
    case ExceptionalStrategy::Inline:
      out.insert(out.end(), node.exceptional.begin(), node.exceptional.end());
      break;
    case ExceptionalStrategy::Patches2D:
      collect_patch_points(node.patches, out);
      break;
    case ExceptionalStrategy::Fuzzy:
      out.insert(out.end(), node.fuzzy.original.begin(), node.fuzzy.original.end());
      break;
  }
}

void PartitionTree::report_node(long id, const SemialgebraicRange& range, std::vector<std::size_t>& out, bool& fuzzy,
                                QueryStats& st) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  const WeightedPointSet& P = *points_;
  ++st.nodes_visited;
  if (node.leaf) {
    for (std::size_t i : node.points) {
      ++st.leaf_points_scanned;
      if (range.contains(P.point(i), P.approx(i))) out.push_back(i);
    }
    return;
  }
  for (const auto& cell : node.cells) {
    switch (classify_cell(range, cell.enclosures)) {
      case BoxClass::Inside:
        ++st.cells_inside;
        collect(cell.child, out);
        break;
      case BoxClass::Outside:
        ++st.cells_outside;
        break;
      case BoxClass::Unknown:
        ++st.cells_unknown;
        report_node(cell.child, range, out, fuzzy, st);
        break;
    }
  }
  switch (node.exceptional_kind) {
    case ExceptionalStrategy::Inline:
      for (std::size_t i : node.exceptional) {
        ++st.exceptional_points_scanned;
        if (range.contains(P.point(i), P.approx(i))) out.push_back(i);
      }
      break;
    case ExceptionalStrategy::Patches2D: {
      ArcQueryStats as;
      node.patches.report(range, P, out, &as);
      st.exceptional_points_scanned += as.points_scanned;
      break;
    }
    case ExceptionalStrategy::Fuzzy: {
      const ReportResult sub = node.fuzzy.tree->report(range);
      for (std::size_t i : sub.indices) out.push_back(node.fuzzy.original[i]);
      st += sub.stats;
      fuzzy = true;
      break;
    }
  }
}

CountResult PartitionTree::count(const SemialgebraicRange& range) const {
  if (range.dimension() != points_->dimension()) throw DimensionMismatch("query range dimension mismatch");
  CountResult res;
  Weight acc;
  count_node(0, range, acc, res.fuzzy, res.stats);
  res.weight = acc.value();
  return res;
}

ReportResult PartitionTree::report(const SemialgebraicRange& range) const {
  if (range.dimension() != points_->dimension()) throw DimensionMismatch("query range dimension mismatch");
  ReportResult res;
  report_node(0, range, res.indices, res.fuzzy, res.stats);
  std::sort(res.indices.begin(), res.indices.end());
  return res;
}

void PartitionTree::accumulate(StructureStats& s, int depth_offset) const {
  s.fuzzy_nesting = std::max(s.fuzzy_nesting, level_);
  for (const auto& node : nodes_) {
    const int depth = node.depth + depth_offset;
    ++s.node_count;
    s.depth = std::max(s.depth, depth);
    if (node.leaf) {
      ++s.leaf_count;
      s.stored_references += node.points.size();
      continue;
    }
    if (s.max_exceptional_per_level.size() <= static_cast<std::size_t>(depth)) {
      s.max_exceptional_per_level.resize(static_cast<std::size_t>(depth) + 1, 0);
    }
    auto& m = s.max_exceptional_per_level[static_cast<std::size_t>(depth)];
    m = std::max(m, node.exceptional_size);
    switch (node.exceptional_kind) {
      case ExceptionalStrategy::Inline:
        s.inline_exceptional += node.exceptional.size();
        s.stored_references += node.exceptional.size();
        break;
      case ExceptionalStrategy::Patches2D:
        s.patch_points += node.patches.size();
        s.stored_references += node.patches.size();
        break;
      case ExceptionalStrategy::Fuzzy:
        s.fuzzy_points += node.fuzzy.original.size();
        s.stored_references += node.fuzzy.original.size();
        node.fuzzy.tree->accumulate(s, depth + 1);
        break;
    }
  }
}

StructureStats PartitionTree::structure_stats() const {
  StructureStats s;
  accumulate(s, 0);
  return s;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json points_to_json(const WeightedPointSet& P) {
  nlohmann::json coords = nlohmann::json::array();
  nlohmann::json weights = nlohmann::json::array();
  for (std::size_t i = 0; i < P.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : P.point(i)) row.push_back(to_string(c));
    coords.push_back(std::move(row));
    weights.push_back(to_string(P.weight(i)));
  }
  return {{"d", P.dimension()}, {"coords", std::move(coords)}, {"weights", std::move(weights)}};
}

WeightedPointSet points_from_json(const nlohmann::json& j) {
  try {
    WeightedPointSet P(j.at("d").get<int>());
    const auto& coords = j.at("coords");
    const auto& weights = j.at("weights");
    if (coords.size() != weights.size()) throw ParseError("point and weight counts differ");
    P.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
      RationalPoint p;
      for (const auto& c : coords[i]) p.push_back(parse_rational(c.get<std::string>()));
      if (static_cast<int>(p.size()) != P.dimension()) throw ParseError("point has the wrong dimension");
      P.add(p, parse_rational(weights[i].get<std::string>()));
    }
    return P;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed point set: ") + e.what());
  }
}

nlohmann::json to_json(const PartitionTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& node : t.nodes_) {
    nlohmann::json n;
    n["depth"] = node.depth;
    n["leaf"] = node.leaf;
    if (node.leaf) {
      n["points"] = node.points;
      nodes.push_back(std::move(n));
      continue;
    }
    n["partition"] = to_json(*node.partition);
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : node.cells) {
      nlohmann::json boxes = nlohmann::json::array();
      for (const auto& b : c.boxes) boxes.push_back(box_to_json(b));
      cells.push_back(
          {{"weight", to_string(c.weight.value())}, {"count", c.count}, {"boxes", std::move(boxes)}, {"child", c.child}});
    }
    n["cells"] = std::move(cells);
    n["exceptional_kind"] = to_string(node.exceptional_kind);
    n["exceptional_size"] = node.exceptional_size;
    switch (node.exceptional_kind) {
      case ExceptionalStrategy::Inline:
        n["exceptional"] = node.exceptional;
        break;
      case ExceptionalStrategy::Patches2D:
        n["patches"] = to_json(node.patches);
        break;
      case ExceptionalStrategy::Fuzzy:
        n["fuzzy"] = {{"tree", to_json(*node.fuzzy.tree)}, {"original", node.fuzzy.original}};
        break;
    }
    nodes.push_back(std::move(n));
  }
  return {{"format", "ppart-tree"},
          {"version", kFormatVersion},
          {"params",
           {{"r", t.params_.r},
            {"n0", t.params_.n0},
            {"strategy", to_string(t.params_.strategy)},
            {"fuzz_magnitude", to_string(t.params_.fuzz_magnitude)},
            {"seed", t.params_.seed},
            {"max_trials", t.params_.partition.dissect.max_trials},
            {"exact_limit", t.params_.partition.dissect.exact_limit}}},
          {"level", t.level_},
          {"points", points_to_json(*t.points_)},
          {"nodes", std::move(nodes)}};
}

PartitionTree tree_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", std::string()) != "ppart-tree") throw ParseError("not a ppart tree file");
    if (j.at("version").get<int>() != kFormatVersion) throw ParseError("unsupported tree format version");
    PartitionTree t;
    const auto& p = j.at("params");
    t.params_.r = p.at("r").get<long>();
    t.params_.n0 = p.at("n0").get<std::size_t>();
    t.params_.strategy = parse_strategy(p.at("strategy").get<std::string>());
    t.params_.fuzz_magnitude = parse_rational(p.at("fuzz_magnitude").get<std::string>());
    t.params_.seed = p.at("seed").get<std::uint64_t>();
    t.params_.partition.dissect.max_trials = p.value("max_trials", 1000);
    t.params_.partition.dissect.exact_limit = p.value("exact_limit", std::size_t{48});
    t.level_ = j.at("level").get<int>();
    t.points_ = std::make_shared<const WeightedPointSet>(points_from_json(j.at("points")));
    const WeightedPointSet& P = *t.points_;
    const auto& nodes = j.at("nodes");
    auto check_index = [&](std::size_t i) {
      if (i >= P.size()) throw ParseError("tree refers to missing point " + std::to_string(i));
    };
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto& n = nodes[k];
      PartitionTree::Node node;
      node.depth = n.at("depth").get<int>();
      node.leaf = n.at("leaf").get<bool>();
      if (node.leaf) {
        node.points = n.at("points").get<std::vector<std::size_t>>();
        for (std::size_t i : node.points) check_index(i);
        t.nodes_.push_back(std::move(node));
        continue;
      }
      node.partition = std::make_shared<const PolynomialPartition>(partition_from_json(n.at("partition")));
      for (const auto& c : n.at("cells")) {
        PartitionTree::CellEntry cell;
        cell.weight = Weight(parse_rational(c.at("weight").get<std::string>()));
        cell.count = c.at("count").get<std::size_t>();
        for (const auto& b : c.at("boxes")) {
          cell.boxes.push_back(box_from_json(b));
          cell.enclosures.push_back(IntervalBox::of(cell.boxes.back()));
        }
        cell.child = c.at("child").get<long>();
        if (cell.child <= static_cast<long>(k) || cell.child >= static_cast<long>(nodes.size())) {
          throw ParseError("cell refers to an invalid child node");
        }
        node.cells.push_back(std::move(cell));
      }
      node.exceptional_kind = parse_strategy(n.at("exceptional_kind").get<std::string>());
      node.exceptional_size = n.at("exceptional_size").get<std::size_t>();
      switch (node.exceptional_kind) {
        case ExceptionalStrategy::Inline:
          node.exceptional = n.at("exceptional").get<std::vector<std::size_t>>();
          for (std::size_t i : node.exceptional) check_index(i);
          break;
        case ExceptionalStrategy::Patches2D:
          node.patches = curve_patches_from_json(n.at("patches"), P);
          break;
        case ExceptionalStrategy::Fuzzy:
          node.fuzzy.tree = std::make_shared<const PartitionTree>(tree_from_json(n.at("fuzzy").at("tree")));
          node.fuzzy.original = n.at("fuzzy").at("original").get<std::vector<std::size_t>>();
          for (std::size_t i : node.fuzzy.original) check_index(i);
          if (node.fuzzy.original.size() != node.fuzzy.tree->points().size()) {
            throw ParseError("fuzzy child map does not match its point set");
          }
          break;
      }
      t.nodes_.push_back(std::move(node));
    }
    if (t.nodes_.empty()) throw ParseError("tree has no nodes");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed tree: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid tree: ") + e.what());
  }
}

nlohmann::json to_json(const StructureStats& s) {
  return {{"depth", s.depth},
          {"node_count", s.node_count},
          {"leaf_count", s.leaf_count},
          {"stored_references", s.stored_references},
          {"max_exceptional_per_level", s.max_exceptional_per_level},
          {"inline_exceptional", s.inline_exceptional},
          {"patch_points", s.patch_points},
          {"fuzzy_points", s.fuzzy_points},
          {"fuzzy_nesting", s.fuzzy_nesting}};
}

nlohmann::json to_json(const QueryStats& s) {
  return {{"nodes_visited", s.nodes_visited},
          {"cells_inside", s.cells_inside},
          {"cells_outside", s.cells_outside},
          {"cells_unknown", s.cells_unknown},
          {"leaf_points_scanned", s.leaf_points_scanned},
          {"exceptional_points_scanned", s.exceptional_points_scanned}};
}

}  // namespace ppart
