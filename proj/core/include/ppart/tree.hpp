#pragma once

// Constant fan-out partition tree. Each internal node stores a polynomial
// partition of its points, and per cell the total weight, a few axis boxes
// covering the cell's points and a child subtree. Exceptional points (on
// the zero set of the node's partition polynomial) go to an inline list,
// to curve patches (d = 2), or to a child tree over perturbed copies.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ppart/partition.hpp"
#include "ppart/patches2d.hpp"
#include "ppart/points.hpp"
#include "ppart/ranges.hpp"
#include "ppart/weight.hpp"

namespace ppart {

enum class ExceptionalStrategy { Inline, Patches2D, Fuzzy };
const char* to_string(ExceptionalStrategy s);
// "inline", "patches2d", "fuzzy"; throws std::invalid_argument.
ExceptionalStrategy parse_strategy(const std::string& name);

struct TreeParams {
  long r = 16;
  std::size_t n0 = 32;
  ExceptionalStrategy strategy = ExceptionalStrategy::Inline;
  Rational fuzz_magnitude{1, 1 << 30};
  std::uint64_t seed = 0;
  PartitionOptions partition;

  // Throws std::invalid_argument.
  void validate() const;
};

struct QueryStats {
  std::size_t nodes_visited = 0;
  std::size_t cells_inside = 0;
  std::size_t cells_outside = 0;
  std::size_t cells_unknown = 0;
  std::size_t leaf_points_scanned = 0;
  std::size_t exceptional_points_scanned = 0;

  QueryStats& operator+=(const QueryStats& o);
};

struct CountResult {
  Rational weight;
  bool fuzzy = false;
  QueryStats stats;
};

struct ReportResult {
  std::vector<std::size_t> indices;  // ascending
  bool fuzzy = false;
  QueryStats stats;
};

struct StructureStats {
  int depth = 0;
  std::size_t node_count = 0;
  std::size_t leaf_count = 0;
  std::size_t stored_references = 0;  // leaf, exceptional and fuzzy-map entries
  std::vector<std::size_t> max_exceptional_per_level;
  std::size_t inline_exceptional = 0;
  std::size_t patch_points = 0;
  std::size_t fuzzy_points = 0;
  int fuzzy_nesting = 0;
};

class PartitionTree {
 public:
  struct CellEntry {
    Weight weight;
    std::size_t count = 0;
    std::vector<Box> boxes;
    std::vector<IntervalBox> enclosures;
    long child = -1;
  };

  struct FuzzyChild {
    std::shared_ptr<const PartitionTree> tree;
    std::vector<std::size_t> original;  // child point index -> index in this tree's point set
  };

  struct Node {
    bool leaf = true;
    int depth = 0;
    std::vector<std::size_t> points;  // leaf only
    std::shared_ptr<const PolynomialPartition> partition;
    std::vector<CellEntry> cells;
    ExceptionalStrategy exceptional_kind = ExceptionalStrategy::Inline;
    std::vector<std::size_t> exceptional;  // inline list
    CurvePatches patches;
    FuzzyChild fuzzy;
    std::size_t exceptional_size = 0;
  };

  PartitionTree() = default;

  // Throws the partition errors and PerturbationExhausted.
  static PartitionTree build(WeightedPointSet points, const TreeParams& params);

  const WeightedPointSet& points() const { return *points_; }
  const TreeParams& params() const { return params_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int fuzzy_level() const { return level_; }

  CountResult count(const SemialgebraicRange& range) const;
  ReportResult report(const SemialgebraicRange& range) const;
  StructureStats structure_stats() const;

  friend nlohmann::json to_json(const PartitionTree& t);
  friend PartitionTree tree_from_json(const nlohmann::json& j);

 private:
  static PartitionTree build_level(std::shared_ptr<const WeightedPointSet> points, const TreeParams& params, int level);
  long build_node(const std::vector<std::size_t>& subset, int depth, Rng rng);
  void count_node(long id, const SemialgebraicRange& range, Weight& acc, bool& fuzzy, QueryStats& st) const;
  void report_node(long id, const SemialgebraicRange& range, std::vector<std::size_t>& out, bool& fuzzy,
                   QueryStats& st) const;
  void collect(long id, std::vector<std::size_t>& out) const;
  void accumulate(StructureStats& s, int depth_offset) const;

  std::shared_ptr<const WeightedPointSet> points_;
  TreeParams params_;
  int level_ = 0;
  std::vector<Node> nodes_;
};

inline PartitionTree build_tree(WeightedPointSet points, const TreeParams& params) {
  return PartitionTree::build(std::move(points), params);
}
inline CountResult query_count(const PartitionTree& t, const SemialgebraicRange& range) { return t.count(range); }
inline ReportResult query_report(const PartitionTree& t, const SemialgebraicRange& range) { return t.report(range); }

// Up to `max_boxes` tight boxes, splitting the largest group at the median
// of its widest axis; together they cover every listed point.
std::vector<Box> cell_summary(const WeightedPointSet& P, std::vector<std::size_t> indices, std::size_t max_boxes = 4);

// Offset of point `index` at fuzzy level `level`: Euclidean norm at most
// magnitude * 2^-level, a pure function of (seed, level, index).
RationalPoint perturbation(int dimension, const Rational& magnitude, int level, std::uint64_t seed, std::size_t index);

nlohmann::json to_json(const PartitionTree& t);
// Throws ParseError.
PartitionTree tree_from_json(const nlohmann::json& j);
nlohmann::json to_json(const StructureStats& s);
nlohmann::json to_json(const QueryStats& s);

nlohmann::json points_to_json(const WeightedPointSet& P);
WeightedPointSet points_from_json(const nlohmann::json& j);

}  // namespace ppart
