#pragma once

// r-partitioning polynomials built phase by phase from well-dissecting
// factors. The partition polynomial f is the product of every dissector;
// the cells are the final members of the splitting process and the
// exceptional set holds the points where some applied dissector vanishes.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ppart/dissector.hpp"
#include "ppart/frame.hpp"
#include "ppart/points.hpp"
#include "ppart/polycore.hpp"
#include "ppart/rng.hpp"

namespace ppart {

struct PhaseRecord {
  int index = 0;  // j, starting at 1
  long kappa = 0;
  std::vector<std::size_t> dissectors;  // indices into PolynomialPartition::dissectors()
  std::vector<long> family_counts;      // |L_j^(s)| for s = 0, 1, ...
};

// One member of the evolving family. Members split by a dissector point to
// their two children (-1 when that side received no input point); members
// never split are the cells.
struct Member {
  long dissector = -1;
  long plus = -1;
  long minus = -1;
  long cell = -1;
};

struct PartitionOptions {
  DissectOptions dissect;
};

struct PhaseStats {
  long kappa = 0;
  std::size_t dissectors = 0;
  int degree = 0;
  std::vector<long> family_counts;
};

struct PartitionStats {
  std::size_t n = 0;
  Rational r;
  int degree = 0;  // deg f
  int phases = 0;  // m
  std::size_t cells = 0;
  std::size_t exceptional = 0;
  std::size_t max_cell = 0;
  long total_trials = 0;
  std::vector<PhaseStats> per_phase;
};

struct Location {
  bool exceptional = true;
  std::size_t cell = 0;
};

class PolynomialPartition {
 public:
  PolynomialPartition() = default;

  int dimension() const { return dim_; }
  std::size_t point_count() const { return n_; }
  const Rational& r() const { return r_; }
  const Frame& frame() const { return frame_; }
  const std::vector<PhaseRecord>& phases() const { return phases_; }
  const std::vector<MultiPoly>& dissectors() const { return dissectors_; }
  const std::vector<Member>& members() const { return members_; }
  const std::vector<std::vector<std::size_t>>& cells() const { return cells_; }
  const std::vector<std::size_t>& exceptional() const { return exceptional_; }
  std::size_t cell_count() const { return cells_.size(); }
  long total_trials() const { return total_trials_; }

  // deg f without forming the product.
  int degree() const;
  // f_j of a phase and f = f_1 ... f_m, in local coordinates. Both are
  // formed on demand; for large partitions they can be expensive.
  MultiPoly phase_polynomial(std::size_t phase) const;
  MultiPoly f() const;
  // Sign of f at a point in global coordinates, as the product of the
  // dissector signs.
  Sign sign_of_f(std::span<const Rational> x) const;

  // Replays the splitting path of x (global coordinates).
  Location locate(std::span<const Rational> x) const;

  PartitionStats stats() const;

  // Releases the stored cell and exceptional index lists; locate, the
  // dissectors and cell_count stay valid. stats() afterwards reports empty cells.
  void compact();

  friend PolynomialPartition build_partition(const WeightedPointSet&, std::span<const std::size_t>, const Rational&,
                                             Rng&, const PartitionOptions&);
  friend nlohmann::json to_json(const PolynomialPartition& p);
  friend PolynomialPartition partition_from_json(const nlohmann::json& j);

 private:
  void rebuild_evaluators();

  int dim_ = 0;
  std::size_t n_ = 0;
  Rational r_;
  Frame frame_;
  std::vector<PhaseRecord> phases_;
  std::vector<MultiPoly> dissectors_;
  std::vector<SignEvaluator> evaluators_;
  std::vector<Member> members_;
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<std::size_t> exceptional_;
  long total_trials_ = 0;
};

// Builds an r-partitioning polynomial for the points listed in `subset`
// (indices into `points`); cells and the exceptional set refer to those
// indices. r is clamped to |subset|. Propagates TrialBudgetExceeded.
PolynomialPartition build_partition(const WeightedPointSet& points, std::span<const std::size_t> subset,
                                    const Rational& r, Rng& rng, const PartitionOptions& options = {});
PolynomialPartition build_partition(const WeightedPointSet& points, const Rational& r, Rng& rng,
                                    const PartitionOptions& options = {});

PartitionStats partition_stats(const PolynomialPartition& p);

// Smallest m with (8/7)^m >= r.
int phase_bound(const Rational& r);

nlohmann::json to_json(const PolynomialPartition& p);
PolynomialPartition partition_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PartitionStats& s);

}  // namespace ppart
