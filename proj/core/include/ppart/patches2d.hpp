#pragma once

// Exceptional points on a plane curve. Z(f) is cut into x-monotone arcs:
// the critical x-values are the real roots of Res_y(f, df/dy), each open
// slab between them carries a fixed number of branches, and every point is
// filed under (slab, branch) with points over a critical x kept in a flat
// list. Queries on an arc reduce to intervals along x bounded by the roots
// of Res_y(f, g) for each range atom g.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ppart/points.hpp"
#include "ppart/ranges.hpp"
#include "ppart/rng.hpp"
#include "ppart/unipoly.hpp"
#include "ppart/weight.hpp"

namespace ppart {

struct ArcDecomposition {
  MultiPoly f;                     // as given
  Rational shear;                  // working coordinates x' = x - shear * y, y' = y
  MultiPoly sheared;               // f(x' + shear * y, y); its y-leading coefficient is constant
  std::vector<UniPoly> sheared_in_y;
  UniPoly critical;                // square-free part of Res_y(sheared, d sheared / dy)
  std::vector<IsolatingInterval> critical_xs;
  std::vector<Rational> slab_samples;  // one rational x' inside each open slab
  std::vector<int> branch_counts;      // per slab
  // Res_y(sheared, d sheared / dy) vanishes identically (f has a repeated
  // factor); every point is kept in the flat list.
  bool degenerate = false;

  std::size_t slab_count() const { return slab_samples.size(); }
  Rational working_x(std::span<const Rational> p) const { return p[0] - shear * p[1]; }
  // Real roots of f(x0, .) in working coordinates; x0 must not be critical.
  int branch_count_at(const Rational& x0) const;
  // (slab, branch) of a point of Z(f); nullopt above a critical x-value.
  std::optional<std::pair<std::size_t, int>> locate(std::span<const Rational> p) const;
};

struct Arc {
  std::size_t slab = 0;
  int branch = 0;
  std::vector<std::size_t> points;  // indices into the point set, ascending working x
  std::vector<Rational> xs;         // working x of each point
  IntervalBox bounds;
  WeightTree weights;
};

struct ArcStore {
  std::vector<Arc> arcs;
  std::vector<std::size_t> critical_points;
  IntervalBox bounds;  // of every stored point; empty axes when there are none
  std::size_t size() const;
};

// Precondition: f vanishes at every listed point (std::invalid_argument
// otherwise). Throws ShearBudgetExceeded after 16 rejected shears.
std::pair<ArcDecomposition, ArcStore> decompose_arcs(const MultiPoly& f, const WeightedPointSet& P,
                                                     std::span<const std::size_t> indices, Rng& rng);

struct ArcQueryStats {
  std::size_t points_scanned = 0;  // exact membership tests
  std::size_t arcs_resolved = 0;   // arcs decided by their bounding box
};

Weight arc_query(const ArcStore& store, const ArcDecomposition& decomp, const SemialgebraicRange& range,
                 const WeightedPointSet& P, ArcQueryStats* stats = nullptr);
void arc_report(const ArcStore& store, const ArcDecomposition& decomp, const SemialgebraicRange& range,
                const WeightedPointSet& P, std::vector<std::size_t>& out, ArcQueryStats* stats = nullptr);

// The exceptional set of one tree node: points grouped by the first curve
// (in the given order) that vanishes on them, one decomposition per curve.
class CurvePatches {
 public:
  CurvePatches() = default;
  static CurvePatches build(const std::vector<MultiPoly>& curves, const WeightedPointSet& P,
                            std::span<const std::size_t> indices, Rng& rng);

  std::size_t size() const;
  const std::vector<std::pair<ArcDecomposition, ArcStore>>& parts() const { return parts_; }

  Weight count(const SemialgebraicRange& range, const WeightedPointSet& P, ArcQueryStats* stats = nullptr) const;
  void report(const SemialgebraicRange& range, const WeightedPointSet& P, std::vector<std::size_t>& out,
              ArcQueryStats* stats = nullptr) const;
  // Every stored point lies on its curve and relocates to its recorded arc.
  bool audit(const WeightedPointSet& P) const;

  friend nlohmann::json to_json(const CurvePatches& c);
  friend CurvePatches curve_patches_from_json(const nlohmann::json& j, const WeightedPointSet& P);

 private:
  std::vector<std::pair<ArcDecomposition, ArcStore>> parts_;
};

nlohmann::json to_json(const CurvePatches& c);
CurvePatches curve_patches_from_json(const nlohmann::json& j, const WeightedPointSet& P);

}  // namespace ppart
