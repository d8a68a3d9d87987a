#pragma once

// Seeded generators for point sets and query ranges.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ppart/points.hpp"
#include "ppart/ranges.hpp"
#include "ppart/rng.hpp"

namespace ppart {

enum class WeightMode { Unit, SmallIntegers };

// Coordinates on the grid 10^-9 in [0,1]^d.
WeightedPointSet gen_uniform_box(std::size_t n, int d, Rng& rng, WeightMode w = WeightMode::Unit);
// Five isotropic clusters (sigma 0.05) with centers in [0.2,0.8]^d.
WeightedPointSet gen_gaussian_clusters(std::size_t n, int d, Rng& rng, WeightMode w = WeightMode::Unit);
// Exactly on the unit circle: ((1-t^2)/(1+t^2), 2t/(1+t^2)) for dyadic t.
WeightedPointSet gen_on_circle(std::size_t n, Rng& rng, WeightMode w = WeightMode::Unit);
// Exactly on the nodal cubic y^2 = x^3 + x^2: (t^2 - 1, t(t^2 - 1)), t in [-3/2, 3/2].
WeightedPointSet gen_on_nodal_cubic(std::size_t n, Rng& rng, WeightMode w = WeightMode::Unit);
// Exactly on Z(f) for a planar f of degree 1 in y: y = -a0(x)/a1(x) at
// grid x in [0,1] with a1(x) != 0. Throws std::invalid_argument otherwise.
WeightedPointSet gen_on_variety(const MultiPoly& f, std::size_t n, Rng& rng, WeightMode w = WeightMode::Unit);
// side^d points (i + 1/2) / side.
WeightedPointSet gen_grid(std::size_t side, int d);

// Dispatch by name: uniform-box, gaussian-clusters, on-circle, on-cubic, grid.
WeightedPointSet generate_points(const std::string& distribution, std::size_t n, int d, Rng& rng,
                                 WeightMode w = WeightMode::Unit);

enum class RangeKind { Halfspace, Ball, Simplex, Annulus, Conjunction };
const char* to_string(RangeKind k);
RangeKind parse_range_kind(const std::string& name);

// Random range in R^d that typically meets [0,1]^d. Conjunctions join one
// to three atoms of degree at most 3.
SemialgebraicRange random_range(RangeKind kind, int d, Rng& rng);
// Disk with center uniform in [0,1]^2 and radius uniform in [0.05, 0.3].
SemialgebraicRange random_disk(Rng& rng);

// Least-squares slope of log y against log x. Needs two distinct positive x
// and positive y; throws std::invalid_argument otherwise.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace ppart
