#pragma once

// Brute-force ground truth: linear scans with exact membership.

#include <cstddef>
#include <vector>

#include "ppart/points.hpp"
#include "ppart/ranges.hpp"
#include "ppart/weight.hpp"

namespace ppart {

Rational oracle_count(const WeightedPointSet& P, const SemialgebraicRange& range);
// Ascending indices.
std::vector<std::size_t> oracle_report(const WeightedPointSet& P, const SemialgebraicRange& range);

}  // namespace ppart
