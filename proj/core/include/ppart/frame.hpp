#pragma once

#include <span>

#include "ppart/points.hpp"
#include "ppart/polycore.hpp"

namespace ppart {

// Affine change of coordinates local = (x - center) * 2^scale_exp. The
// dissectors of a partition are expressed in local coordinates so that the
// Veronese lift stays well scaled.
struct Frame {
  RationalPoint center;
  int scale_exp = 0;

  static Frame fit(const WeightedPointSet& points, std::span<const std::size_t> subset);
  bool identity() const;
  RationalPoint to_local(std::span<const Rational> x) const;
  // The same polynomial written in global coordinates.
  MultiPoly to_global(const MultiPoly& local) const;
};

}  // namespace ppart
