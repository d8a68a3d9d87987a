#include "ppart/points.hpp"

#include <stdexcept>

#include "ppart/errors.hpp"

namespace ppart {

void WeightedPointSet::add(std::span<const Rational> coords, const Rational& weight) {
  if (static_cast<int>(coords.size()) != dim_) throw DimensionMismatch("WeightedPointSet: wrong point dimension");
  if (sgn(weight) < 0) throw std::invalid_argument("WeightedPointSet: negative weight");
  // Stored values are canonical so that later comparisons are exact.
  for (const auto& c : coords) {
    coords_.push_back(c);
    coords_.back().canonicalize();
    approx_.push_back(to_double(coords_.back()));
  }
  weights_.push_back(weight);
  weights_.back().canonicalize();
}

void WeightedPointSet::reserve(std::size_t n) {
  coords_.reserve(n * static_cast<std::size_t>(dim_));
  approx_.reserve(n * static_cast<std::size_t>(dim_));
  weights_.reserve(n);
}

Rational WeightedPointSet::total_weight() const {
  Rational s(0);
  for (const auto& w : weights_) s += w;
  return s;
}

WeightedPointSet WeightedPointSet::subset(std::span<const std::size_t> indices) const {
  WeightedPointSet out(dim_);
  out.reserve(indices.size());
  for (std::size_t i : indices) out.add(point(i), weight(i));
  return out;
}

}  // namespace ppart
