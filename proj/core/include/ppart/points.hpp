#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ppart/polycore.hpp"

namespace ppart {

// Points in R^d with nonnegative rational weights. Coordinates are kept
// exactly and, alongside, as doubles for the float filters.
class WeightedPointSet {
 public:
  WeightedPointSet() = default;
  explicit WeightedPointSet(int dimension) : dim_(dimension) {}

  void add(std::span<const Rational> coords, const Rational& weight);
  void reserve(std::size_t n);

  int dimension() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  std::span<const Rational> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<const double> approx(std::size_t i) const {
    return {approx_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  const Rational& weight(std::size_t i) const { return weights_[i]; }
  RationalPoint point_copy(std::size_t i) const {
    auto p = point(i);
    return RationalPoint(p.begin(), p.end());
  }

  Rational total_weight() const;

  // Copy of the points listed in `indices`, in that order.
  WeightedPointSet subset(std::span<const std::size_t> indices) const;

 private:
  int dim_ = 0;
  std::vector<Rational> coords_;
  std::vector<double> approx_;
  std::vector<Rational> weights_;
};

inline Sign sign_at(const SignEvaluator& ev, const WeightedPointSet& P, std::size_t i) {
  return ev.sign(P.point(i), P.approx(i));
}

}  // namespace ppart
