#pragma once

// Semigroup weights: the query paths only ever add. Subtraction is deleted
// so any attempt to subtract accumulated weight fails to compile.

#include <cstddef>
#include <vector>

#include "ppart/rational.hpp"

namespace ppart {

class Weight {
 public:
  Weight() = default;
  explicit Weight(Rational v) : v_(std::move(v)) {}

  const Rational& value() const { return v_; }

  Weight& operator+=(const Weight& o) {
    v_ += o.v_;
    return *this;
  }
  friend Weight operator+(Weight a, const Weight& b) { return a += b; }
  friend bool operator==(const Weight& a, const Weight& b) { return a.v_ == b.v_; }

  Weight& operator-=(const Weight&) = delete;
  friend Weight operator-(const Weight&, const Weight&) = delete;
  Weight operator-() const = delete;

 private:
  Rational v_;
};

// Range sums over a fixed sequence of weights using only additions
// (a segment tree in place of prefix differences).
class WeightTree {
 public:
  WeightTree() = default;
  explicit WeightTree(const std::vector<Rational>& w);

  std::size_t size() const { return n_; }
  // Sum over positions [lo, hi).
  Weight sum(std::size_t lo, std::size_t hi) const;
  Weight total() const { return n_ == 0 ? Weight() : sum(0, n_); }

 private:
  std::size_t n_ = 0;
  std::vector<Weight> node_;
};

}  // namespace ppart
