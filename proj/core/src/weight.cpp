#include "ppart/weight.hpp"

namespace ppart {

WeightTree::WeightTree(const std::vector<Rational>& w) : n_(w.size()), node_(2 * w.size()) {
  for (std::size_t i = 0; i < n_; ++i) node_[n_ + i] = Weight(w[i]);
  for (std::size_t i = n_; i-- > 1;) node_[i] = node_[2 * i] + node_[2 * i + 1];
}

Weight WeightTree::sum(std::size_t lo, std::size_t hi) const {
  Weight acc;
  for (lo += n_, hi += n_; lo < hi; lo /= 2, hi /= 2) {
    if (lo & 1) acc += node_[lo++];
    if (hi & 1) acc += node_[--hi];
  }
  return acc;
}

}  // namespace ppart
