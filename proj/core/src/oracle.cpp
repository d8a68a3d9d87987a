#include "ppart/oracle.hpp"

#include "ppart/errors.hpp"

namespace ppart {

namespace {
void check(const WeightedPointSet& P, const SemialgebraicRange& range) {
  if (!P.empty() && P.dimension() != range.dimension()) throw DimensionMismatch("oracle: dimension mismatch");
}
}  // namespace

Rational oracle_count(const WeightedPointSet& P, const SemialgebraicRange& range) {
  check(P, range);
  Weight total;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (range.contains(P.point(i), P.approx(i))) total += Weight(P.weight(i));
  }
  return total.value();
}

std::vector<std::size_t> oracle_report(const WeightedPointSet& P, const SemialgebraicRange& range) {
  check(P, range);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (range.contains(P.point(i), P.approx(i))) out.push_back(i);
  }
  return out;
}

}  // namespace ppart
