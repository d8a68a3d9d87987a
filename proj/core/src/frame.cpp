#include "ppart/frame.hpp"

#include <algorithm>
#include <cmath>

#include "ppart/errors.hpp"

namespace ppart {

Frame Frame::fit(const WeightedPointSet& points, std::span<const std::size_t> subset) {
  const int d = points.dimension();
  Frame frame;
  frame.center.assign(static_cast<std::size_t>(d), Rational(0));
  if (subset.empty()) return frame;
  std::vector<double> lo(static_cast<std::size_t>(d), INFINITY);
  std::vector<double> hi(static_cast<std::size_t>(d), -INFINITY);
  for (std::size_t i : subset) {
    auto x = points.approx(i);
    for (int v = 0; v < d; ++v) {
      lo[static_cast<std::size_t>(v)] = std::min(lo[static_cast<std::size_t>(v)], x[static_cast<std::size_t>(v)]);
      hi[static_cast<std::size_t>(v)] = std::max(hi[static_cast<std::size_t>(v)], x[static_cast<std::size_t>(v)]);
    }
  }
  double half = 0.0;
  for (int v = 0; v < d; ++v) half = std::max(half, (hi[static_cast<std::size_t>(v)] - lo[static_cast<std::size_t>(v)]) / 2);
  if (half > 0.0 && std::isfinite(half)) {
    int e = 0;
    std::frexp(half, &e);
    frame.scale_exp = -e;
  }
  // Center on a coarse dyadic grid so local coordinates keep small denominators.
  const int grid = frame.scale_exp + 4;
  for (int v = 0; v < d; ++v) {
    const double mid = lo[static_cast<std::size_t>(v)] / 2 + hi[static_cast<std::size_t>(v)] / 2;
    Rational c = from_double(std::nearbyint(std::ldexp(mid, grid)));
    if (grid >= 0) {
      mpq_div_2exp(c.get_mpq_t(), c.get_mpq_t(), static_cast<mp_bitcnt_t>(grid));
    } else {
      mpq_mul_2exp(c.get_mpq_t(), c.get_mpq_t(), static_cast<mp_bitcnt_t>(-grid));
    }
    frame.center[static_cast<std::size_t>(v)] = c;
  }
  return frame;
}

bool Frame::identity() const {
  if (scale_exp != 0) return false;
  return std::all_of(center.begin(), center.end(), [](const Rational& c) { return sgn(c) == 0; });
}

RationalPoint Frame::to_local(std::span<const Rational> x) const {
  if (x.size() != center.size()) throw DimensionMismatch("Frame: point dimension mismatch");
  RationalPoint out(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) {
    out[v] = x[v] - center[v];
    if (scale_exp >= 0) {
      mpq_mul_2exp(out[v].get_mpq_t(), out[v].get_mpq_t(), static_cast<mp_bitcnt_t>(scale_exp));
    } else {
      mpq_div_2exp(out[v].get_mpq_t(), out[v].get_mpq_t(), static_cast<mp_bitcnt_t>(-scale_exp));
    }
  }
  return out;
}

MultiPoly Frame::to_global(const MultiPoly& local) const {
  const int d = static_cast<int>(center.size());
  Rational scale(1);
  if (scale_exp >= 0) {
    mpq_mul_2exp(scale.get_mpq_t(), scale.get_mpq_t(), static_cast<mp_bitcnt_t>(scale_exp));
  } else {
    mpq_div_2exp(scale.get_mpq_t(), scale.get_mpq_t(), static_cast<mp_bitcnt_t>(-scale_exp));
  }
  std::vector<MultiPoly> subs;
  subs.reserve(static_cast<std::size_t>(d));
  for (int v = 0; v < d; ++v) {
    subs.push_back((MultiPoly::variable(d, v) - MultiPoly::constant(d, center[static_cast<std::size_t>(v)])) * scale);
  }
  return local.substitute(subs);
}

}  // namespace ppart
