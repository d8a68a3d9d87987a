#include "ppart/workload.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ppart/errors.hpp"
#include "ppart/unipoly.hpp"

namespace ppart {

namespace {

constexpr std::uint64_t kGrid = 1000000000;

Rational grid_value(std::uint64_t k) {
  Rational q(Integer(static_cast<unsigned long>(k)), Integer(static_cast<unsigned long>(kGrid)));
  q.canonicalize();
  return q;
}

Rational decimal_of(double v) {
  return grid_value(static_cast<std::uint64_t>(std::llround(std::clamp(v, 0.0, 1.0) * static_cast<double>(kGrid))));
}

Rational draw_weight(Rng& rng, WeightMode w) {
  return w == WeightMode::Unit ? Rational(1) : Rational(static_cast<long>(1 + rng.below(10)));
}

Rational dyadic_between(Rng& rng, long lo_num, long hi_num, int exp) {
  const auto span = static_cast<std::uint64_t>(hi_num - lo_num);
  Rational q(lo_num + static_cast<long>(rng.below(span + 1)));
  mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(exp));
  return q;
}

RationalPoint random_unit_point(int d, Rng& rng) {
  RationalPoint p(static_cast<std::size_t>(d));
  for (auto& c : p) c = grid_value(rng.below(kGrid + 1));
  return p;
}

Rational small_rational(Rng& rng, long range, long den) {
  Rational q(static_cast<long>(rng.below(static_cast<std::uint64_t>(2 * range + 1))) - range, den);
  q.canonicalize();
  return q;
}

}  // namespace

WeightedPointSet gen_uniform_box(std::size_t n, int d, Rng& rng, WeightMode w) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  WeightedPointSet P(d);
  P.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RationalPoint p = random_unit_point(d, rng);
    P.add(p, draw_weight(rng, w));
  }
  return P;
}

WeightedPointSet gen_gaussian_clusters(std::size_t n, int d, Rng& rng, WeightMode w) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  constexpr int kClusters = 5;
  std::vector<std::vector<double>> centers(kClusters, std::vector<double>(static_cast<std::size_t>(d)));
  for (auto& c : centers) {
    for (auto& v : c) v = 0.2 + 0.6 * rng.unit();
  }
  WeightedPointSet P(d);
  P.reserve(n);
  RationalPoint p(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = centers[rng.below(kClusters)];
    for (int v = 0; v < d; ++v) {
      // Box-Muller from the library generator keeps the stream portable.
      const double u1 = 1.0 - rng.unit();
      const double u2 = rng.unit();
      const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      p[static_cast<std::size_t>(v)] = decimal_of(c[static_cast<std::size_t>(v)] + 0.05 * z);
    }
    P.add(p, draw_weight(rng, w));
  }
  return P;
}

WeightedPointSet gen_on_circle(std::size_t n, Rng& rng, WeightMode w) {
  WeightedPointSet P(2);
  P.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // t = tan(theta / 2) rounded to 2^-16, theta uniform in (-pi, pi).
    const double theta = M_PI * (2.0 * rng.unit() - 1.0);
    const double t_approx = std::clamp(std::tan(theta / 2), -1024.0, 1024.0);
    Rational t(static_cast<long>(std::llround(std::ldexp(t_approx, 16))));
    mpq_div_2exp(t.get_mpq_t(), t.get_mpq_t(), 16);
    const Rational t2 = t * t;
    const RationalPoint p{(1 - t2) / (1 + t2), 2 * t / (1 + t2)};
    P.add(p, draw_weight(rng, w));
  }
  return P;
}

WeightedPointSet gen_on_nodal_cubic(std::size_t n, Rng& rng, WeightMode w) {
  WeightedPointSet P(2);
  P.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational t = dyadic_between(rng, -3 * (1L << 19), 3 * (1L << 19), 20);
    const Rational x = t * t - 1;
    const RationalPoint p{x, t * x};
    P.add(p, draw_weight(rng, w));
  }
  return P;
}

WeightedPointSet gen_on_variety(const MultiPoly& f, std::size_t n, Rng& rng, WeightMode w) {
  if (f.dimension() != 2 || f.degree_in(1) != 1) {
    throw std::invalid_argument("on-variety: need a planar polynomial of degree 1 in y");
  }
  const auto in_y = as_poly_in_y(f);
  WeightedPointSet P(2);
  P.reserve(n);
  std::size_t misses = 0;
  while (P.size() < n) {
    const Rational x = grid_value(rng.below(kGrid + 1));
    const Rational a1 = in_y[1].evaluate(x);
    if (sgn(a1) == 0) {
      if (++misses > 64 + n) throw std::invalid_argument("on-variety: y-coefficient vanishes too often");
      continue;
    }
    const RationalPoint p{x, -in_y[0].evaluate(x) / a1};
    P.add(p, draw_weight(rng, w));
  }
  return P;
}

WeightedPointSet gen_grid(std::size_t side, int d) {
  if (d < 1 || side < 1) throw std::invalid_argument("grid: need side >= 1 and d >= 1");
  WeightedPointSet P(d);
  std::size_t total = 1;
  for (int v = 0; v < d; ++v) total *= side;
  P.reserve(total);
  RationalPoint p(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (int v = 0; v < d; ++v) {
      p[static_cast<std::size_t>(v)] = Rational(static_cast<long>(2 * (rest % side) + 1), static_cast<long>(2 * side));
      p[static_cast<std::size_t>(v)].canonicalize();
      rest /= side;
    }
    P.add(p, Rational(1));
  }
  return P;
}

WeightedPointSet generate_points(const std::string& distribution, std::size_t n, int d, Rng& rng, WeightMode w) {
  if (distribution == "uniform-box") return gen_uniform_box(n, d, rng, w);
  if (distribution == "gaussian-clusters") return gen_gaussian_clusters(n, d, rng, w);
  if (distribution == "on-circle") {
    if (d != 2) throw std::invalid_argument("on-circle is planar");
    return gen_on_circle(n, rng, w);
  }
  if (distribution == "on-cubic") {
    if (d != 2) throw std::invalid_argument("on-cubic is planar");
    return gen_on_nodal_cubic(n, rng, w);
  }
  if (distribution == "grid") {
    // n is the number of points per side.
    return gen_grid(n, d);
  }
  throw std::invalid_argument("unknown distribution \"" + distribution + "\"");
}

const char* to_string(RangeKind k) {
  switch (k) {
    case RangeKind::Halfspace:
      return "halfspace";
    case RangeKind::Ball:
      return "ball";
    case RangeKind::Simplex:
      return "simplex";
    case RangeKind::Annulus:
      return "annulus";
    case RangeKind::Conjunction:
      return "conjunction";
  }
  return "ball";
}

RangeKind parse_range_kind(const std::string& name) {
  if (name == "halfspace") return RangeKind::Halfspace;
  if (name == "ball" || name == "disk") return RangeKind::Ball;
  if (name == "simplex") return RangeKind::Simplex;
  if (name == "annulus") return RangeKind::Annulus;
  if (name == "conjunction") return RangeKind::Conjunction;
  throw std::invalid_argument("unknown range kind \"" + name + "\"");
}

SemialgebraicRange random_range(RangeKind kind, int d, Rng& rng) {
  switch (kind) {
    case RangeKind::Halfspace: {
      std::vector<Rational> a(static_cast<std::size_t>(d));
      bool nonzero = false;
      while (!nonzero) {
        for (auto& c : a) {
          c = small_rational(rng, 8, 1);
          nonzero = nonzero || sgn(c) != 0;
        }
      }
      const RationalPoint p = random_unit_point(d, rng);
      Rational b(0);
      for (std::size_t v = 0; v < a.size(); ++v) b += a[v] * p[v];
      return make_halfspace(a, b);
    }
    case RangeKind::Ball: {
      const RationalPoint c = random_unit_point(d, rng);
      return make_ball(c, dyadic_between(rng, 1, 1 << 10, 12));
    }
    case RangeKind::Simplex: {
      while (true) {
        std::vector<RationalPoint> v;
        const RationalPoint base = random_unit_point(d, rng);
        for (int i = 0; i <= d; ++i) {
          RationalPoint q(base);
          for (auto& c : q) c += small_rational(rng, 512, 1024);
          v.push_back(std::move(q));
        }
        try {
          return make_simplex(v);
        } catch (const DegenerateSimplex&) {
        }
      }
    }
    case RangeKind::Annulus: {
      const RationalPoint c = random_unit_point(d, rng);
      const Rational r1 = dyadic_between(rng, 0, 1 << 9, 12);
      const Rational r2 = r1 + dyadic_between(rng, 1, 1 << 9, 12);
      return make_annulus(c, r1, r2);
    }
    case RangeKind::Conjunction: {
      const int atoms = 1 + static_cast<int>(rng.below(3));
      const auto basis = monomial_basis(d, 3);
      std::vector<Atom> list;
      std::vector<Formula> parts;
      for (int a = 0; a < atoms; ++a) {
        const int degree = 1 + static_cast<int>(rng.below(3));
        std::vector<Term> terms;
        for (const auto& m : basis) {
          if (m.total_degree() > degree || rng.below(3) == 0) continue;
          terms.push_back(Term{m, small_rational(rng, 4, 1)});
        }
        MultiPoly q(d, std::move(terms));
        if (q.degree() < 1) q = MultiPoly::variable(d, 0);
        // The zero level passes through a random point of the unit cube.
        const RationalPoint p = random_unit_point(d, rng);
        MultiPoly g = MultiPoly::constant(d, q.evaluate(p)) - q;
        if (rng.below(2) == 1) g = -g;
        if (g.degree() < 1) g = MultiPoly::variable(d, 0) - MultiPoly::constant(d, p[0]);
        list.push_back(Atom{std::move(g)});
        parts.push_back(Formula::atom(static_cast<std::size_t>(a)));
      }
      return SemialgebraicRange(d, std::move(list), Formula::all_of(std::move(parts)), 3, 3);
    }
  }
  throw std::invalid_argument("unknown range kind");
}

SemialgebraicRange random_disk(Rng& rng) {
  const RationalPoint c = random_unit_point(2, rng);
  const Rational radius = Rational(static_cast<long>(50 + rng.below(251)), 1000);
  return make_ball(c, radius * radius);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need matching series of length >= 2");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: x values are all equal");
  return sxy / sxx;
}

}  // namespace ppart
