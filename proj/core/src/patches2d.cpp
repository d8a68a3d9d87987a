#include "ppart/patches2d.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "ppart/errors.hpp"

namespace ppart {

namespace {

constexpr int kShearBudget = 16;

MultiPoly apply_shear(const MultiPoly& g, const Rational& lambda) {
  if (sgn(lambda) == 0) return g;
  const std::vector<MultiPoly> subs{MultiPoly::variable(2, 0) + MultiPoly::variable(2, 1) * lambda,
                                    MultiPoly::variable(2, 1)};
  return g.substitute(subs);
}

bool usable(const std::vector<UniPoly>& in_y) { return in_y.size() >= 2 && in_y.back().degree() == 0; }

IntervalBox bounds_of(const WeightedPointSet& P, std::span<const std::size_t> idx) {
  Box b;
  for (std::size_t i : idx) {
    auto p = P.point(i);
    if (b.lo.empty()) {
      b.lo.assign(p.begin(), p.end());
      b.hi.assign(p.begin(), p.end());
      continue;
    }
    for (std::size_t v = 0; v < p.size(); ++v) {
      if (p[v] < b.lo[v]) b.lo[v] = p[v];
      if (p[v] > b.hi[v]) b.hi[v] = p[v];
    }
  }
  return IntervalBox::of(b);
}

BoxClass classify_bounds(const SemialgebraicRange& range, const IntervalBox& b) {
  if (b.axes.empty()) return BoxClass::Outside;
  return range.classify(b);
}

void finish_arc(Arc& arc, const WeightedPointSet& P) {
  arc.bounds = bounds_of(P, arc.points);
  std::vector<Rational> w;
  w.reserve(arc.points.size());
  for (std::size_t i : arc.points) w.push_back(P.weight(i));
  arc.weights = WeightTree(w);
}

void finish_store(ArcStore& store, const WeightedPointSet& P) {
  std::vector<std::size_t> all(store.critical_points);
  for (auto& arc : store.arcs) {
    finish_arc(arc, P);
    all.insert(all.end(), arc.points.begin(), arc.points.end());
  }
  store.bounds = bounds_of(P, all);
}

// Roots of Res_y(curve, atom) per atom, in working coordinates.
struct AtomRoots {
  bool scan_all = false;  // curve and atom share a component
  UniPoly square_free;
  std::vector<IsolatingInterval> roots;
};

std::vector<AtomRoots> atom_roots(const ArcDecomposition& decomp, const SemialgebraicRange& range) {
  std::vector<AtomRoots> out;
  out.reserve(range.atoms().size());
  for (const auto& atom : range.atoms()) {
    AtomRoots ar;
    const UniPoly res = sylvester_resultant(decomp.sheared, apply_shear(atom.g, decomp.shear));
    if (res.is_zero()) {
      ar.scan_all = true;
    } else if (res.degree() >= 1) {
      ar.square_free = square_free_part(res);
      ar.roots = isolate_roots(ar.square_free);
    }
    out.push_back(std::move(ar));
  }
  return out;
}

// Splits an arc into runs on which every atom has constant sign, plus
// points sitting exactly at a root. run(a, b) gets a half-open position
// range; point(pos) gets a single position that needs an exact test.
template <typename Run, typename Point>
void split_arc(const Arc& arc, const std::vector<AtomRoots>& atoms, const Run& run, const Point& point) {
  const std::size_t m = arc.xs.size();
  for (const auto& a : atoms) {
    if (a.scan_all) {
      for (std::size_t pos = 0; pos < m; ++pos) point(pos);
      return;
    }
  }
  std::vector<std::size_t> cuts{0, m};
  std::vector<char> exact(m, 0);
  const Rational& first = arc.xs.front();
  const Rational& last = arc.xs.back();
  for (const auto& a : atoms) {
    for (IsolatingInterval iv : a.roots) {
      if (iv.hi < first || iv.lo > last) continue;
      while (true) {
        const auto lo = static_cast<std::size_t>(std::lower_bound(arc.xs.begin(), arc.xs.end(), iv.lo) - arc.xs.begin());
        const auto hi = static_cast<std::size_t>(std::upper_bound(arc.xs.begin(), arc.xs.end(), iv.hi) - arc.xs.begin());
        if (lo == hi) {
          cuts.push_back(lo);
          break;
        }
        if (iv.exact) {
          for (std::size_t pos = lo; pos < hi; ++pos) exact[pos] = 1;
          cuts.push_back(lo);
          cuts.push_back(hi);
          break;
        }
        // A stored x inside the open interval may be the root itself.
        bool hit = false;
        for (std::size_t pos = lo; pos < hi && !hit; ++pos) {
          if (arc.xs[pos] != iv.lo && arc.xs[pos] != iv.hi && sgn(a.square_free.evaluate(arc.xs[pos])) == 0) {
            iv = IsolatingInterval{arc.xs[pos], arc.xs[pos], true};
            hit = true;
          }
        }
        if (!hit) refine(a.square_free, iv);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const std::size_t a = cuts[c];
    const std::size_t b = cuts[c + 1];
    if (exact[a]) {
      for (std::size_t pos = a; pos < b; ++pos) point(pos);
    } else {
      run(a, b);
    }
  }
}

template <typename WholeArc, typename Run, typename Point>
void visit(const ArcStore& store, const ArcDecomposition& decomp, const SemialgebraicRange& range,
           const WeightedPointSet& P, ArcQueryStats* stats, const WholeArc& whole, const Run& run, const Point& point) {
  if (range.dimension() != 2) throw DimensionMismatch("arc_query: range must be planar");
  const BoxClass overall = classify_bounds(range, store.bounds);
  if (overall == BoxClass::Outside) return;
  auto test = [&](std::size_t idx) {
    if (stats) ++stats->points_scanned;
    return range.contains(P.point(idx), P.approx(idx));
  };
  for (std::size_t idx : store.critical_points) {
    if (overall == BoxClass::Inside || test(idx)) point(idx);
  }
  std::optional<std::vector<AtomRoots>> atoms;
  for (const auto& arc : store.arcs) {
    const BoxClass c = overall == BoxClass::Inside ? BoxClass::Inside : classify_bounds(range, arc.bounds);
    if (c != BoxClass::Unknown) {
      if (stats) ++stats->arcs_resolved;
      if (c == BoxClass::Inside) whole(arc);
      continue;
    }
    if (!atoms) atoms = atom_roots(decomp, range);
    split_arc(
        arc, *atoms,
        [&](std::size_t a, std::size_t b) {
          if (test(arc.points[a])) run(arc, a, b);
        },
        [&](std::size_t pos) {
          if (test(arc.points[pos])) point(arc.points[pos]);
        });
  }
}

}  // namespace

int ArcDecomposition::branch_count_at(const Rational& x0) const {
  return SturmSequence(square_free_part(restrict_x(sheared_in_y, x0))).count_all();
}

std::optional<std::pair<std::size_t, int>> ArcDecomposition::locate(std::span<const Rational> p) const {
  if (degenerate) return std::nullopt;
  const Rational x = working_x(p);
  auto it = std::partition_point(critical_xs.begin(), critical_xs.end(),
                                 [&](const IsolatingInterval& iv) { return iv.hi < x; });
  auto slab = static_cast<std::size_t>(it - critical_xs.begin());
  if (it != critical_xs.end() && it->lo <= x) {
    IsolatingInterval iv = *it;
    if (separate(critical, iv, x)) return std::nullopt;
    if (x > iv.hi) ++slab;
  }
  const UniPoly q = square_free_part(restrict_x(sheared_in_y, x));
  const int below = SturmSequence(q).count(std::nullopt, p[1]) - 1;
  if (below < 0) throw std::invalid_argument("ArcDecomposition::locate: point is not on the curve");
  return std::make_pair(slab, below);
}

std::size_t ArcStore::size() const {
  std::size_t n = critical_points.size();
  for (const auto& a : arcs) n += a.points.size();
  return n;
}

std::pair<ArcDecomposition, ArcStore> decompose_arcs(const MultiPoly& f, const WeightedPointSet& P,
                                                     std::span<const std::size_t> indices, Rng& rng) {
  if (f.dimension() != 2 || P.dimension() != 2) throw DimensionMismatch("decompose_arcs: planar input expected");
  if (f.degree() < 1) throw std::invalid_argument("decompose_arcs: curve polynomial must be nonconstant");
  {
    SignEvaluator ev(f);
    for (std::size_t i : indices) {
      if (sign_at(ev, P, i) != Sign::Zero) throw std::invalid_argument("decompose_arcs: point not on the curve");
    }
  }
  ArcDecomposition dc;
  dc.f = f;
  dc.shear = 0;
  dc.sheared = f;
  dc.sheared_in_y = as_poly_in_y(f);
  // Shear until the y-leading coefficient is a nonzero constant.
  int attempts = 0;
  while (!usable(dc.sheared_in_y)) {
    if (attempts++ == kShearBudget) {
      throw ShearBudgetExceeded("decompose_arcs: no usable shear after 16 attempts");
    }
    Rational lambda(Integer(static_cast<unsigned long>(1 + rng.below(64))),
                    Integer(static_cast<unsigned long>(1 + rng.below(8))));
    lambda.canonicalize();
    if (rng.below(2) == 1) lambda = -lambda;
    dc.shear = lambda;
    dc.sheared = apply_shear(f, lambda);
    dc.sheared_in_y = as_poly_in_y(dc.sheared);
  }

  ArcStore store;
  const UniPoly res = sylvester_resultant(dc.sheared, dc.sheared.derivative(1));
  if (res.is_zero()) {
    dc.degenerate = true;
    store.critical_points.assign(indices.begin(), indices.end());
    finish_store(store, P);
    return {std::move(dc), std::move(store)};
  }
  dc.critical = square_free_part(res);
  if (dc.critical.degree() >= 1) dc.critical_xs = isolate_roots(dc.critical);
  const auto& cx = dc.critical_xs;
  if (cx.empty()) {
    dc.slab_samples.emplace_back(0);
  } else {
    dc.slab_samples.push_back(cx.front().lo - 1);
    for (std::size_t i = 0; i + 1 < cx.size(); ++i) dc.slab_samples.push_back((cx[i].hi + cx[i + 1].lo) / 2);
    dc.slab_samples.push_back(cx.back().hi + 1);
  }
  for (const auto& x0 : dc.slab_samples) dc.branch_counts.push_back(dc.branch_count_at(x0));

  std::map<std::pair<std::size_t, int>, std::vector<std::pair<Rational, std::size_t>>> groups;
  for (std::size_t i : indices) {
    auto where = dc.locate(P.point(i));
    if (!where) {
      store.critical_points.push_back(i);
      continue;
    }
    if (where->second >= dc.branch_counts[where->first]) {
      throw std::logic_error("decompose_arcs: branch index beyond the slab's branch count");
    }
    groups[*where].emplace_back(dc.working_x(P.point(i)), i);
  }
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end());
    Arc arc;
    arc.slab = key.first;
    arc.branch = key.second;
    for (auto& [x, i] : members) {
      arc.xs.push_back(std::move(x));
      arc.points.push_back(i);
    }
    store.arcs.push_back(std::move(arc));
  }
  finish_store(store, P);
  return {std::move(dc), std::move(store)};
}

Weight arc_query(const ArcStore& store, const ArcDecomposition& decomp, const SemialgebraicRange& range,
                 const WeightedPointSet& P, ArcQueryStats* stats) {
  Weight total;
  visit(
      store, decomp, range, P, stats, [&](const Arc& arc) { total += arc.weights.total(); },
      [&](const Arc& arc, std::size_t a, std::size_t b) { total += arc.weights.sum(a, b); },
      [&](std::size_t idx) { total += Weight(P.weight(idx)); });
  return total;
}

void arc_report(const ArcStore& store, const ArcDecomposition& decomp, const SemialgebraicRange& range,
                const WeightedPointSet& P, std::vector<std::size_t>& out, ArcQueryStats* stats) {
  visit(
      store, decomp, range, P, stats, [&](const Arc& arc) { out.insert(out.end(), arc.points.begin(), arc.points.end()); },
      [&](const Arc& arc, std::size_t a, std::size_t b) {
        out.insert(out.end(), arc.points.begin() + static_cast<std::ptrdiff_t>(a),
                   arc.points.begin() + static_cast<std::ptrdiff_t>(b));
      },
      [&](std::size_t idx) { out.push_back(idx); });
}

CurvePatches CurvePatches::build(const std::vector<MultiPoly>& curves, const WeightedPointSet& P,
                                 std::span<const std::size_t> indices, Rng& rng) {
  std::vector<SignEvaluator> evs;
  evs.reserve(curves.size());
  for (const auto& c : curves) evs.emplace_back(c);
  std::vector<std::vector<std::size_t>> groups(curves.size());
  for (std::size_t i : indices) {
    std::size_t c = 0;
    while (c < evs.size() && sign_at(evs[c], P, i) != Sign::Zero) ++c;
    if (c == evs.size()) throw std::invalid_argument("CurvePatches: point lies on none of the curves");
    groups[c].push_back(i);
  }
  CurvePatches out;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (groups[c].empty()) continue;
    Rng sub = rng.fork(c);
    out.parts_.push_back(decompose_arcs(curves[c], P, groups[c], sub));
  }
  return out;
}

std::size_t CurvePatches::size() const {
  std::size_t n = 0;
  for (const auto& p : parts_) n += p.second.size();
  return n;
}

Weight CurvePatches::count(const SemialgebraicRange& range, const WeightedPointSet& P, ArcQueryStats* stats) const {
  Weight total;
  for (const auto& [dc, store] : parts_) total += arc_query(store, dc, range, P, stats);
  return total;
}

void CurvePatches::report(const SemialgebraicRange& range, const WeightedPointSet& P, std::vector<std::size_t>& out,
                          ArcQueryStats* stats) const {
  for (const auto& [dc, store] : parts_) arc_report(store, dc, range, P, out, stats);
}

bool CurvePatches::audit(const WeightedPointSet& P) const {
  for (const auto& [dc, store] : parts_) {
    SignEvaluator ev(dc.f);
    for (std::size_t i : store.critical_points) {
      if (sign_at(ev, P, i) != Sign::Zero) return false;
      if (dc.locate(P.point(i))) return false;
    }
    for (const auto& arc : store.arcs) {
      for (std::size_t i : arc.points) {
        if (sign_at(ev, P, i) != Sign::Zero) return false;
        auto where = dc.locate(P.point(i));
        if (!where || where->first != arc.slab || where->second != arc.branch) return false;
      }
    }
  }
  return true;
}

nlohmann::json to_json(const CurvePatches& c) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& [dc, store] : c.parts_) {
    nlohmann::json crit = nlohmann::json::array();
    for (const auto& iv : dc.critical_xs) crit.push_back({to_string(iv.lo), to_string(iv.hi), iv.exact});
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : dc.slab_samples) samples.push_back(to_string(s));
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& arc : store.arcs) {
      nlohmann::json xs = nlohmann::json::array();
      for (const auto& x : arc.xs) xs.push_back(to_string(x));
      arcs.push_back({{"slab", arc.slab}, {"branch", arc.branch}, {"points", arc.points}, {"xs", std::move(xs)}});
    }
    parts.push_back({{"f", to_json(dc.f)},
                     {"shear", to_string(dc.shear)},
                     {"degenerate", dc.degenerate},
                     {"critical_xs", std::move(crit)},
                     {"slab_samples", std::move(samples)},
                     {"branch_counts", dc.branch_counts},
                     {"arcs", std::move(arcs)},
                     {"critical_points", store.critical_points}});
  }
  return parts;
}

CurvePatches curve_patches_from_json(const nlohmann::json& j, const WeightedPointSet& P) {
  try {
    CurvePatches out;
    for (const auto& part : j) {
      ArcDecomposition dc;
      dc.f = multipoly_from_json(part.at("f"));
      dc.shear = parse_rational(part.at("shear").get<std::string>());
      dc.sheared = apply_shear(dc.f, dc.shear);
      dc.sheared_in_y = as_poly_in_y(dc.sheared);
      dc.degenerate = part.at("degenerate").get<bool>();
      if (!dc.degenerate) dc.critical = square_free_part(sylvester_resultant(dc.sheared, dc.sheared.derivative(1)));
      for (const auto& iv : part.at("critical_xs")) {
        dc.critical_xs.push_back(IsolatingInterval{parse_rational(iv.at(0).get<std::string>()),
                                                   parse_rational(iv.at(1).get<std::string>()), iv.at(2).get<bool>()});
      }
      for (const auto& s : part.at("slab_samples")) dc.slab_samples.push_back(parse_rational(s.get<std::string>()));
      dc.branch_counts = part.at("branch_counts").get<std::vector<int>>();
      ArcStore store;
      for (const auto& a : part.at("arcs")) {
        Arc arc;
        arc.slab = a.at("slab").get<std::size_t>();
        arc.branch = a.at("branch").get<int>();
        arc.points = a.at("points").get<std::vector<std::size_t>>();
        for (const auto& x : a.at("xs")) arc.xs.push_back(parse_rational(x.get<std::string>()));
        if (arc.xs.size() != arc.points.size()) throw ParseError("arc point and x lists differ in length");
        store.arcs.push_back(std::move(arc));
      }
      store.critical_points = part.at("critical_points").get<std::vector<std::size_t>>();
      for (const auto& arc : store.arcs) {
        for (std::size_t i : arc.points) {
          if (i >= P.size()) throw ParseError("arc refers to a missing point");
        }
      }
      for (std::size_t i : store.critical_points) {
        if (i >= P.size()) throw ParseError("critical list refers to a missing point");
      }
      finish_store(store, P);
      out.parts_.emplace_back(std::move(dc), std::move(store));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed arc structure: ") + e.what());
  }
}

}  // namespace ppart
