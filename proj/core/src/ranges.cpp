#include "ppart/ranges.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "ppart/errors.hpp"
#include "ppart/linalg.hpp"

namespace ppart {

namespace {

void check_formula(const Formula& f, std::size_t atom_count) {
  switch (f.op) {
    case Formula::Op::Atom:
      if (f.index >= atom_count) throw std::invalid_argument("formula refers to atom " + std::to_string(f.index));
      if (!f.args.empty()) throw std::invalid_argument("atom formula node has arguments");
      return;
    case Formula::Op::Not:
      if (f.args.size() != 1) throw std::invalid_argument("not takes exactly one argument");
      break;
    case Formula::Op::And:
    case Formula::Op::Or:
      break;
  }
  for (const auto& a : f.args) check_formula(a, atom_count);
}

template <typename T, typename AtomFn, typename AndFn, typename OrFn, typename NotFn>
T eval_formula(const Formula& f, const AtomFn& atom, const AndFn& conj, const OrFn& disj, const NotFn& neg, T top,
               T bottom) {
  switch (f.op) {
    case Formula::Op::Atom:
      return atom(f.index);
    case Formula::Op::Not:
      return neg(eval_formula<T>(f.args[0], atom, conj, disj, neg, top, bottom));
    case Formula::Op::And: {
      T acc = top;
      for (const auto& a : f.args) acc = conj(acc, eval_formula<T>(a, atom, conj, disj, neg, top, bottom));
      return acc;
    }
    case Formula::Op::Or: {
      T acc = bottom;
      for (const auto& a : f.args) acc = disj(acc, eval_formula<T>(a, atom, conj, disj, neg, top, bottom));
      return acc;
    }
  }
  return bottom;
}

Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::True && b == Tri::True) return Tri::True;
  return Tri::Unknown;
}
Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True) return Tri::True;
  if (a == Tri::False && b == Tri::False) return Tri::False;
  return Tri::Unknown;
}
Tri tri_not(Tri a) {
  if (a == Tri::True) return Tri::False;
  if (a == Tri::False) return Tri::True;
  return Tri::Unknown;
}

MultiPoly squared_distance(std::span<const Rational> center) {
  const int d = static_cast<int>(center.size());
  MultiPoly sum(d);
  for (int v = 0; v < d; ++v) {
    MultiPoly diff = MultiPoly::variable(d, v) - MultiPoly::constant(d, center[static_cast<std::size_t>(v)]);
    sum += diff * diff;
  }
  return sum;
}

nlohmann::json formula_to_json(const Formula& f) {
  switch (f.op) {
    case Formula::Op::Atom:
      return {{"op", "atom"}, {"index", f.index}};
    case Formula::Op::Not:
      return {{"op", "not"}, {"args", nlohmann::json::array({formula_to_json(f.args[0])})}};
    case Formula::Op::And:
    case Formula::Op::Or: {
      nlohmann::json args = nlohmann::json::array();
      for (const auto& a : f.args) args.push_back(formula_to_json(a));
      return {{"op", f.op == Formula::Op::And ? "and" : "or"}, {"args", std::move(args)}};
    }
  }
  return {};
}

Formula formula_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError("formula node must be an object", where);
  const auto op_it = j.find("op");
  if (op_it == j.end() || !op_it->is_string()) throw ParseError("formula node needs a string \"op\"", where);
  const std::string op = op_it->get<std::string>();
  if (op == "atom") {
    const auto idx = j.find("index");
    if (idx == j.end() || !idx->is_number_unsigned()) throw ParseError("atom node needs a nonnegative \"index\"", where);
    return Formula::atom(idx->get<std::size_t>());
  }
  Formula::Op kind;
  if (op == "and") {
    kind = Formula::Op::And;
  } else if (op == "or") {
    kind = Formula::Op::Or;
  } else if (op == "not") {
    kind = Formula::Op::Not;
  } else {
    throw ParseError("unknown formula op \"" + op + "\"", where);
  }
  const auto args = j.find("args");
  if (args == j.end() || !args->is_array()) throw ParseError("\"" + op + "\" node needs an \"args\" array", where);
  Formula f{kind, 0, {}};
  for (std::size_t i = 0; i < args->size(); ++i) {
    f.args.push_back(formula_from_json((*args)[i], where + ".args[" + std::to_string(i) + "]"));
  }
  if (kind == Formula::Op::Not && f.args.size() != 1) throw ParseError("\"not\" takes exactly one argument", where);
  return f;
}

}  // namespace

bool Box::contains(std::span<const Rational> p) const {
  for (std::size_t v = 0; v < lo.size(); ++v) {
    if (p[v] < lo[v] || p[v] > hi[v]) return false;
  }
  return true;
}

IntervalBox IntervalBox::of(const Box& b) {
  IntervalBox out;
  out.axes.reserve(b.lo.size());
  for (std::size_t v = 0; v < b.lo.size(); ++v) out.axes.push_back(Interval::of(b.lo[v], b.hi[v]));
  return out;
}

const char* to_string(BoxClass c) {
  switch (c) {
    case BoxClass::Inside:
      return "inside";
    case BoxClass::Outside:
      return "outside";
    case BoxClass::Unknown:
      return "unknown";
  }
  return "unknown";
}

// Univariate quadratic parts are completed to squares so that ball-like
// atoms get tight enclosures; everything else is evaluated term by term.
SemialgebraicRange::CompiledAtom SemialgebraicRange::compile_atom(const MultiPoly& g) {
  const int d = g.dimension();
  // Per variable: coefficient of x_v^2, of x_v, and whether other pure powers occur.
  std::vector<Rational> quad(static_cast<std::size_t>(d)), lin(static_cast<std::size_t>(d));
  std::vector<bool> foldable(static_cast<std::size_t>(d), true);
  auto pure_var = [&](const Monomial& m) -> int {
    int var = -1;
    for (int v = 0; v < d; ++v) {
      if (m.exponents()[static_cast<std::size_t>(v)] == 0) continue;
      if (var >= 0) return -1;
      var = v;
    }
    return var;
  };
  for (const auto& t : g.terms()) {
    const int v = pure_var(t.monomial);
    if (v < 0) continue;
    const int e = t.monomial.exponents()[static_cast<std::size_t>(v)];
    if (e == 2) quad[static_cast<std::size_t>(v)] = t.coefficient;
    else if (e == 1) lin[static_cast<std::size_t>(v)] = t.coefficient;
    else foldable[static_cast<std::size_t>(v)] = false;
  }
  CompiledAtom c;
  for (int v = 0; v < d; ++v) {
    const auto u = static_cast<std::size_t>(v);
    if (!foldable[u] || sgn(quad[u]) == 0) continue;
    const Rational h = lin[u] / (2 * quad[u]);
    const Rational k = -lin[u] * lin[u] / (4 * quad[u]);
    c.squares.push_back(Square{u, Interval::of(quad[u]), Interval::of(h), Interval::of(k)});
  }
  for (const auto& t : g.terms()) {
    const int v = pure_var(t.monomial);
    if (v >= 0) {
      const auto u = static_cast<std::size_t>(v);
      const int e = t.monomial.exponents()[u];
      if (foldable[u] && sgn(quad[u]) != 0 && (e == 1 || e == 2)) continue;
    }
    c.coeffs.push_back(Interval::of(t.coefficient));
    c.exps.insert(c.exps.end(), t.monomial.exponents().begin(), t.monomial.exponents().end());
  }
  return c;
}

SemialgebraicRange::SemialgebraicRange(int dimension, std::vector<Atom> atoms, Formula formula, int delta, int s)
    : dim_(dimension), atoms_(std::move(atoms)), formula_(std::move(formula)) {
  if (dim_ < 1) throw std::invalid_argument("range dimension must be positive");
  int max_deg = 0;
  for (const auto& a : atoms_) {
    if (a.g.is_zero()) throw std::invalid_argument("range atom is the zero polynomial");
    if (a.g.dimension() != dim_) throw DimensionMismatch("range atom dimension mismatch");
    max_deg = std::max(max_deg, a.g.degree());
  }
  check_formula(formula_, atoms_.size());
  delta_ = delta < 0 ? max_deg : delta;
  s_ = s < 0 ? static_cast<int>(atoms_.size()) : s;
  if (delta_ < max_deg) throw std::invalid_argument("declared delta below atom degree");
  if (s_ < static_cast<int>(atoms_.size())) throw std::invalid_argument("declared s below atom count");
  for (const auto& a : atoms_) {
    evaluators_.emplace_back(a.g);
    compiled_.push_back(compile_atom(a.g));
  }
}

std::vector<Sign> SemialgebraicRange::atom_signs(std::span<const Rational> p, std::span<const double> approx) const {
  if (static_cast<int>(p.size()) != dim_) throw DimensionMismatch("range dimension mismatch");
  std::vector<Sign> out;
  out.reserve(evaluators_.size());
  for (const auto& ev : evaluators_) out.push_back(ev.sign(p, approx));
  return out;
}

bool SemialgebraicRange::evaluate(std::span<const bool> t) const {
  return eval_formula<bool>(
      formula_, [&](std::size_t i) { return t[i]; }, [](bool a, bool b) { return a && b; },
      [](bool a, bool b) { return a || b; }, [](bool a) { return !a; }, true, false);
}

Tri SemialgebraicRange::evaluate(std::span<const Tri> t) const {
  return eval_formula<Tri>(
      formula_, [&](std::size_t i) { return t[i]; }, tri_and, tri_or, tri_not, Tri::True, Tri::False);
}

bool SemialgebraicRange::contains(std::span<const Rational> p, std::span<const double> approx) const {
  if (static_cast<int>(p.size()) != dim_) throw DimensionMismatch("range dimension mismatch");
  // Atoms are evaluated lazily, at most once each.
  std::vector<signed char> cache(atoms_.size(), -1);
  auto atom = [&](std::size_t i) {
    if (cache[i] < 0) cache[i] = evaluators_[i].sign(p, approx) != Sign::Negative ? 1 : 0;
    return cache[i] == 1;
  };
  return eval_formula<bool>(
      formula_, atom, [](bool a, bool b) { return a && b; }, [](bool a, bool b) { return a || b; },
      [](bool a) { return !a; }, true, false);
}

bool SemialgebraicRange::contains(std::span<const Rational> p) const {
  std::vector<double> approx(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) approx[v] = to_double(p[v]);
  return contains(p, approx);
}

Interval SemialgebraicRange::enclose(std::size_t atom, const IntervalBox& box) const {
  const CompiledAtom& c = compiled_[atom];
  const auto d = static_cast<std::size_t>(dim_);
  Interval sum{0.0, 0.0};
  for (std::size_t t = 0; t < c.coeffs.size(); ++t) {
    Interval term = c.coeffs[t];
    for (std::size_t v = 0; v < d; ++v) {
      const int e = c.exps[t * d + v];
      if (e != 0) term = term * ipow(box.axes[v], e);
    }
    sum = sum + term;
  }
  for (const auto& q : c.squares) sum = sum + q.a * ipow(box.axes[q.var] + q.h, 2) + q.k;
  return sum;
}

BoxClass SemialgebraicRange::classify(const IntervalBox& box) const {
  if (static_cast<int>(box.axes.size()) != dim_) throw DimensionMismatch("box dimension mismatch");
  std::vector<Tri> truth(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Interval e = enclose(i, box);
    truth[i] = e.lo >= 0.0 ? Tri::True : (e.hi < 0.0 ? Tri::False : Tri::Unknown);
  }
  switch (evaluate(truth)) {
    case Tri::True:
      return BoxClass::Inside;
    case Tri::False:
      return BoxClass::Outside;
    case Tri::Unknown:
      return BoxClass::Unknown;
  }
  return BoxClass::Unknown;
}

bool contains(const SemialgebraicRange& range, std::span<const Rational> p) { return range.contains(p); }
BoxClass classify_box(const SemialgebraicRange& range, const Box& box) { return range.classify(box); }

SemialgebraicRange make_halfspace(std::span<const Rational> a, const Rational& b) {
  const int d = static_cast<int>(a.size());
  MultiPoly g = MultiPoly::constant(d, -b);
  for (int v = 0; v < d; ++v) g += MultiPoly::variable(d, v) * a[static_cast<std::size_t>(v)];
  if (g.degree() < 1) throw std::invalid_argument("make_halfspace: normal vector is zero");
  return SemialgebraicRange(d, {Atom{std::move(g)}}, Formula::atom(0));
}

SemialgebraicRange make_ball(std::span<const Rational> center, const Rational& radius2) {
  if (sgn(radius2) < 0) throw std::invalid_argument("make_ball: negative squared radius");
  const int d = static_cast<int>(center.size());
  MultiPoly g = MultiPoly::constant(d, radius2) - squared_distance(center);
  return SemialgebraicRange(d, {Atom{std::move(g)}}, Formula::atom(0));
}

SemialgebraicRange make_simplex(const std::vector<RationalPoint>& vertices) {
  const std::size_t count = vertices.size();
  if (count < 2) throw DegenerateSimplex("make_simplex: need d+1 vertices");
  const std::size_t d = count - 1;
  for (const auto& v : vertices) {
    if (v.size() != d) throw DimensionMismatch("make_simplex: need d+1 vertices in R^d");
  }
  const int di = static_cast<int>(d);
  // Facet functional opposite vertex i: det of rows [1, v_j] (j != i) and [1, x].
  auto facet_det = [&](std::size_t skip, std::span<const Rational> x) {
    std::vector<std::vector<Rational>> m;
    for (std::size_t j = 0; j < count; ++j) {
      if (j == skip) continue;
      std::vector<Rational> row{Rational(1)};
      row.insert(row.end(), vertices[j].begin(), vertices[j].end());
      m.push_back(std::move(row));
    }
    std::vector<Rational> row{Rational(1)};
    row.insert(row.end(), x.begin(), x.end());
    m.push_back(std::move(row));
    return linalg::determinant(std::move(m));
  };
  std::vector<Atom> atoms;
  std::vector<Formula> parts;
  const std::vector<Rational> origin(d, Rational(0));
  for (std::size_t i = 0; i < count; ++i) {
    const Rational inside = facet_det(i, vertices[i]);
    if (sgn(inside) == 0) throw DegenerateSimplex("make_simplex: vertices are affinely dependent");
    const Rational c0 = facet_det(i, origin);
    MultiPoly g = MultiPoly::constant(di, c0);
    for (std::size_t v = 0; v < d; ++v) {
      std::vector<Rational> e(d, Rational(0));
      e[v] = 1;
      g += MultiPoly::variable(di, static_cast<int>(v)) * (facet_det(i, e) - c0);
    }
    if (sgn(inside) < 0) g = -g;
    atoms.push_back(Atom{g.primitive()});
    parts.push_back(Formula::atom(i));
  }
  return SemialgebraicRange(di, std::move(atoms), Formula::all_of(std::move(parts)));
}

SemialgebraicRange make_annulus(std::span<const Rational> center, const Rational& r1sq, const Rational& r2sq) {
  if (sgn(r1sq) < 0 || r2sq < r1sq) throw std::invalid_argument("make_annulus: need 0 <= r1^2 <= r2^2");
  const int d = static_cast<int>(center.size());
  const MultiPoly dist = squared_distance(center);
  std::vector<Atom> atoms{Atom{dist - MultiPoly::constant(d, r1sq)}, Atom{MultiPoly::constant(d, r2sq) - dist}};
  return SemialgebraicRange(d, std::move(atoms), Formula::all_of({Formula::atom(0), Formula::atom(1)}));
}

nlohmann::json to_json(const SemialgebraicRange& range) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : range.atoms()) atoms.push_back(to_json(a.g));
  return {{"d", range.dimension()},
          {"delta", range.delta()},
          {"s", range.s()},
          {"atoms", std::move(atoms)},
          {"formula", formula_to_json(range.formula())}};
}

SemialgebraicRange range_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("range must be a JSON object");
  try {
    const int d = j.at("d").get<int>();
    const int delta = j.contains("delta") ? j.at("delta").get<int>() : -1;
    const int s = j.contains("s") ? j.at("s").get<int>() : -1;
    std::vector<Atom> atoms;
    const auto& arr = j.at("atoms");
    if (!arr.is_array()) throw ParseError("\"atoms\" must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      try {
        atoms.push_back(Atom{multipoly_from_json(arr[i])});
      } catch (const ParseError& e) {
        throw ParseError(e.what(), "$.atoms[" + std::to_string(i) + "]");
      }
    }
    Formula f = formula_from_json(j.at("formula"), "$.formula");
    return SemialgebraicRange(d, std::move(atoms), std::move(f), delta, s);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed range: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid range: ") + e.what());
  } catch (const DimensionMismatch& e) {
    throw ParseError(std::string("invalid range: ") + e.what());
  }
}

}  // namespace ppart
