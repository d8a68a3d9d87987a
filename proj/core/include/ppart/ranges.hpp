#pragma once

// Semialgebraic ranges: Boolean formulas over closed polynomial atoms
// g(x) >= 0, exact membership, and three-valued classification of boxes.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ppart/interval.hpp"
#include "ppart/polycore.hpp"

namespace ppart {

struct Atom {
  MultiPoly g;  // nonzero; the atom holds where g >= 0
};

struct Formula {
  enum class Op { Atom, And, Or, Not };
  Op op = Op::Atom;
  std::size_t index = 0;  // Op::Atom only
  std::vector<Formula> args;

  static Formula atom(std::size_t i) { return Formula{Op::Atom, i, {}}; }
  static Formula all_of(std::vector<Formula> args) { return Formula{Op::And, 0, std::move(args)}; }
  static Formula any_of(std::vector<Formula> args) { return Formula{Op::Or, 0, std::move(args)}; }
  static Formula negate(Formula f) { return Formula{Op::Not, 0, {std::move(f)}}; }
};

// Kleene strong three-valued logic.
enum class Tri { False, Unknown, True };

struct Box {
  std::vector<Rational> lo;
  std::vector<Rational> hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const Rational> p) const;
};

// Outward-rounded double enclosure of a Box.
struct IntervalBox {
  std::vector<Interval> axes;

  static IntervalBox of(const Box& b);
};

enum class BoxClass { Inside, Outside, Unknown };
const char* to_string(BoxClass c);

class SemialgebraicRange {
 public:
  SemialgebraicRange() = default;
  // delta/s of -1 take the actual maximum atom degree / atom count.
  // Throws std::invalid_argument on a dangling atom index, a zero atom, a
  // dimension mismatch or (delta, s) smaller than the atoms require.
  SemialgebraicRange(int dimension, std::vector<Atom> atoms, Formula formula, int delta = -1, int s = -1);

  int dimension() const { return dim_; }
  int delta() const { return delta_; }
  int s() const { return s_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Formula& formula() const { return formula_; }

  bool contains(std::span<const Rational> p) const;
  bool contains(std::span<const Rational> p, std::span<const double> approx) const;

  // Signs of every atom at p, then the formula on those truth values.
  std::vector<Sign> atom_signs(std::span<const Rational> p, std::span<const double> approx) const;
  bool evaluate(std::span<const bool> atom_truth) const;
  Tri evaluate(std::span<const Tri> atom_truth) const;

  BoxClass classify(const IntervalBox& box) const;
  BoxClass classify(const Box& box) const { return classify(IntervalBox::of(box)); }

  // Enclosure of atom i over a box.
  Interval enclose(std::size_t atom, const IntervalBox& box) const;

 private:
  // a (x_v + h)^2 + k, equal to the a x_v^2 + b x_v part of an atom.
  struct Square {
    std::size_t var = 0;
    Interval a, h, k;
  };
  struct CompiledAtom {
    std::vector<Interval> coeffs;
    std::vector<int> exps;  // size coeffs * dim
    std::vector<Square> squares;
  };
  static CompiledAtom compile_atom(const MultiPoly& g);

  int dim_ = 0;
  int delta_ = 0;
  int s_ = 0;
  std::vector<Atom> atoms_;
  Formula formula_;
  std::vector<SignEvaluator> evaluators_;
  std::vector<CompiledAtom> compiled_;
};

bool contains(const SemialgebraicRange& range, std::span<const Rational> p);
BoxClass classify_box(const SemialgebraicRange& range, const Box& box);

// Constructors. make_halfspace: a . x - b >= 0. make_ball: radius2 - |x - c|^2 >= 0.
// make_simplex: d+1 vertices, AND of d+1 inward facet halfspaces; throws
// DegenerateSimplex. make_annulus: r1sq <= |x - c|^2 <= r2sq.
SemialgebraicRange make_halfspace(std::span<const Rational> a, const Rational& b);
SemialgebraicRange make_ball(std::span<const Rational> center, const Rational& radius2);
SemialgebraicRange make_simplex(const std::vector<RationalPoint>& vertices);
SemialgebraicRange make_annulus(std::span<const Rational> center, const Rational& r1sq, const Rational& r2sq);

// {"d","delta","s","atoms":[poly],"formula":{"op":...}}. Parsing throws ParseError.
nlohmann::json to_json(const SemialgebraicRange& range);
SemialgebraicRange range_from_json(const nlohmann::json& j);

}  // namespace ppart
