#pragma once

// Well-dissecting polynomials for a family of point sets.
//
// A polynomial g well-dissects A when g > 0 on at most 7/8 |A| points of A
// and g < 0 on at most 7/8 |A| points. build_dissector picks one random
// anchor per family, lifts the anchors by the Veronese map of the first k
// graded-lex monomials, passes a hyperplane through the lifted anchors
// (plus auxiliary points when the anchors are affinely dependent), and
// keeps the resulting g = h o Phi once it well-dissects at least half of
// the families.

#include <cstddef>
#include <optional>
#include <vector>

#include "ppart/points.hpp"
#include "ppart/polycore.hpp"
#include "ppart/rng.hpp"

namespace ppart {

struct DissectInput {
  int dimension = 0;
  // Pairwise disjoint, nonempty index sets into a shared point set.
  std::vector<std::vector<std::size_t>> families;
};

struct DissectResult {
  MultiPoly g;
  std::vector<std::size_t> dissected;  // ascending family indices
  int trials_used = 0;
  // Fraction of families not well-dissected, one entry per completed trial
  // (restarted trials produce no entry).
  std::vector<double> trial_failure_fractions;
  // Sign of g at every point of every family, in family order.
  std::vector<std::vector<Sign>> signs;
};

struct DissectOptions {
  int max_trials = 1000;
  // Families up to this count use exact rational elimination; above it the
  // hyperplane is computed in floating point (the dissection check stays exact).
  std::size_t exact_limit = 48;
};

// k auxiliary points in [0,1]^k on the grid 2^-31 Z^k, affinely independent.
struct AuxPoints {
  std::vector<std::vector<Rational>> q;
};

AuxPoints sample_aux_points(int k, Rng& rng);

// Affine functional offset + coeffs . y on R^k.
struct Hyperplane {
  Rational offset;
  std::vector<Rational> coeffs;
};

// Hyperplane through all of `b` and through the first k - k' - 1 auxiliary
// points, k' = dim aff(b). nullopt signals Restart: the combined system does
// not determine a unique hyperplane and fresh auxiliary points are needed.
std::optional<Hyperplane> hyperplane_through(const std::vector<std::vector<Rational>>& b, const AuxPoints& aux);

bool is_well_dissecting(std::size_t positives, std::size_t negatives, std::size_t size);
bool is_well_dissecting(const MultiPoly& g, std::span<const std::size_t> family, const WeightedPointSet& points);

// Throws TrialBudgetExceeded after options.max_trials trials.
DissectResult build_dissector(const DissectInput& input, const WeightedPointSet& points, Rng& rng,
                              const DissectOptions& options = {});

}  // namespace ppart
