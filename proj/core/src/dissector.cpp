#include "ppart/dissector.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "ppart/errors.hpp"
#include "ppart/frame.hpp"
#include "ppart/linalg.hpp"

namespace ppart {

namespace {

constexpr std::uint64_t kAuxGrid = std::uint64_t{1} << 31;
constexpr int kAuxResampleCap = 64;
constexpr std::size_t kExactRankLimit = 64;

Rational aux_coordinate(Rng& rng) {
  Rational q(Integer(static_cast<unsigned long>(rng.below(kAuxGrid + 1))), Integer(static_cast<unsigned long>(kAuxGrid)));
  q.canonicalize();
  return q;
}

bool affinely_independent(const std::vector<std::vector<Rational>>& q) {
  const std::size_t k = q.size();
  if (k <= 1) return true;
  if (k <= kExactRankLimit) {
    std::vector<linalg::IntRow> diffs;
    diffs.reserve(k - 1);
    for (std::size_t i = 1; i < k; ++i) {
      std::vector<Rational> row(k);
      for (std::size_t j = 0; j < k; ++j) row[j] = q[i][j] - q[0][j];
      diffs.push_back(linalg::to_integer_row(row));
    }
    return linalg::bareiss_echelon(std::move(diffs)).rank() == k - 1;
  }
  Eigen::MatrixXd diffs(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k));
  for (std::size_t i = 1; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      diffs(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j)) = to_double(q[i][j] - q[0][j]);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
  return static_cast<std::size_t>(lu.rank()) == k - 1;
}

std::vector<Rational> lifted_row(std::span<const Rational> lifted) {
  std::vector<Rational> row;
  row.reserve(lifted.size() + 1);
  row.emplace_back(1);
  row.insert(row.end(), lifted.begin(), lifted.end());
  return row;
}

std::optional<Hyperplane> from_null_vector(const linalg::IntRow& v) {
  Hyperplane h;
  h.offset = Rational(v[0]);
  h.coeffs.reserve(v.size() - 1);
  bool nonzero = false;
  for (std::size_t j = 1; j < v.size(); ++j) {
    h.coeffs.emplace_back(v[j]);
    nonzero = nonzero || sgn(v[j]) != 0;
  }
  if (!nonzero) return std::nullopt;
  return h;
}

// Exact solve; `anchor_rows` are integer-scaled [1, b_i] rows.
std::optional<Hyperplane> exact_hyperplane(std::vector<linalg::IntRow> anchor_rows, std::size_t k,
                                           const std::function<const AuxPoints&()>& aux) {
  linalg::Echelon e = linalg::bareiss_echelon(anchor_rows);
  const std::size_t rank_b = e.rank();
  if (rank_b < k) {
    const AuxPoints& q = aux();
    const std::size_t needed = k - rank_b;
    if (q.q.size() < needed) return std::nullopt;
    for (std::size_t j = 0; j < needed; ++j) anchor_rows.push_back(linalg::to_integer_row(lifted_row(q.q[j])));
    e = linalg::bareiss_echelon(std::move(anchor_rows));
  }
  auto v = linalg::unique_null_vector(e);
  if (!v) return std::nullopt;
  return from_null_vector(*v);
}

// Floating-point solve for large k: kernel of the (k x (k+1)) system from a
// QR factorization of its transpose.
std::optional<std::vector<double>> float_hyperplane(Eigen::MatrixXd rows, std::size_t k,
                                                    const std::function<const AuxPoints&()>& aux) {
  const auto cols = static_cast<Eigen::Index>(k + 1);
  auto kernel = [&](const Eigen::MatrixXd& m) -> std::optional<Eigen::VectorXd> {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m.transpose());
    qr.setThreshold(1e-12);
    if (static_cast<std::size_t>(qr.rank()) != k) return std::nullopt;
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(cols);
    unit(cols - 1) = 1.0;
    Eigen::VectorXd v = qr.householderQ() * unit;
    return v;
  };
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> probe(rows.transpose());
  probe.setThreshold(1e-12);
  const auto rank_b = static_cast<std::size_t>(probe.rank());
  std::optional<Eigen::VectorXd> v;
  if (rank_b == k) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(cols);
    unit(cols - 1) = 1.0;
    v = probe.householderQ() * unit;
  } else {
    const AuxPoints& q = aux();
    const std::size_t needed = k - rank_b;
    Eigen::MatrixXd full(rows.rows() + static_cast<Eigen::Index>(needed), cols);
    full.topRows(rows.rows()) = rows;
    for (std::size_t j = 0; j < needed; ++j) {
      const auto r = rows.rows() + static_cast<Eigen::Index>(j);
      full(r, 0) = 1.0;
      for (std::size_t c = 0; c < k; ++c) full(r, static_cast<Eigen::Index>(c + 1)) = to_double(q.q[j][c]);
    }
    v = kernel(full);
  }
  if (!v) return std::nullopt;
  const double scale = v->cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) return std::nullopt;
  int exponent = 0;
  std::frexp(scale, &exponent);
  std::vector<double> out(static_cast<std::size_t>(cols));
  for (Eigen::Index j = 0; j < cols; ++j) out[static_cast<std::size_t>(j)] = std::ldexp((*v)(j), -exponent);
  return out;
}

}  // namespace

AuxPoints sample_aux_points(int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("sample_aux_points: k must be positive");
  for (int attempt = 0; attempt < kAuxResampleCap; ++attempt) {
    AuxPoints aux;
    aux.q.assign(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(k)));
    for (auto& point : aux.q) {
      for (auto& c : point) c = aux_coordinate(rng);
    }
    if (affinely_independent(aux.q)) return aux;
  }
  throw InternalRandomnessFailure("sample_aux_points: no affinely independent sample after 64 draws");
}

std::optional<Hyperplane> hyperplane_through(const std::vector<std::vector<Rational>>& b, const AuxPoints& aux) {
  const std::size_t k = b.size();
  if (k == 0) throw std::invalid_argument("hyperplane_through: no points");
  std::vector<linalg::IntRow> rows;
  rows.reserve(k);
  for (const auto& p : b) {
    if (p.size() != k) throw DimensionMismatch("hyperplane_through: points must lie in R^k");
    rows.push_back(linalg::to_integer_row(lifted_row(p)));
  }
  return exact_hyperplane(std::move(rows), k, [&]() -> const AuxPoints& { return aux; });
}

bool is_well_dissecting(std::size_t positives, std::size_t negatives, std::size_t size) {
  return 8 * positives <= 7 * size && 8 * negatives <= 7 * size;
}

bool is_well_dissecting(const MultiPoly& g, std::span<const std::size_t> family, const WeightedPointSet& points) {
  SignEvaluator ev(g);
  std::size_t pos = 0;
  std::size_t neg = 0;
  for (std::size_t i : family) {
    Sign s = sign_at(ev, points, i);
    if (s == Sign::Positive) ++pos;
    if (s == Sign::Negative) ++neg;
  }
  return is_well_dissecting(pos, neg, family.size());
}

DissectResult build_dissector(const DissectInput& input, const WeightedPointSet& points, Rng& rng,
                              const DissectOptions& options) {
  const std::size_t k = input.families.size();
  const int d = input.dimension;
  if (k == 0) throw std::invalid_argument("build_dissector: need at least one family");
  if (d != points.dimension()) throw DimensionMismatch("build_dissector: dimension mismatch");
  for (const auto& fam : input.families) {
    if (fam.empty()) throw std::invalid_argument("build_dissector: empty family");
  }

  const int degree = min_degree(static_cast<long>(k), d);
  std::vector<Monomial> basis = monomial_basis(d, degree);
  basis.resize(k);
  const bool exact = k <= options.exact_limit;
  // The float solve lifts coordinates centered and scaled to about [-1, 1];
  // otherwise high-degree monomials underflow or dominate and the solve
  // degrades. The exact path needs no normalization.
  Frame frame;
  bool shifted = false;
  if (!exact) {
    std::vector<std::size_t> all;
    for (const auto& fam : input.families) all.insert(all.end(), fam.begin(), fam.end());
    frame = Frame::fit(points, all);
    shifted = !frame.identity();
  }
  const std::size_t needed = (k + 1) / 2;

  std::optional<AuxPoints> aux;
  auto fresh_aux = [&]() -> const AuxPoints& {
    aux = sample_aux_points(static_cast<int>(k), rng);
    return *aux;
  };

  DissectResult result;
  for (int trial = 1; trial <= options.max_trials; ++trial) {
    std::vector<std::size_t> anchors(k);
    for (std::size_t i = 0; i < k; ++i) anchors[i] = input.families[i][rng.below(input.families[i].size())];

    std::vector<Term> terms;
    terms.reserve(k + 1);
    if (exact) {
      std::vector<linalg::IntRow> rows;
      rows.reserve(k);
      for (std::size_t a : anchors) rows.push_back(linalg::to_integer_row(lifted_row(veronese(points.point(a), basis))));
      auto h = exact_hyperplane(std::move(rows), k, fresh_aux);
      if (!h) continue;
      terms.push_back(Term{Monomial::one(d), h->offset});
      for (std::size_t j = 0; j < k; ++j) terms.push_back(Term{basis[j], h->coeffs[j]});
    } else {
      Eigen::MatrixXd rows(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1));
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> x(points.approx(anchors[i]).begin(), points.approx(anchors[i]).end());
        if (shifted) {
          const RationalPoint local = frame.to_local(points.point(anchors[i]));
          for (std::size_t v = 0; v < x.size(); ++v) x[v] = to_double(local[v]);
        }
        const auto lifted = veronese(x, basis);
        rows(static_cast<Eigen::Index>(i), 0) = 1.0;
        for (std::size_t j = 0; j < k; ++j) rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = lifted[j];
      }
      auto h = float_hyperplane(std::move(rows), k, fresh_aux);
      if (!h) continue;
      terms.push_back(Term{Monomial::one(d), from_double((*h)[0])});
      for (std::size_t j = 0; j < k; ++j) terms.push_back(Term{basis[j], from_double((*h)[j + 1])});
    }
    MultiPoly g(d, std::move(terms));
    if (shifted) g = frame.to_global(g);
    if (g.degree() < 1) continue;

    SignEvaluator ev(g);
    std::vector<std::vector<Sign>> signs(k);
    std::vector<std::size_t> dissected;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& fam = input.families[i];
      signs[i].reserve(fam.size());
      std::size_t pos = 0;
      std::size_t neg = 0;
      for (std::size_t idx : fam) {
        Sign s = sign_at(ev, points, idx);
        signs[i].push_back(s);
        if (s == Sign::Positive) ++pos;
        if (s == Sign::Negative) ++neg;
      }
      if (is_well_dissecting(pos, neg, fam.size())) dissected.push_back(i);
    }
    result.trial_failure_fractions.push_back(static_cast<double>(k - dissected.size()) / static_cast<double>(k));
    if (dissected.size() >= needed) {
      result.g = std::move(g);
      result.dissected = std::move(dissected);
      result.trials_used = trial;
      result.signs = std::move(signs);
      return result;
    }
  }
  throw TrialBudgetExceeded("build_dissector: no well-dissecting polynomial within " +
                            std::to_string(options.max_trials) + " trials (k=" + std::to_string(k) + ")");
}

}  // namespace ppart
