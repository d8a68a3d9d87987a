#include "ppart/partition.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "ppart/errors.hpp"

namespace ppart {

// ---------------------------------------------------------------------------
// PolynomialPartition

void PolynomialPartition::rebuild_evaluators() {
  evaluators_.clear();
  evaluators_.reserve(dissectors_.size());
  for (const auto& g : dissectors_) evaluators_.emplace_back(g);
}

int PolynomialPartition::degree() const {
  int deg = 0;
  for (const auto& g : dissectors_) deg += g.degree();
  return deg;
}

MultiPoly PolynomialPartition::phase_polynomial(std::size_t phase) const {
  MultiPoly f = MultiPoly::constant(dim_, Rational(1));
  for (std::size_t idx : phases_.at(phase).dissectors) f *= dissectors_[idx];
  return f;
}

MultiPoly PolynomialPartition::f() const {
  MultiPoly f = MultiPoly::constant(dim_, Rational(1));
  for (const auto& g : dissectors_) f *= g;
  return f;
}

Sign PolynomialPartition::sign_of_f(std::span<const Rational> x) const {
  const RationalPoint local = frame_.to_local(x);
  Sign s = Sign::Positive;
  for (const auto& ev : evaluators_) {
    s = s * ev.sign(local);
    if (s == Sign::Zero) return s;
  }
  return s;
}

Location PolynomialPartition::locate(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("locate: point dimension mismatch");
  const RationalPoint local = frame_.to_local(x);
  if (members_.empty()) return {};
  // Every point of Z(f) is exceptional, including zeros of dissectors that
  // were applied to other members.
  for (const auto& ev : evaluators_) {
    if (ev.sign(local) == Sign::Zero) return {};
  }
  long m = 0;
  while (members_[static_cast<std::size_t>(m)].dissector >= 0) {
    const Member& mem = members_[static_cast<std::size_t>(m)];
    const Sign s = evaluators_[static_cast<std::size_t>(mem.dissector)].sign(local);
    m = s == Sign::Positive ? mem.plus : mem.minus;
    if (m < 0) return {};
  }
  const long cell = members_[static_cast<std::size_t>(m)].cell;
  if (cell < 0) return {};
  return Location{false, static_cast<std::size_t>(cell)};
}

PartitionStats PolynomialPartition::stats() const {
  PartitionStats s;
  s.n = n_;
  s.r = r_;
  s.degree = degree();
  s.phases = static_cast<int>(phases_.size());
  s.cells = cells_.size();
  s.exceptional = exceptional_.size();
  for (const auto& c : cells_) s.max_cell = std::max(s.max_cell, c.size());
  s.total_trials = total_trials_;
  for (const auto& ph : phases_) {
    PhaseStats p;
    p.kappa = ph.kappa;
    p.dissectors = ph.dissectors.size();
    for (std::size_t idx : ph.dissectors) p.degree += dissectors_[idx].degree();
    p.family_counts = ph.family_counts;
    s.per_phase.push_back(std::move(p));
  }
  return s;
}

void PolynomialPartition::compact() {
  for (auto& c : cells_) std::vector<std::size_t>().swap(c);
  std::vector<std::size_t>().swap(exceptional_);
}

PartitionStats partition_stats(const PolynomialPartition& p) { return p.stats(); }

int phase_bound(const Rational& r) {
  int m = 0;
  Integer p8(1);
  Integer p7(1);
  while (Rational(p8) < r * Rational(p7)) {
    p8 *= 8;
    p7 *= 7;
    ++m;
  }
  return m;
}

PolynomialPartition build_partition(const WeightedPointSet& points, std::span<const std::size_t> subset,
                                    const Rational& r_in, Rng& rng, const PartitionOptions& options) {
  const std::size_t n = subset.size();
  if (n == 0) throw std::invalid_argument("build_partition: empty point set");
  if (sgn(r_in) <= 0) throw std::invalid_argument("build_partition: r must be positive");
  const Rational n_q(static_cast<unsigned long>(n));
  const Rational r = r_in > n_q ? n_q : r_in;
  const int d = points.dimension();

  PolynomialPartition part;
  part.dim_ = d;
  part.n_ = n;
  part.r_ = r;
  part.frame_ = Frame::fit(points, subset);

  WeightedPointSet local(d);
  local.reserve(n);
  for (std::size_t i : subset) local.add(part.frame_.to_local(points.point(i)), points.weight(i));

  // Point positions (into `subset`) of every member still holding points.
  std::vector<std::vector<std::size_t>> member_points;
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  member_points.push_back(std::move(all));
  part.members_.push_back(Member{});
  std::vector<long> active{0};
  std::vector<std::size_t> lost;

  auto too_big_for_cell = [&](std::size_t size) { return Rational(static_cast<unsigned long>(size)) * r > n_q; };

  Integer pow8(1);
  Integer pow7(1);
  const Integer n_z(static_cast<unsigned long>(n));
  int j = 0;
  while (std::any_of(active.begin(), active.end(),
                     [&](long m) { return too_big_for_cell(member_points[static_cast<std::size_t>(m)].size()); })) {
    ++j;
    pow8 *= 8;
    pow7 *= 7;
    PhaseRecord phase;
    phase.index = j;
    std::vector<long> large;
    std::vector<long> next_active;
    for (long m : active) {
      const std::size_t size = member_points[static_cast<std::size_t>(m)].size();
      // |Q| > (7/8)^j n, restricted to members that are not yet final.
      if (Integer(static_cast<unsigned long>(size)) * pow8 > n_z * pow7 && too_big_for_cell(size)) {
        large.push_back(m);
      } else {
        next_active.push_back(m);
      }
    }
    phase.kappa = static_cast<long>(large.size());

    while (!large.empty()) {
      phase.family_counts.push_back(static_cast<long>(large.size()));
      DissectInput input;
      input.dimension = d;
      input.families.reserve(large.size());
      for (long m : large) input.families.push_back(member_points[static_cast<std::size_t>(m)]);
      DissectResult res = build_dissector(input, local, rng, options.dissect);
      part.total_trials_ += res.trials_used;

      const auto dis_index = static_cast<long>(part.dissectors_.size());
      part.dissectors_.push_back(std::move(res.g));
      phase.dissectors.push_back(static_cast<std::size_t>(dis_index));

      std::vector<bool> ok(large.size(), false);
      for (std::size_t idx : res.dissected) ok[idx] = true;
      std::vector<long> remaining;
      for (std::size_t idx = 0; idx < large.size(); ++idx) {
        const long m = large[idx];
        if (!ok[idx]) {
          remaining.push_back(m);
          continue;
        }
        std::vector<std::size_t> plus;
        std::vector<std::size_t> minus;
        const auto& pts = member_points[static_cast<std::size_t>(m)];
        for (std::size_t t = 0; t < pts.size(); ++t) {
          switch (res.signs[idx][t]) {
            case Sign::Positive:
              plus.push_back(pts[t]);
              break;
            case Sign::Negative:
              minus.push_back(pts[t]);
              break;
            case Sign::Zero:
              lost.push_back(pts[t]);
              break;
          }
        }
        part.members_[static_cast<std::size_t>(m)].dissector = dis_index;
        auto make_child = [&](std::vector<std::size_t>&& set) -> long {
          if (set.empty()) return -1;
          const auto id = static_cast<long>(part.members_.size());
          part.members_.push_back(Member{});
          member_points.push_back(std::move(set));
          next_active.push_back(id);
          return id;
        };
        const long p_id = make_child(std::move(plus));
        const long m_id = make_child(std::move(minus));
        part.members_[static_cast<std::size_t>(m)].plus = p_id;
        part.members_[static_cast<std::size_t>(m)].minus = m_id;
        member_points[static_cast<std::size_t>(m)].clear();
        member_points[static_cast<std::size_t>(m)].shrink_to_fit();
      }
      if (remaining.size() > (large.size() + 1) / 2) {
        throw std::logic_error("build_partition: halving bound violated");
      }
      large = std::move(remaining);
    }
    std::sort(next_active.begin(), next_active.end());
    active = std::move(next_active);
    part.phases_.push_back(std::move(phase));
    for (long m : active) {
      const std::size_t size = member_points[static_cast<std::size_t>(m)].size();
      if (Integer(static_cast<unsigned long>(size)) * pow8 > n_z * pow7 && too_big_for_cell(size)) {
        throw std::logic_error("build_partition: member larger than (7/8)^j n after phase");
      }
    }
  }
  if (j > phase_bound(r)) throw std::logic_error("build_partition: phase bound violated");

  part.rebuild_evaluators();

  // Cells are the final members minus any point of Z(f).
  std::vector<bool> on_zero_set(n, false);
  if (!part.evaluators_.empty()) {
    for (long m : active) {
      for (std::size_t pos : member_points[static_cast<std::size_t>(m)]) {
        for (const auto& ev : part.evaluators_) {
          if (sign_at(ev, local, pos) == Sign::Zero) {
            on_zero_set[pos] = true;
            break;
          }
        }
      }
    }
  }
  for (long m : active) {
    std::vector<std::size_t> cell;
    for (std::size_t pos : member_points[static_cast<std::size_t>(m)]) {
      if (on_zero_set[pos]) {
        lost.push_back(pos);
      } else {
        cell.push_back(subset[pos]);
      }
    }
    if (cell.empty()) continue;
    std::sort(cell.begin(), cell.end());
    part.members_[static_cast<std::size_t>(m)].cell = static_cast<long>(part.cells_.size());
    part.cells_.push_back(std::move(cell));
  }
  part.exceptional_.reserve(lost.size());
  for (std::size_t pos : lost) part.exceptional_.push_back(subset[pos]);
  std::sort(part.exceptional_.begin(), part.exceptional_.end());

  const Rational cap = n_q / r;
  for (const auto& c : part.cells_) {
    if (Rational(static_cast<unsigned long>(c.size())) > cap) throw std::logic_error("build_partition: cell exceeds n/r");
  }
  return part;
}

PolynomialPartition build_partition(const WeightedPointSet& points, const Rational& r, Rng& rng,
                                    const PartitionOptions& options) {
  std::vector<std::size_t> all(points.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return build_partition(points, all, r, rng, options);
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const PolynomialPartition& p) {
  nlohmann::json j;
  j["d"] = p.dim_;
  j["n"] = p.n_;
  j["r"] = to_string(p.r_);
  nlohmann::json center = nlohmann::json::array();
  for (const auto& c : p.frame_.center) center.push_back(to_string(c));
  j["frame"] = {{"center", center}, {"scale_exp", p.frame_.scale_exp}};
  nlohmann::json dis = nlohmann::json::array();
  for (const auto& g : p.dissectors_) dis.push_back(to_json(g));
  j["dissectors"] = std::move(dis);
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& ph : p.phases_) {
    phases.push_back({{"j", ph.index}, {"kappa", ph.kappa}, {"dissectors", ph.dissectors},
                      {"family_counts", ph.family_counts}});
  }
  j["phases"] = std::move(phases);
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : p.members_) members.push_back({m.dissector, m.plus, m.minus, m.cell});
  j["members"] = std::move(members);
  j["cells"] = p.cells_;
  j["exceptional"] = p.exceptional_;
  j["total_trials"] = p.total_trials_;
  return j;
}

PolynomialPartition partition_from_json(const nlohmann::json& j) {
  try {
    PolynomialPartition p;
    p.dim_ = j.at("d").get<int>();
    p.n_ = j.at("n").get<std::size_t>();
    p.r_ = parse_rational(j.at("r").get<std::string>());
    for (const auto& c : j.at("frame").at("center")) p.frame_.center.push_back(parse_rational(c.get<std::string>()));
    p.frame_.scale_exp = j.at("frame").at("scale_exp").get<int>();
    for (const auto& g : j.at("dissectors")) p.dissectors_.push_back(multipoly_from_json(g));
    for (const auto& ph : j.at("phases")) {
      PhaseRecord rec;
      rec.index = ph.at("j").get<int>();
      rec.kappa = ph.at("kappa").get<long>();
      rec.dissectors = ph.at("dissectors").get<std::vector<std::size_t>>();
      rec.family_counts = ph.at("family_counts").get<std::vector<long>>();
      p.phases_.push_back(std::move(rec));
    }
    for (const auto& m : j.at("members")) {
      p.members_.push_back(Member{m.at(0).get<long>(), m.at(1).get<long>(), m.at(2).get<long>(), m.at(3).get<long>()});
    }
    p.cells_ = j.at("cells").get<std::vector<std::vector<std::size_t>>>();
    p.exceptional_ = j.at("exceptional").get<std::vector<std::size_t>>();
    p.total_trials_ = j.value("total_trials", 0L);
    for (const auto& m : p.members_) {
      if (m.dissector >= static_cast<long>(p.dissectors_.size()) || m.plus >= static_cast<long>(p.members_.size()) ||
          m.minus >= static_cast<long>(p.members_.size()) || m.cell >= static_cast<long>(p.cells_.size())) {
        throw ParseError("partition member refers to a missing dissector, member or cell");
      }
    }
    p.rebuild_evaluators();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed partition: ") + e.what());
  }
}

nlohmann::json to_json(const PartitionStats& s) {
  nlohmann::json phases = nlohmann::json::array();
  for (const auto& p : s.per_phase) {
    phases.push_back({{"kappa", p.kappa}, {"dissectors", p.dissectors}, {"degree", p.degree},
                      {"family_counts", p.family_counts}});
  }
  return {{"n", s.n},
          {"r", to_string(s.r)},
          {"degree", s.degree},
          {"phases", s.phases},
          {"cells", s.cells},
          {"exceptional", s.exceptional},
          {"max_cell", s.max_cell},
          {"total_trials", s.total_trials},
          {"per_phase", std::move(phases)}};
}

}  // namespace ppart
