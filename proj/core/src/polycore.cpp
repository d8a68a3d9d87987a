#include "ppart/polycore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ppart/errors.hpp"

namespace ppart {

const char* to_string(Sign s) {
  switch (s) {
    case Sign::Negative:
      return "negative";
    case Sign::Zero:
      return "zero";
    case Sign::Positive:
      return "positive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  total_degree_ = 0;
  for (int e : exponents_) {
    if (e < 0) throw std::invalid_argument("Monomial: negative exponent");
    total_degree_ += e;
  }
}

Monomial Monomial::variable(int dimension, int index) {
  std::vector<int> e(static_cast<std::size_t>(dimension), 0);
  e[static_cast<std::size_t>(index)] = 1;
  return Monomial(std::move(e));
}

Monomial Monomial::operator*(const Monomial& other) const {
  std::vector<int> e(exponents_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exponents_[i];
  return Monomial(std::move(e));
}

bool operator<(const Monomial& a, const Monomial& b) {
  if (a.total_degree_ != b.total_degree_) return a.total_degree_ < b.total_degree_;
  for (std::size_t i = 0; i < a.exponents_.size(); ++i) {
    if (a.exponents_[i] != b.exponents_[i]) return a.exponents_[i] > b.exponents_[i];
  }
  return false;
}

// ---------------------------------------------------------------------------
// MultiPoly

namespace {

using TermMap = std::map<Monomial, Rational>;

std::vector<Term> from_map(TermMap&& m) {
  std::vector<Term> out;
  out.reserve(m.size());
  for (auto& [mono, c] : m) {
    if (sgn(c) != 0) out.push_back(Term{mono, std::move(c)});
  }
  return out;
}

}  // namespace

MultiPoly::MultiPoly(int dimension, std::vector<Term> terms) : dimension_(dimension) {
  TermMap m;
  for (auto& t : terms) {
    if (t.monomial.dimension() != dimension) {
      throw DimensionMismatch("MultiPoly: monomial dimension differs from polynomial dimension");
    }
    t.coefficient.canonicalize();
    m[t.monomial] += t.coefficient;
  }
  terms_ = from_map(std::move(m));
}

MultiPoly MultiPoly::constant(int dimension, const Rational& c) {
  MultiPoly p(dimension);
  if (sgn(c) != 0) {
    p.terms_.push_back(Term{Monomial::one(dimension), c});
    p.terms_.back().coefficient.canonicalize();
  }
  return p;
}

MultiPoly MultiPoly::variable(int dimension, int index) {
  MultiPoly p(dimension);
  p.terms_.push_back(Term{Monomial::variable(dimension, index), Rational(1)});
  return p;
}

int MultiPoly::degree() const { return terms_.empty() ? -1 : terms_.back().monomial.total_degree(); }

int MultiPoly::degree_in(int var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.exponent(var));
  return d;
}

Rational MultiPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.monomial < key; });
  if (it != terms_.end() && it->monomial == m) return it->coefficient;
  return Rational(0);
}

void MultiPoly::check_dimension(const MultiPoly& o) const {
  if (o.dimension_ != dimension_) throw DimensionMismatch("MultiPoly: dimension mismatch");
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coefficient = -t.coefficient;
  return r;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  check_dimension(o);
  MultiPoly r(dimension_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->monomial < b->monomial)) {
      r.terms_.push_back(*a++);
    } else if (a == terms_.end() || b->monomial < a->monomial) {
      r.terms_.push_back(*b++);
    } else {
      Rational c = a->coefficient + b->coefficient;
      if (sgn(c) != 0) r.terms_.push_back(Term{a->monomial, std::move(c)});
      ++a;
      ++b;
    }
  }
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  check_dimension(o);
  TermMap m;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) m[a.monomial * b.monomial] += a.coefficient * b.coefficient;
  }
  MultiPoly r(dimension_);
  r.terms_ = from_map(std::move(m));
  return r;
}

MultiPoly MultiPoly::operator*(const Rational& c) const {
  if (sgn(c) == 0) return MultiPoly(dimension_);
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coefficient *= c;
  return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.dimension_ != b.dimension_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].monomial == b.terms_[i].monomial) || a.terms_[i].coefficient != b.terms_[i].coefficient) {
      return false;
    }
  }
  return true;
}

MultiPoly MultiPoly::derivative(int var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    int e = t.monomial.exponent(var);
    if (e == 0) continue;
    std::vector<int> exps = t.monomial.exponents();
    exps[static_cast<std::size_t>(var)] -= 1;
    out.push_back(Term{Monomial(std::move(exps)), t.coefficient * e});
  }
  return MultiPoly(dimension_, std::move(out));
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(dimension_, Rational(1));
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

MultiPoly MultiPoly::substitute(std::span<const MultiPoly> subs) const {
  if (static_cast<int>(subs.size()) != dimension_) {
    throw DimensionMismatch("substitute: need one replacement per variable");
  }
  const int out_dim = subs.empty() ? 0 : subs.front().dimension();
  // Powers of each replacement, built lazily up to the needed exponent.
  std::vector<std::vector<MultiPoly>> powers(subs.size());
  for (std::size_t v = 0; v < subs.size(); ++v) {
    powers[v].push_back(MultiPoly::constant(out_dim, Rational(1)));
  }
  MultiPoly result(out_dim);
  for (const auto& t : terms_) {
    MultiPoly term = MultiPoly::constant(out_dim, t.coefficient);
    for (std::size_t v = 0; v < subs.size(); ++v) {
      int e = t.monomial.exponent(static_cast<int>(v));
      while (static_cast<int>(powers[v].size()) <= e) powers[v].push_back(powers[v].back() * subs[v]);
      if (e > 0) term *= powers[v][static_cast<std::size_t>(e)];
    }
    result += term;
  }
  return result;
}

Rational MultiPoly::evaluate(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != dimension_) throw DimensionMismatch("evaluate: point dimension mismatch");
  std::vector<std::vector<Rational>> pw(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) pw[v].push_back(Rational(1));
  Rational sum(0);
  Rational term;
  for (const auto& t : terms_) {
    term = t.coefficient;
    for (std::size_t v = 0; v < x.size(); ++v) {
      int e = t.monomial.exponent(static_cast<int>(v));
      if (e == 0) continue;
      while (static_cast<int>(pw[v].size()) <= e) pw[v].push_back(pw[v].back() * x[v]);
      term *= pw[v][static_cast<std::size_t>(e)];
    }
    sum += term;
  }
  return sum;
}

MultiPoly MultiPoly::primitive(bool positive_lead) const {
  if (terms_.empty()) return *this;
  Integer g(0);
  Integer l(1);
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coefficient.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coefficient.get_den_mpz_t());
  }
  Rational scale(l, g);
  scale.canonicalize();
  if (positive_lead && sgn(terms_.back().coefficient) < 0) scale = -scale;
  return *this * scale;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const Rational& c = it->coefficient;
    bool neg = sgn(c) < 0;
    Rational mag = neg ? Rational(-c) : c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool unit = mag == 1 && it->monomial.total_degree() > 0;
    if (!unit) os << ppart::to_string(mag);
    bool need_star = !unit;
    for (int v = 0; v < dimension_; ++v) {
      int e = it->monomial.exponent(v);
      if (e == 0) continue;
      if (need_star) os << "*";
      os << "x" << (v + 1);
      if (e > 1) os << "^" << e;
      need_star = true;
    }
  }
  return os.str();
}

nlohmann::json to_json(const MultiPoly& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : f.terms()) {
    terms.push_back({{"exp", t.monomial.exponents()},
                     {"num", t.coefficient.get_num().get_str()},
                     {"den", t.coefficient.get_den().get_str()}});
  }
  return {{"d", f.dimension()}, {"terms", std::move(terms)}};
}

MultiPoly multipoly_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("terms")) {
    throw ParseError("polynomial object needs \"d\" and \"terms\"");
  }
  if (!j["d"].is_number_integer() || j["d"].get<int>() < 1) throw ParseError("polynomial \"d\" must be a positive integer");
  const int d = j["d"].get<int>();
  if (!j["terms"].is_array()) throw ParseError("polynomial \"terms\" must be an array");
  std::vector<Term> terms;
  std::size_t idx = 0;
  for (const auto& t : j["terms"]) {
    const std::string where = "terms[" + std::to_string(idx++) + "]";
    if (!t.is_object() || !t.contains("exp") || !t.contains("num") || !t.contains("den")) {
      throw ParseError("term needs exp/num/den", where);
    }
    const auto& exp = t["exp"];
    if (!exp.is_array() || static_cast<int>(exp.size()) != d) throw ParseError("exponent length must equal d", where);
    std::vector<int> e;
    for (const auto& x : exp) {
      if (!x.is_number_integer() || x.get<int>() < 0) throw ParseError("exponents must be nonnegative integers", where);
      e.push_back(x.get<int>());
    }
    if (!t["num"].is_string() || !t["den"].is_string()) throw ParseError("num/den must be decimal strings", where);
    Integer num;
    Integer den;
    if (num.set_str(t["num"].get<std::string>(), 10) != 0 || den.set_str(t["den"].get<std::string>(), 10) != 0) {
      throw ParseError("num/den must be decimal integers", where);
    }
    if (den == 0) throw ParseError("zero denominator", where);
    Rational c(num, den);
    c.canonicalize();
    terms.push_back(Term{Monomial(std::move(e)), std::move(c)});
  }
  return MultiPoly(d, std::move(terms));
}

// ---------------------------------------------------------------------------
// Bases and the Veronese lift

namespace {

void monomials_of_degree(int dim, int degree, int var, std::vector<int>& current, std::vector<Monomial>& out) {
  if (var == dim - 1) {
    current[static_cast<std::size_t>(var)] = degree;
    out.emplace_back(current);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    monomials_of_degree(dim, degree - e, var + 1, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

// For every basis monomial: index of (monomial / x_v) in the basis and v,
// or -1 when not present (then the value is computed from scratch).
struct LiftPlan {
  std::vector<int> parent;
  std::vector<int> var;
};

LiftPlan plan_lift(std::span<const Monomial> basis) {
  LiftPlan plan;
  plan.parent.assign(basis.size(), -1);
  plan.var.assign(basis.size(), -1);
  std::map<Monomial, int> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<int>(i));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Monomial& m = basis[i];
    for (int v = m.dimension() - 1; v >= 0; --v) {
      if (m.exponent(v) == 0) continue;
      plan.var[i] = v;
      if (m.total_degree() == 1) break;
      std::vector<int> e = m.exponents();
      e[static_cast<std::size_t>(v)] -= 1;
      auto it = index.find(Monomial(std::move(e)));
      if (it != index.end() && it->second < static_cast<int>(i)) plan.parent[i] = it->second;
      break;
    }
  }
  return plan;
}

template <typename T>
std::vector<T> lift(std::span<const T> x, std::span<const Monomial> basis) {
  std::vector<T> out(basis.size());
  LiftPlan plan = plan_lift(basis);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Monomial& m = basis[i];
    if (m.dimension() != static_cast<int>(x.size())) throw DimensionMismatch("veronese: basis dimension mismatch");
    if (m.total_degree() == 0) {
      out[i] = T(1);
    } else if (m.total_degree() == 1) {
      out[i] = x[static_cast<std::size_t>(plan.var[i])];
    } else if (plan.parent[i] >= 0) {
      out[i] = out[static_cast<std::size_t>(plan.parent[i])] * x[static_cast<std::size_t>(plan.var[i])];
    } else {
      T v(1);
      for (int k = 0; k < m.dimension(); ++k) {
        for (int e = 0; e < m.exponent(k); ++e) v *= x[static_cast<std::size_t>(k)];
      }
      out[i] = v;
    }
  }
  return out;
}

}  // namespace

std::vector<Monomial> monomial_basis(int dimension, int max_degree) {
  std::vector<Monomial> out;
  std::vector<int> current(static_cast<std::size_t>(dimension), 0);
  for (int deg = 1; deg <= max_degree; ++deg) monomials_of_degree(dimension, deg, 0, current, out);
  return out;
}

int min_degree(long k, int dimension) {
  int D = 1;
  while (binomial(static_cast<unsigned>(D + dimension), static_cast<unsigned>(dimension)) - 1 < k) ++D;
  return D;
}

std::vector<Rational> veronese(std::span<const Rational> x, std::span<const Monomial> basis) {
  return lift<Rational>(x, basis);
}

std::vector<double> veronese(std::span<const double> x, std::span<const Monomial> basis) {
  return lift<double>(x, basis);
}

MultiPoly product(std::span<const MultiPoly> fs) {
  if (fs.empty()) throw std::invalid_argument("product: empty factor list has no dimension");
  MultiPoly r = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) r *= fs[i];
  return r;
}

// ---------------------------------------------------------------------------
// Certified sign evaluation

namespace {
constexpr double kUnit = 0x1.0p-53;
constexpr double kUnderflowSlack = 0x1.0p-1000;
constexpr std::size_t kStackPowers = 256;

long log2_magnitude(const Rational& q) {
  return static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
         static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
}
}  // namespace

SignEvaluator::SignEvaluator(const MultiPoly& f) : poly_(f), dim_(f.dimension()) {
  max_exp_.assign(static_cast<std::size_t>(dim_), 0);
  long shift = std::numeric_limits<long>::min();
  for (const auto& t : f.terms()) {
    for (int v = 0; v < dim_; ++v) {
      max_exp_[static_cast<std::size_t>(v)] = std::max(max_exp_[static_cast<std::size_t>(v)], t.monomial.exponent(v));
    }
    shift = std::max(shift, log2_magnitude(t.coefficient));
  }
  coeffs_.reserve(f.size());
  flat_exps_.reserve(f.size() * static_cast<std::size_t>(dim_));
  Rational scaled;
  for (const auto& t : f.terms()) {
    if (shift >= 0) {
      mpq_div_2exp(scaled.get_mpq_t(), t.coefficient.get_mpq_t(), static_cast<mp_bitcnt_t>(shift));
    } else {
      mpq_mul_2exp(scaled.get_mpq_t(), t.coefficient.get_mpq_t(), static_cast<mp_bitcnt_t>(-shift));
    }
    coeffs_.push_back(scaled.get_d());
    for (int v = 0; v < dim_; ++v) flat_exps_.push_back(t.monomial.exponent(v));
  }
  const int deg = std::max(f.degree(), 0);
  unit_count_ = 3 * deg + dim_ + 4 + static_cast<int>(f.size());
}

Sign SignEvaluator::sign(std::span<const Rational> x, std::span<const double> approx) const {
  if (static_cast<int>(x.size()) != dim_ || approx.size() != x.size()) {
    throw DimensionMismatch("eval_sign: point dimension mismatch");
  }
  if (coeffs_.empty()) return Sign::Zero;

  std::size_t total = 0;
  for (int e : max_exp_) total += static_cast<std::size_t>(e) + 1;
  double stack_buf[kStackPowers];
  std::vector<double> heap_buf;
  double* pw = stack_buf;
  if (total > kStackPowers) {
    heap_buf.resize(total);
    pw = heap_buf.data();
  }
  std::size_t offsets[16];
  std::vector<std::size_t> heap_offsets;
  std::size_t* off = offsets;
  if (dim_ > 16) {
    heap_offsets.resize(static_cast<std::size_t>(dim_));
    off = heap_offsets.data();
  }
  std::size_t pos = 0;
  for (int v = 0; v < dim_; ++v) {
    off[v] = pos;
    pw[pos] = 1.0;
    for (int e = 1; e <= max_exp_[static_cast<std::size_t>(v)]; ++e) pw[pos + e] = pw[pos + e - 1] * approx[static_cast<std::size_t>(v)];
    pos += static_cast<std::size_t>(max_exp_[static_cast<std::size_t>(v)]) + 1;
  }

  double sum = 0.0;
  double abs_sum = 0.0;
  double mono_sum = 0.0;  // covers coefficients that underflowed when scaled
  const int* e = flat_exps_.data();
  for (double c : coeffs_) {
    double m = 1.0;
    for (int v = 0; v < dim_; ++v) m *= pw[off[v] + static_cast<std::size_t>(e[v])];
    e += dim_;
    const double t = c * m;
    sum += t;
    abs_sum += std::fabs(t);
    mono_sum += std::fabs(m);
  }
  if (std::isfinite(sum) && std::isfinite(abs_sum) && std::isfinite(mono_sum)) {
    const double bound = 2.0 * unit_count_ * kUnit * abs_sum + unit_count_ * kUnderflowSlack +
                         mono_sum * 0x1.0p-1070;
    if (sum > bound) return Sign::Positive;
    if (sum < -bound) return Sign::Negative;
  }
  return sign_from_int(sgn(poly_.evaluate(x)));
}

Sign SignEvaluator::sign(std::span<const Rational> x) const {
  std::vector<double> approx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) approx[i] = to_double(x[i]);
  return sign(x, approx);
}

Sign eval_sign(const MultiPoly& f, std::span<const Rational> p) { return SignEvaluator(f).sign(p); }

std::vector<Sign> multi_eval_sign(const MultiPoly& f, std::span<const RationalPoint> points) {
  SignEvaluator ev(f);
  std::vector<Sign> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(ev.sign(p));
  return out;
}

}  // namespace ppart
