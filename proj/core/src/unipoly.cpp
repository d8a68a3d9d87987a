#include "ppart/unipoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ppart/errors.hpp"

namespace ppart {

namespace {

void trim(std::vector<Rational>& c) {
  while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
}

// p(x + a), by repeated synthetic division.
std::vector<Rational> taylor_shift(std::vector<Rational> c, const Rational& a) {
  const std::size_t n = c.size();
  if (n < 2 || sgn(a) == 0) return c;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = n - 1; j-- > i;) c[j] += a * c[j + 1];
  }
  return c;
}

// Sign variations of (1+t)^n p(lo + (hi-lo)/(1+t)); bounds the number of
// roots of p in (lo, hi) and matches its parity.
int descartes_bound(const UniPoly& p, const Rational& lo, const Rational& hi) {
  std::vector<Rational> c = taylor_shift(p.coeffs(), lo);
  const Rational w = hi - lo;
  Rational s(1);
  for (auto& v : c) {
    v *= s;
    s *= w;
  }
  std::reverse(c.begin(), c.end());
  c = taylor_shift(std::move(c), Rational(1));
  int changes = 0;
  int last = 0;
  for (const auto& v : c) {
    const int sv = sgn(v);
    if (sv == 0) continue;
    if (last != 0 && sv != last) ++changes;
    last = sv;
  }
  return changes;
}

Rational cauchy_bound(const UniPoly& p) {
  Rational m(0);
  const Rational lead = abs(p.lead());
  for (int i = 0; i < p.degree(); ++i) {
    const Rational r = abs(p[static_cast<std::size_t>(i)]) / lead;
    if (r > m) m = r;
  }
  Rational b(1);
  while (b <= m + 1) b *= 2;
  return b;
}

}  // namespace

UniPoly::UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(c_); }

Rational UniPoly::evaluate(const Rational& x) const {
  Rational acc(0);
  for (std::size_t i = c_.size(); i-- > 0;) {
    acc *= x;
    acc += c_[i];
  }
  return acc;
}

Sign UniPoly::sign_at_infinity(bool plus_inf) const {
  if (c_.empty()) return Sign::Zero;
  const int s = sgn(c_.back());
  return sign_from_int((plus_inf || degree() % 2 == 0) ? s : -s);
}

UniPoly UniPoly::operator-() const {
  std::vector<Rational> c(c_);
  for (auto& v : c) v = -v;
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<Rational> c(std::max(c_.size(), o.c_.size()), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + (-o); }

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (c_.empty() || o.c_.empty()) return {};
  std::vector<Rational> c(c_.size() + o.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  }
  return UniPoly(std::move(c));
}

UniPoly UniPoly::operator*(const Rational& k) const {
  std::vector<Rational> c(c_);
  for (auto& v : c) v *= k;
  return UniPoly(std::move(c));
}

UniPoly UniPoly::derivative() const {
  if (c_.size() < 2) return {};
  std::vector<Rational> c(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return UniPoly(std::move(c));
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& divisor) const {
  if (divisor.is_zero()) throw std::invalid_argument("UniPoly::divmod: division by zero");
  std::vector<Rational> r(c_);
  const int dd = divisor.degree();
  if (degree() < dd) return {UniPoly(), *this};
  std::vector<Rational> q(static_cast<std::size_t>(degree() - dd + 1), Rational(0));
  const Rational& lead = divisor.c_.back();
  for (int i = degree(); i >= dd; --i) {
    const Rational& top = r[static_cast<std::size_t>(i)];
    if (sgn(top) == 0) continue;
    const Rational f = top / lead;
    q[static_cast<std::size_t>(i - dd)] = f;
    for (int j = 0; j <= dd; ++j) r[static_cast<std::size_t>(i - dd + j)] -= f * divisor.c_[static_cast<std::size_t>(j)];
  }
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

UniPoly UniPoly::monic() const {
  if (c_.empty()) return {};
  return *this * (Rational(1) / c_.back());
}

UniPoly UniPoly::primitive() const {
  if (c_.empty()) return {};
  Integer l(1);
  for (const auto& v : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  Integer g(0);
  std::vector<Rational> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    c[i] = Rational(c_[i].get_num() * (l / c_[i].get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c[i].get_num_mpz_t());
  }
  if (sgn(c_.back()) < 0) g = -g;
  for (auto& v : c) v /= g;
  return UniPoly(std::move(c));
}

std::string UniPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (sgn(c_[i]) == 0) continue;
    if (!first) os << (sgn(c_[i]) < 0 ? " - " : " + ");
    if (first && sgn(c_[i]) < 0) os << "-";
    const Rational a = abs(c_[i]);
    if (i == 0 || a != 1) os << ppart::to_string(a);
    if (i > 0) os << (a != 1 ? "*x" : "x");
    if (i > 1) os << "^" << i;
    first = false;
  }
  return os.str();
}

UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = a.divmod(b).second;
    a = std::move(b);
    b = r.primitive();
  }
  return a.primitive();
}

UniPoly square_free_part(const UniPoly& p) {
  if (p.degree() < 1) return p.primitive();
  const UniPoly g = gcd(p, p.derivative());
  return p.divmod(g).first.primitive();
}

void refine(const UniPoly& p, IsolatingInterval& iv) {
  if (iv.exact) return;
  const Rational mid = (iv.lo + iv.hi) / 2;
  const Sign sm = p.sign_at(mid);
  if (sm == Sign::Zero) {
    iv = IsolatingInterval{mid, mid, true};
    return;
  }
  if (sm == p.sign_at(iv.lo)) {
    iv.lo = mid;
  } else {
    iv.hi = mid;
  }
}

bool separate(const UniPoly& p, IsolatingInterval& iv, const Rational& x) {
  while (true) {
    if (iv.exact) return iv.lo == x;
    if (x < iv.lo || x > iv.hi) return false;
    const int sx = sgn(p.evaluate(x));
    if (x == iv.lo || x == iv.hi) {
      if (sx != 0) return false;
    } else if (sx == 0) {
      // The interval holds a single root.
      iv = IsolatingInterval{x, x, true};
      return true;
    }
    refine(p, iv);
  }
}

std::vector<IsolatingInterval> isolate_roots(const UniPoly& p_in) {
  if (p_in.is_zero()) throw std::invalid_argument("isolate_roots: zero polynomial");
  const UniPoly p = square_free_part(p_in);
  std::vector<IsolatingInterval> out;
  if (p.degree() < 1) return out;
  const Rational b = cauchy_bound(p);
  struct Job {
    Rational lo, hi;
  };
  std::vector<Job> stack{{-b, b}};
  while (!stack.empty()) {
    Job job = std::move(stack.back());
    stack.pop_back();
    const int v = descartes_bound(p, job.lo, job.hi);
    if (v == 0) continue;
    const Rational mid = (job.lo + job.hi) / 2;
    if (v == 1 && sgn(p.evaluate(job.lo)) != 0 && sgn(p.evaluate(job.hi)) != 0) {
      // A root at the midpoint is reported exactly.
      if (sgn(p.evaluate(mid)) == 0) {
        out.push_back(IsolatingInterval{mid, mid, true});
      } else {
        out.push_back(IsolatingInterval{job.lo, job.hi, false});
      }
      continue;
    }
    if (sgn(p.evaluate(mid)) == 0) out.push_back(IsolatingInterval{mid, mid, true});
    stack.push_back(Job{mid, job.hi});
    stack.push_back(Job{job.lo, mid});
  }
  std::sort(out.begin(), out.end(), [](const IsolatingInterval& a, const IsolatingInterval& c) { return a.lo < c.lo; });
  // Closed intervals must not touch.
  for (std::size_t i = 0; i + 1 < out.size(); ++i) {
    while (out[i].hi >= out[i + 1].lo) {
      if (!out[i].exact) refine(p, out[i]);
      if (out[i].hi >= out[i + 1].lo && !out[i + 1].exact) refine(p, out[i + 1]);
    }
  }
  return out;
}

SturmSequence::SturmSequence(const UniPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("SturmSequence: zero polynomial");
  // Only positive rescaling keeps the sign pattern.
  auto normalize = [](const UniPoly& q) { return q * (Rational(1) / abs(q.lead())); };
  seq_.push_back(normalize(p));
  UniPoly d = p.derivative();
  if (d.is_zero()) return;
  seq_.push_back(normalize(d));
  while (true) {
    UniPoly r = seq_[seq_.size() - 2].divmod(seq_.back()).second;
    if (r.is_zero()) break;
    seq_.push_back(-normalize(r));
  }
}

int SturmSequence::variations(const std::optional<Rational>& x, bool plus_inf) const {
  int changes = 0;
  int last = 0;
  for (const auto& s : seq_) {
    const int v = x ? sgn(s.evaluate(*x)) : static_cast<int>(s.sign_at_infinity(plus_inf));
    if (v == 0) continue;
    if (last != 0 && v != last) ++changes;
    last = v;
  }
  return changes;
}

int SturmSequence::count(const std::optional<Rational>& a, const std::optional<Rational>& b) const {
  return variations(a, false) - variations(b, true);
}

std::vector<UniPoly> as_poly_in_y(const MultiPoly& f) {
  if (f.dimension() != 2) throw DimensionMismatch("as_poly_in_y: bivariate polynomial expected");
  std::vector<std::vector<Rational>> c;
  for (const auto& t : f.terms()) {
    const auto ex = static_cast<std::size_t>(t.monomial.exponent(0));
    const auto ey = static_cast<std::size_t>(t.monomial.exponent(1));
    if (c.size() <= ey) c.resize(ey + 1);
    if (c[ey].size() <= ex) c[ey].resize(ex + 1, Rational(0));
    c[ey][ex] += t.coefficient;
  }
  std::vector<UniPoly> out;
  out.reserve(c.size());
  for (auto& v : c) out.emplace_back(std::move(v));
  return out;
}

UniPoly restrict_x(const std::vector<UniPoly>& in_y, const Rational& x0) {
  std::vector<Rational> c;
  c.reserve(in_y.size());
  for (const auto& q : in_y) c.push_back(q.evaluate(x0));
  return UniPoly(std::move(c));
}

UniPoly sylvester_resultant(const MultiPoly& f, const MultiPoly& g) {
  if (f.is_zero() || g.is_zero()) throw std::invalid_argument("sylvester_resultant: zero polynomial");
  const auto fy = as_poly_in_y(f);
  const auto gy = as_poly_in_y(g);
  const std::size_t m = fy.size() - 1;
  const std::size_t n = gy.size() - 1;
  const std::size_t size = m + n;
  if (size == 0) return UniPoly::constant(Rational(1));
  std::vector<std::vector<UniPoly>> mat(size, std::vector<UniPoly>(size));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i <= m; ++i) mat[r][r + i] = fy[m - i];
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i <= n; ++i) mat[n + r][r + i] = gy[n - i];
  }
  // Fraction-free elimination over Q[x].
  bool negate = false;
  UniPoly prev = UniPoly::constant(Rational(1));
  for (std::size_t k = 0; k + 1 < size; ++k) {
    if (mat[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < size && mat[p][k].is_zero()) ++p;
      if (p == size) return {};
      std::swap(mat[k], mat[p]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) {
        UniPoly num = mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j];
        auto [q, r] = num.divmod(prev);
        if (!r.is_zero()) throw std::logic_error("sylvester_resultant: inexact division");
        mat[i][j] = std::move(q);
      }
      mat[i][k] = UniPoly();
    }
    prev = mat[k][k];
  }
  UniPoly det = mat[size - 1][size - 1];
  return negate ? -det : det;
}

}  // namespace ppart
