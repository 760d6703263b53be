#include "dhr/rational_poly.hpp"

#include "dhr/errors.hpp"

#include <algorithm>

namespace dhr {

namespace {

void normalise(RationalPoly& p) {
  while (p.a.size() > 1 && p.a.back() == 0) p.a.pop_back();
  if (p.a.empty()) p.a.push_back(0);
}

using ZPoly = std::vector<mpz_class>;

void trim(ZPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

bool is_zero(const ZPoly& p) { return p.size() == 1 && p[0] == 0; }

// Divides by the positive content.
void make_primitive(ZPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g > 1) {
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
}

// A positive multiple of the remainder of f by g: |lc g|^(df - dg + 1) f mod g.
ZPoly positive_prem(ZPoly f, const ZPoly& g) {
  const std::size_t dg = g.size() - 1;
  const mpz_class& lc = g.back();
  const mpz_class m = abs(lc);
  const int s = sgn(lc);
  while (f.size() > dg && !is_zero(f)) {
    // f <- |lc| f - s lead(f) x^k g keeps the multiplier positive
    const std::size_t k = f.size() - 1 - dg;
    const mpz_class c = f.back();
    for (auto& x : f) x *= m;
    for (std::size_t i = 0; i <= dg; ++i) {
      if (s > 0) {
        f[i + k] -= c * g[i];
      } else {
        f[i + k] += c * g[i];
      }
    }
    f.pop_back();
    trim(f);
    if (f.empty()) f.push_back(0);
  }
  return f;
}

ZPoly to_integer(const RationalPoly& p) {
  mpz_class den = 1;
  for (const auto& c : p.a) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  ZPoly z;
  for (const auto& c : p.a) z.push_back(den / c.get_den() * c.get_num());
  trim(z);
  make_primitive(z);
  return z;
}

// sign of sum z_i n^i d^(deg - i), d > 0
int sign_at(const ZPoly& z, const mpz_class& n, const mpz_class& d) {
  mpz_class acc = z.back();
  mpz_class scale = 1;
  for (std::size_t i = z.size() - 1; i-- > 0;) {
    scale *= d;
    acc *= n;
    acc += z[i] * scale;
  }
  return sgn(acc);
}

int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace

mpq_class RationalPoly::operator()(const mpq_class& u) const {
  mpq_class acc = 0;
  for (std::size_t i = a.size(); i-- > 0;) acc = acc * u + a[i];
  return acc;
}

Interval RationalPoly::eval(const Interval& u) const {
  Interval acc(u.precision());
  for (std::size_t i = a.size(); i-- > 0;) acc = acc * u + Interval(a[i], u.precision());
  return acc;
}

std::vector<Interval> RationalPoly::to_intervals(Precision prec) const {
  std::vector<Interval> c;
  c.reserve(a.size());
  for (const auto& x : a) c.emplace_back(x, prec);
  return c;
}

RationalPoly derivative(const RationalPoly& p) {
  RationalPoly d;
  for (std::size_t i = 1; i < p.a.size(); ++i) d.a.push_back(p.a[i] * static_cast<long>(i));
  if (d.a.empty()) d.a.push_back(0);
  return d;
}

RationalPoly operator+(const RationalPoly& p, const RationalPoly& q) {
  RationalPoly r;
  r.a.assign(std::max(p.a.size(), q.a.size()), mpq_class(0));
  for (std::size_t i = 0; i < p.a.size(); ++i) r.a[i] += p.a[i];
  for (std::size_t i = 0; i < q.a.size(); ++i) r.a[i] += q.a[i];
  normalise(r);
  return r;
}

RationalPoly operator-(const RationalPoly& p, const RationalPoly& q) { return p + mpq_class(-1) * q; }

RationalPoly operator*(const mpq_class& c, const RationalPoly& p) {
  RationalPoly r = p;
  for (auto& x : r.a) x *= c;
  normalise(r);
  return r;
}

bool operator==(const RationalPoly& p, const RationalPoly& q) {
  RationalPoly a = p, b = q;
  normalise(a);
  normalise(b);
  return a.a == b.a;
}

RationalPoly compute_q(int kappa) {
  if (kappa < 1) throw UsageError("compute_q: kappa must be positive");
  const int d = 2 * kappa - 1;
  RationalPoly q;
  q.a.assign(static_cast<std::size_t>(d) + 1, mpq_class(0));
  q.a[d] = 1;
  for (int r = d - 1; r >= 0; --r) {
    mpq_class s = 0;
    for (int n = r + 1; n <= d; ++n) {
      mpz_class c;
      mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
      s += c * q.a[n];
    }
    q.a[r] = -mpq_class(kappa, d - r) * s;
    q.a[r].canonicalize();
  }
  return q;
}

RationalPoly shift_rational_poly(const RationalPoly& p, const mpq_class& u0) {
  // Horner in the ring Q[u]: acc = acc * (u0 + u) + a_i
  RationalPoly acc;
  acc.a.push_back(0);
  for (std::size_t i = p.a.size(); i-- > 0;) {
    RationalPoly next;
    next.a.assign(acc.a.size() + 1, mpq_class(0));
    for (std::size_t j = 0; j < acc.a.size(); ++j) {
      next.a[j] += acc.a[j] * u0;
      next.a[j + 1] += acc.a[j];
    }
    next.a[0] += p.a[i];
    acc = std::move(next);
  }
  acc.a.resize(std::max<std::size_t>(p.a.size(), 1));
  return acc;
}

RationalPoly shift_rational_poly(const RationalPoly& p, long u0) { return shift_rational_poly(p, mpq_class(u0)); }

SturmSequence::SturmSequence(const RationalPoly& p) {
  ZPoly f = to_integer(p);
  if (is_zero(f)) throw UsageError("SturmSequence: zero polynomial");
  seq_.push_back(f);
  if (f.size() == 1) return;
  ZPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
  make_primitive(d);
  seq_.push_back(std::move(d));
  while (seq_.back().size() > 1) {
    ZPoly r = positive_prem(seq_[seq_.size() - 2], seq_.back());
    if (is_zero(r)) break;
    for (auto& c : r) c = -c;
    make_primitive(r);
    seq_.push_back(std::move(r));
  }
}

int SturmSequence::variations_at(const mpq_class& x) const {
  std::vector<int> s;
  s.reserve(seq_.size());
  for (const auto& p : seq_) s.push_back(sign_at(p, x.get_num(), x.get_den()));
  return variations(s);
}

int SturmSequence::count(const mpq_class& lo, const mpq_class& hi) const {
  return variations_at(lo) - variations_at(hi);
}

int SturmSequence::count_above(const mpq_class& lo) const {
  std::vector<int> s;
  for (const auto& p : seq_) s.push_back(sgn(p.back()));
  return variations_at(lo) - variations(s);
}

int count_real_roots(const RationalPoly& p, const mpq_class& lo, const mpq_class& hi) {
  return SturmSequence(p).count(lo, hi);
}

int count_roots_above(const RationalPoly& p, const mpq_class& lo) { return SturmSequence(p).count_above(lo); }

int sign_at_dyadic(const RationalPoly& p, const mpz_class& n, unsigned long k) {
  // clear denominators, then Horner on sum a_i n^i 2^{k(d-i)}
  mpz_class den = 1;
  for (const auto& c : p.a) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  const int d = p.degree();
  mpz_class acc = den / p.a[d].get_den() * p.a[d].get_num();
  mpz_class scale = 1;
  for (int i = d - 1; i >= 0; --i) {
    scale <<= k;
    acc *= n;
    acc += den / p.a[i].get_den() * p.a[i].get_num() * scale;
  }
  return sgn(acc);
}

}  // namespace dhr
