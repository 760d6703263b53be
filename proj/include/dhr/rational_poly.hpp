#pragma once

// Exact polynomials with rational coefficients.

#include "dhr/interval.hpp"

#include <gmpxx.h>

#include <vector>

namespace dhr {

struct RationalPoly {
  // a[n] is the coefficient of u^n.
  std::vector<mpq_class> a;

  int degree() const { return static_cast<int>(a.size()) - 1; }
  mpq_class operator()(const mpq_class& u) const;
  Interval eval(const Interval& u) const;
  std::vector<Interval> to_intervals(Precision prec) const;
};

RationalPoly derivative(const RationalPoly& p);
RationalPoly operator+(const RationalPoly& p, const RationalPoly& q);
RationalPoly operator-(const RationalPoly& p, const RationalPoly& q);
RationalPoly operator*(const mpq_class& c, const RationalPoly& p);
bool operator==(const RationalPoly& p, const RationalPoly& q);

// The monic degree 2 kappa - 1 polynomial q with (u q(u))' = kappa (q(u) + q(u+1)).
RationalPoly compute_q(int kappa);

// Coefficients of p(u0 + u) as a polynomial in u.
RationalPoly shift_rational_poly(const RationalPoly& p, long u0);
RationalPoly shift_rational_poly(const RationalPoly& p, const mpq_class& u0);

// Sturm sequence of p, stored as primitive integer polynomials (each a
// positive multiple of the rational Sturm remainder).
class SturmSequence {
 public:
  explicit SturmSequence(const RationalPoly& p);
  // Number of distinct real roots in (lo, hi].
  int count(const mpq_class& lo, const mpq_class& hi) const;
  // Number of distinct real roots greater than lo.
  int count_above(const mpq_class& lo) const;
  std::size_t length() const { return seq_.size(); }

 private:
  int variations_at(const mpq_class& x) const;
  std::vector<std::vector<mpz_class>> seq_;
};

// Number of distinct real roots in (lo, hi], by a Sturm sequence.
int count_real_roots(const RationalPoly& p, const mpq_class& lo, const mpq_class& hi);
// Sign of p(n / 2^k), computed in integer arithmetic.
int sign_at_dyadic(const RationalPoly& p, const mpz_class& n, unsigned long k);
// Number of distinct real roots greater than lo.
int count_roots_above(const RationalPoly& p, const mpq_class& lo);

}  // namespace dhr
