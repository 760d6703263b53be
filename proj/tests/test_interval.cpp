#include "dhr/errors.hpp"
#include "dhr/interval.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dhr;

namespace {

const Precision P(128);

Interval iv(long lo, long hi) { return Interval(lo, hi, P); }

bool same(const Interval& a, long lo, long hi) {
  return mpfr_cmp_si(a.lo(), lo) == 0 && mpfr_cmp_si(a.hi(), hi) == 0;
}

Interval random_interval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  double x = d(rng), y = d(rng);
  if (x > y) std::swap(x, y);
  return hull(Interval::from_double(x, P), Interval::from_double(y, P));
}

// Exact x op y bracketed at high precision.
bool point_inside(const Interval& r, double x, double y, char op) {
  mpfr_t lo, hi, a, b;
  mpfr_inits2(400, lo, hi, a, b, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_d(a, x, MPFR_RNDN);
  mpfr_set_d(b, y, MPFR_RNDN);
  auto apply = [&](mpfr_ptr out, mpfr_rnd_t rnd) {
    switch (op) {
      case '+': mpfr_add(out, a, b, rnd); break;
      case '-': mpfr_sub(out, a, b, rnd); break;
      case '*': mpfr_mul(out, a, b, rnd); break;
      default: mpfr_div(out, a, b, rnd); break;
    }
  };
  apply(lo, MPFR_RNDD);
  apply(hi, MPFR_RNDU);
  const bool ok = mpfr_lessequal_p(r.lo(), lo) && mpfr_lessequal_p(hi, r.hi());
  mpfr_clears(lo, hi, a, b, static_cast<mpfr_ptr>(nullptr));
  return ok;
}

Interval apply(const Interval& a, const Interval& b, char op) {
  switch (op) {
    case '+': return a + b;
    case '-': return a - b;
    case '*': return a * b;
    default: return a / b;
  }
}

}  // namespace

TEST(IntervalArith, AddEndpoints) { EXPECT_TRUE(same(iv(1, 2) + iv(3, 4), 4, 6)); }

TEST(IntervalArith, MulSignAnalysis) { EXPECT_TRUE(same(iv(-1, 1) * iv(-1, 1), -1, 1)); }

TEST(IntervalArith, DivisionWidth) {
  const Interval third = Interval(1, P) / Interval(3, P);
  EXPECT_TRUE(third.contains(Interval(mpq_class(1, 3), Precision(512))));
  EXPECT_LE(third.log2_width(), 1.0 - static_cast<double>(P.bits));
}

TEST(IntervalArith, DivisionByZeroThrows) {
  EXPECT_THROW(iv(1, 2) / iv(-1, 1), DomainError);
  EXPECT_THROW(iv(1, 2) / iv(0, 0), DomainError);
}

TEST(IntervalArith, RejectsNonFinite) {
  EXPECT_THROW(Interval::from_double(NAN, P), DomainError);
  EXPECT_THROW(Interval::from_double(INFINITY, P), DomainError);
}

TEST(IntervalElem, ExpLogSqrtPow) {
  EXPECT_TRUE(exp(Interval(0, P)).contains(1));
  EXPECT_LE(exp(Interval(0, P)).log2_width(), -120.0);
  EXPECT_TRUE(log(Interval(1, P)).contains(0));
  const Interval half = Interval(mpq_class(1, 2), P);
  const Interval two = pow(Interval(4, P), half);
  EXPECT_TRUE(two.contains(2));
  EXPECT_LE(two.log2_width(), -120.0);
  EXPECT_TRUE(sqrt(Interval(4, P)).contains(2));
  EXPECT_THROW(log(iv(-1, 1)), DomainError);
  EXPECT_THROW(sqrt(iv(-2, -1)), DomainError);
  EXPECT_THROW(pow(iv(-2, -1), half), DomainError);
}

TEST(IntervalProps, ContainmentMonotonicity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> shrink(0.0, 1.0);
  for (int it = 0; it < 500; ++it) {
    const Interval outer_a = random_interval(rng);
    const Interval outer_b = random_interval(rng);
    // nested subintervals
    auto inner = [&](const Interval& o) {
      const double lo = o.lo_double(), hi = o.hi_double();
      double x = lo + (hi - lo) * shrink(rng), y = lo + (hi - lo) * shrink(rng);
      if (x > y) std::swap(x, y);
      Interval r = hull(Interval::from_double(x, P), Interval::from_double(y, P));
      return intersect(r, o).value_or(o);
    };
    const Interval a = inner(outer_a);
    const Interval b = inner(outer_b);
    for (char op : {'+', '-', '*', '/'}) {
      if (op == '/' && outer_b.contains_zero()) continue;
      EXPECT_TRUE(apply(outer_a, outer_b, op).contains(apply(a, b, op))) << op;
    }
  }
}

TEST(IntervalProps, PointContainment) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  int checked = 0;
  while (checked < 1000) {
    const Interval a = random_interval(rng);
    const Interval b = random_interval(rng);
    const double x = a.lo_double() + (a.hi_double() - a.lo_double()) * t(rng);
    const double y = b.lo_double() + (b.hi_double() - b.lo_double()) * t(rng);
    if (!a.contains(Interval::from_double(x, P)) || !b.contains(Interval::from_double(y, P))) continue;
    for (char op : {'+', '-', '*', '/'}) {
      if (op == '/' && b.contains_zero()) continue;
      ASSERT_TRUE(point_inside(apply(a, b, op), x, y, op)) << op;
    }
    ++checked;
  }
}

TEST(ExpMoment, SmallCases) {
  const Interval u0(2, P);
  const double i0 = oracle::quad([](double z) { return std::exp(-2 * z); }, 0, 1);
  const double i1 = oracle::quad([](double z) { return z * std::exp(-2 * z); }, 0, 1);
  const Interval e0 = exp_moment(0, u0);
  const Interval e1 = exp_moment(1, u0);
  EXPECT_NEAR(e0.mid_double(), i0, 1e-12);
  EXPECT_NEAR(e1.mid_double(), i1, 1e-12);
  EXPECT_NEAR(e0.mid_double(), 0.4323324, 1e-7);
  EXPECT_NEAR(e1.mid_double(), 0.1484985, 1e-7);
  EXPECT_LE(e0.log2_width(), -110.0);
}

TEST(ExpMoment, DecaysInU0) {
  double prev = INFINITY;
  for (long u = 1; u <= 4096; u *= 2) {
    const Interval v = exp_moment(3, Interval(u, P));
    EXPECT_LE(v.hi_double(), 1.0 / static_cast<double>(u));
    EXPECT_LT(v.hi_double(), prev);
    prev = v.hi_double();
  }
}

TEST(ExpMoment, RejectsZero) { EXPECT_THROW(exp_moment(2, iv(-1, 1)), DomainError); }

TEST(ExpMoment, RecurrenceAgreesWithSeries) {
  for (long u : {2L, 5L, 50L}) {
    const Interval u0(u, P);
    for (long n = 0; n <= 64; ++n) {
      const Interval s = exp_moment_series(n, u0);
      const Interval r = exp_moment_recurrence(n, u0);
      EXPECT_TRUE(s.intersects(r)) << "u0=" << u << " n=" << n;
      const double q = oracle::quad([&](double z) { return std::pow(z, n) * std::exp(-u * z); }, 0, 1, 1e-15);
      EXPECT_NEAR(exp_moment(n, u0).mid_double(), q, 1e-13);
    }
  }
}

TEST(Constants, EulerGammaAndFloor) {
  const Interval g = euler_gamma(P);
  EXPECT_NEAR(g.mid_double(), 0.5772156649015329, 1e-15);
  EXPECT_EQ(certified_floor(Interval::from_string("3.75", P)), 3);
  EXPECT_FALSE(certified_floor(hull(Interval(mpq_class(5, 2), P), Interval(mpq_class(7, 2), P))).has_value());
  EXPECT_TRUE(binomial(10, 3, P).contains(120));
  EXPECT_TRUE(factorial(6, P).contains(720));
}
