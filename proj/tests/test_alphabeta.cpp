#include "dhr/alphabeta.hpp"
#include "dhr/errors.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dhr;

namespace {

// Greatest real root of q by double-precision bisection on a sign change
// scan from the top down.
double rho_oracle(const RationalPoly& q) {
  auto f = [&](double u) { return q(mpq_class(u)).get_d(); };
  double hi = 8.0 * q.degree();
  double lo = hi;
  while (f(lo) > 0) lo -= 1.0 / 64;
  for (int i = 0; i < 60; ++i) {
    const double m = (lo + hi) / 2;
    (f(m) > 0 ? hi : lo) = m;
  }
  return (lo + hi) / 2;
}

}  // namespace

TEST(Rho, GreatestRootOfQ) {
  for (int kappa : {1, 2, 3, 5, 8}) {
    SieveContext ctx(kappa);
    const Interval rho = find_rho(ctx.q(), ctx.precision());
    EXPECT_TRUE(ctx.q().eval(rho).contains_zero()) << kappa;
    EXPECT_LT(rho.log2_width(), -static_cast<double>(ctx.target().bits));
    EXPECT_NEAR(rho.mid_double(), rho_oracle(ctx.q()), 1e-9) << kappa;
    mpq_class top;
    mpfr_get_q(top.get_mpq_t(), rho.hi());
    EXPECT_EQ(count_roots_above(ctx.q(), top), 0);
  }
}

TEST(Rho, DyadicSignMatchesRationalEvaluation) {
  const RationalPoly q = compute_q(4);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-4000, 4000);
  for (int i = 0; i < 200; ++i) {
    const long n = num(rng);
    const unsigned long k = static_cast<unsigned long>(i % 12);
    const mpq_class u(n, mpz_class(1) << k);
    const int ref = sgn(q(u));
    EXPECT_EQ(sign_at_dyadic(q, mpz_class(n), k), ref) << n << "/2^" << k;
  }
}

TEST(PieceIndex, AmbiguousAtIntegers) {
  const Precision P(64);
  EXPECT_EQ(piece_index(Interval::from_string("5.5", P)), 5);
  EXPECT_EQ(piece_index(Interval(5, P)), 5);
  EXPECT_THROW(piece_index(Interval(4, 5, P)), AmbiguousBoundaryError);
}

TEST(BetaIntegrand, MatchesQuadrature) {
  const int kappa = 2;
  SieveContext ctx(kappa);
  BetaIntegrand J(ctx);
  const Precision P = ctx.precision();
  const long double ref =
      kappa * oracle::integrate([&](long double t) { return t / oracle::sigma(kappa, t - 1); }, 2.5L, 4.75L, 60);
  const Interval v = J.integral(Interval::from_string("2.5", P), Interval::from_string("4.75", P));
  EXPECT_NEAR(v.mid_double(), static_cast<double>(ref), 1e-11 * static_cast<double>(ref));
  // additivity over a split point
  const Interval a = J.integral(Interval::from_string("2.5", P), Interval::from_string("3.2", P));
  const Interval b = J.integral(Interval::from_string("3.2", P), Interval::from_string("4.75", P));
  EXPECT_TRUE((a + b).intersects(v));
}

TEST(CriticalPair, KnownValuesKappaTwoAndThree) {
  struct Row {
    int kappa;
    const char* alpha;
    const char* beta;
  };
  for (const Row& r : {Row{2, "5.357727445594461842", "4.266450284148641916"},
                       Row{3, "8.371931240874774342", "6.640859450800658439"}}) {
    SieveContext ctx(r.kappa);
    const CriticalPair cp = compute_critical_pair(ctx);
    const Interval slack = mul_2si(Interval(-1, 1, ctx.precision()), -60);
    EXPECT_TRUE(cp.alpha.intersects(Interval::from_string(r.alpha, ctx.precision()) + slack)) << cp.alpha.to_string();
    EXPECT_TRUE(cp.beta.intersects(Interval::from_string(r.beta, ctx.precision()) + slack)) << cp.beta.to_string();
  }
}

TEST(CriticalPair, StructureAndResiduals) {
  for (int kappa : {2, 3, 5}) {
    SieveContext ctx(kappa);
    const CriticalPair cp = compute_critical_pair(ctx);
    const double B = static_cast<double>(ctx.target().bits);
    EXPECT_TRUE(certainly_lt(cp.rho + 1L, cp.alpha));
    EXPECT_TRUE(certainly_lt(cp.alpha, cp.rho + 2L));
    EXPECT_TRUE(certainly_lt(cp.beta, cp.alpha));
    EXPECT_TRUE(certainly_lt(cp.alpha, Interval(15L * kappa, ctx.precision()) / 4L));
    EXPECT_LE(cp.alpha.log2_width(), -B / 2);
    EXPECT_LE(cp.beta.log2_width(), -B / 2);
    const AlphaBetaResiduals res = alphabeta_residuals(ctx, cp);
    EXPECT_TRUE(res.first.contains(2)) << res.first.to_string();
    EXPECT_TRUE(res.second.contains(0)) << res.second.to_string();
    EXPECT_LE((res.first - 2L).log2_width(), -B / 4);
    EXPECT_LE(res.second.log2_width(), -B / 4);
    // f(alpha - 1) = T / (alpha - 1)^kappa
    EXPECT_TRUE(cp.f_alpha_minus_1.intersects(cp.T / pow(cp.alpha - 1L, static_cast<long>(kappa))));
  }
}

TEST(CriticalPair, RefinesAtDoublePrecision) {
  SieveContext lo(3);
  SieveContext hi(3, Precision(2 * Precision::for_kappa(3).bits));
  const CriticalPair a = compute_critical_pair(lo);
  const CriticalPair b = compute_critical_pair(hi);
  EXPECT_TRUE(a.alpha.intersects(b.alpha));
  EXPECT_TRUE(a.beta.intersects(b.beta));
  EXPECT_LT(b.alpha.log2_width(), a.alpha.log2_width() - 60);
  EXPECT_LT(b.beta.log2_width(), a.beta.log2_width() - 60);
}

TEST(CriticalPair, Deterministic) {
  SieveContext c1(2), c2(2);
  const CriticalPair a = compute_critical_pair(c1);
  const CriticalPair b = compute_critical_pair(c2);
  EXPECT_EQ(a.alpha.to_string(40), b.alpha.to_string(40));
  EXPECT_EQ(a.beta.to_string(40), b.beta.to_string(40));
}
