// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only ID]... [--known-failure ID]...
//
// Exit status is 0 when the failing criteria are exactly the ones listed
// with --known-failure, 1 otherwise.

#include "dhr/errors.hpp"
#include "dhr/optimize.hpp"
#include "dhr/polyverify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace dhr;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages.
class Report {
 public:
  void fail(const std::string& msg) {
    if (failures_++ < 6) notes_ << (notes_.tellp() > 0 ? "; " : "") << msg;
  }
  void check(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
  }
  bool ok() const { return failures_ == 0; }
  int failures() const { return failures_; }
  Outcome outcome(const std::string& summary) const {
    if (ok()) return {true, summary};
    std::ostringstream os;
    os << failures_ << " failure(s): " << notes_.str();
    if (failures_ > 6) os << "; ...";
    return {false, os.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream notes_;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

// Populated cells kappa <= h <= 3 kappa, h <= 20, listed by h from
// kappa = ceil(h/3).
const std::vector<std::vector<long>> kTable = {
    {1},
    {2, 5},
    {4, 6, 8},
    {7, 10, 12},
    {8, 11, 13, 16},
    {9, 12, 15, 18, 20},
    {13, 16, 19, 22, 25},
    {14, 17, 20, 23, 26, 29},
    {16, 19, 22, 25, 28, 31, 34},
    {20, 23, 26, 29, 33, 36, 39},
    {21, 24, 27, 31, 34, 37, 41, 44},
    {22, 25, 29, 32, 35, 39, 42, 45, 49},
    {27, 30, 33, 37, 40, 44, 47, 51, 54},
    {28, 31, 35, 38, 42, 45, 49, 52, 56, 59},
    {29, 33, 36, 40, 43, 47, 50, 54, 57, 61, 64},
    {34, 37, 41, 45, 48, 52, 55, 59, 62, 66, 70},
    {35, 39, 42, 46, 50, 53, 57, 60, 64, 68, 71, 75},
    {36, 40, 44, 47, 51, 55, 58, 62, 66, 69, 73, 77, 80},
    {41, 45, 49, 52, 56, 60, 63, 67, 71, 75, 78, 82, 86},
    {42, 46, 50, 54, 57, 61, 65, 69, 73, 76, 80, 84, 88, 92},
};

long expected_r(int kappa, int h) {
  const int first = (h + 2) / 3;
  return kTable[static_cast<std::size_t>(h - 1)][static_cast<std::size_t>(kappa - first)];
}

// Solvers at the default precision, shared between criteria.
KappaSolver& solver(int kappa) {
  static std::map<int, std::unique_ptr<KappaSolver>> cache;
  auto& slot = cache[kappa];
  if (!slot) slot = std::make_unique<KappaSolver>(kappa);
  return *slot;
}

std::map<std::pair<int, int>, OptimResult>& results() {
  static std::map<std::pair<int, int>, OptimResult> r;
  return r;
}

const OptimResult& result(int kappa, int h) {
  auto& r = results();
  auto it = r.find({kappa, h});
  if (it == r.end()) it = r.emplace(std::make_pair(kappa, h), solver(kappa).solve(h)).first;
  return it->second;
}

// ---------------------------------------------------------------- table

Outcome table_reproduction() {
  Report rep;
  int cells = 0;
  for (int h = 1; h <= 20; ++h) {
    for (int kappa = (h + 2) / 3; kappa <= h; ++kappa) {
      ++cells;
      const long want = expected_r(kappa, h);
      try {
        const long got = kappa == 1 ? admissible_r(1, h) : result(kappa, h).r;
        rep.check(got == want, "(h=" + std::to_string(h) + ", kappa=" + std::to_string(kappa) + ") got " +
                                   std::to_string(got) + " want " + std::to_string(want));
      } catch (const Error& e) {
        rep.fail("(h=" + std::to_string(h) + ", kappa=" + std::to_string(kappa) + ") " + e.what());
      }
    }
  }
  return rep.outcome(std::to_string(cells) + " cells match");
}

// ---------------------------------------------------------------- extended range

Outcome extended_range() {
  Report rep;
  std::ostringstream summary;
  for (int kappa : {25, 40, 50}) {
    int escalations = 0;
    OptimizeOptions o;
    o.on_escalate = [&](int, long) { ++escalations; };
    try {
      KappaSolver s(kappa, 0, o);
      const OptimResult r = s.solve(kappa);
      rep.check(escalations <= 2, "kappa=" + std::to_string(kappa) + " needed " + std::to_string(escalations) +
                                      " escalations");
      rep.check(certified_floor(r.R_min).has_value(), "kappa=" + std::to_string(kappa) + " floor not certified");
      summary << (summary.tellp() > 0 ? ", " : "") << "kappa=" << kappa << " r=" << r.r << " (B=" << r.bits << ")";
    } catch (const Error& e) {
      rep.fail("kappa=" + std::to_string(kappa) + ": " + e.what());
    }
  }
  return rep.outcome(summary.str());
}

// ---------------------------------------------------------------- residuals

Interval piece_value(SieveContext& ctx, const GPoly& (SieveContext::*get)(long), const Interval& u) {
  const long u0 = floor_lo(u);
  return gp_eval((ctx.*get)(u0), u - u0);
}

// Symmetric difference with step h; the truncation error is h^2 |g'''| / 6.
template <class G>
Interval central_difference(G g, const Interval& u, const Interval& h) {
  return (g(u + h) - g(u - h)) / (2L * h);
}

Outcome dde_residuals() {
  Report rep;
  double worst = 0;
  for (int kappa : {2, 3, 5}) {
    KappaSolver& s = solver(kappa);
    SieveContext& ctx = s.context();
    SieveFunctions& S = s.functions();
    const Precision P = ctx.precision();
    const long K = kappa;
    const Interval step = mul_2si(Interval(1, P), -30);
    // O(step^2) allowance relative to the size of the terms
    const double c2 = std::ldexp(1.0, 20) * std::ldexp(1.0, -60);
    auto tolerance = [&](const Interval& res, double scale) { return res.width().hi_double() + c2 * scale; };

    // q: exact identity (u q)' = kappa (q(u) + q(u+1))
    const RationalPoly& q = ctx.q();
    RationalPoly uq;
    uq.a.assign(q.a.size() + 1, mpq_class(0));
    for (std::size_t i = 0; i < q.a.size(); ++i) uq.a[i + 1] = q.a[i];
    rep.check(derivative(uq) == mpq_class(kappa) * (q + shift_rational_poly(q, 1L)),
              "q identity, kappa=" + std::to_string(kappa));

    const double alpha = s.critical().alpha.mid_double();
    const double beta = s.critical().beta.mid_double();
    for (int i = 0; i < 50; ++i) {
      const double t = (i + 0.3819660112501051) / 50;
      // sigma: (u^-kappa sigma(u))' = -kappa u^{-kappa-1} sigma(u-2) for u > 2
      {
        const Interval U = Interval::from_double(2.0 + t * (3 * kappa + 8), P);
        auto g = [&](const Interval& x) { return piece_value(ctx, &SieveContext::sigma, x) / pow(x, K); };
        const Interval res = central_difference(g, U, step) +
                             K * piece_value(ctx, &SieveContext::sigma, U - 2L) / pow(U, K + 1);
        const double r = abs(res).hi_double();
        worst = std::max(worst, r);
        rep.check(r <= tolerance(res, 1.0), "sigma kappa=" + std::to_string(kappa) + " u=" + fmt(U.mid_double()) +
                                                " residual " + fmt(r));
      }
      // F: (u^kappa F(u))' = kappa u^{kappa-1} f(u-1) for u > alpha
      {
        const Interval U = Interval::from_double(alpha + 0.01 + t * 30, P);
        auto g = [&](const Interval& x) { return pow(x, K) * S.F(x); };
        const Interval res = central_difference(g, U, step) - K * pow(U, K - 1) * S.f(U - 1L);
        const double r = abs(res).hi_double();
        const double scale = std::pow(U.mid_double(), kappa);
        worst = std::max(worst, r / scale);
        rep.check(r <= tolerance(res, scale),
                  "F kappa=" + std::to_string(kappa) + " u=" + fmt(U.mid_double()) + " residual " + fmt(r));
      }
      // f: (u^kappa f(u))' = kappa u^{kappa-1} F(u-1) for u > beta
      {
        const Interval U = Interval::from_double(beta + 0.01 + t * 30, P);
        auto g = [&](const Interval& x) { return pow(x, K) * S.f(x); };
        const Interval res = central_difference(g, U, step) - K * pow(U, K - 1) * S.F(U - 1L);
        const double r = abs(res).hi_double();
        const double scale = std::pow(U.mid_double(), kappa);
        worst = std::max(worst, r / scale);
        rep.check(r <= tolerance(res, scale),
                  "f kappa=" + std::to_string(kappa) + " u=" + fmt(U.mid_double()) + " residual " + fmt(r));
      }
    }
  }
  return rep.outcome("kappa in {2,3,5}, 50 points each for sigma, F, f; largest relative residual " + fmt(worst) +
                     "; q identity exact");
}

// ---------------------------------------------------------------- structure

Outcome structural_invariants() {
  Report rep;
  Report decay;
  int decay_points = 0;
  for (int kappa = 2; kappa <= 20; ++kappa) {
    const CriticalPair& cp = solver(kappa).critical();
    const Interval two_k(2L * kappa, cp.alpha.precision());
    rep.check(certainly_gt(cp.alpha, cp.beta) && certainly_gt(cp.beta, two_k),
              "alpha > beta > 2 kappa fails at kappa=" + std::to_string(kappa));
  }
  double worst_decay = 0;
  std::string worst_at;
  for (int kappa : {2, 3, 5}) {
    SieveFunctions& S = solver(kappa).functions();
    const Precision P = S.context().precision();
    const Interval one(1, P);
    Interval prevF = S.F(Interval::from_string("0.5", P));
    Interval prevf = S.f(Interval::from_string("0.5", P));
    // grid of step 1/8 on [0.5, 3 kappa + 30]
    for (long i = 5; i <= 8L * (3 * kappa + 30); ++i) {
      const Interval U = Interval(i, P) / 8L;
      const Interval F = S.F(U);
      const Interval f = S.f(U);
      const std::string where = "kappa=" + std::to_string(kappa) + " u=" + fmt(U.mid_double());
      rep.check(!certainly_gt(F, prevF), "F increases at " + where);
      rep.check(!certainly_lt(f, prevf), "f decreases at " + where);
      rep.check(!certainly_lt(f, Interval(0, P)) && !certainly_gt(f, one) && !certainly_lt(F, one),
                "0 <= f <= 1 <= F fails at " + where);
      prevF = F;
      prevf = f;
      if (i >= 8L * 3 * kappa) {
        const Interval bound = 10L * exp(-U);
        const double ratio = std::max(abs(F - 1L).hi_double(), abs(f - 1L).hi_double()) / bound.lo_double() * 10;
        if (ratio > worst_decay) {
          worst_decay = ratio;
          worst_at = where;
        }
        ++decay_points;
        decay.check(certainly_lt(abs(F - 1L), bound) && certainly_lt(abs(f - 1L), bound), where);
      }
    }
  }
  std::ostringstream os;
  os << (rep.ok() ? "alpha > beta > 2 kappa for kappa <= 20, monotone and 0 <= f <= 1 <= F on grids"
                  : rep.outcome("").detail)
     << "; 10e^-u bound at u >= 3 kappa holds at " << decay_points - decay.failures() << "/" << decay_points
     << " grid points, largest max(|F-1|,|f-1|) e^u = " << fmt(worst_decay) << " at " << worst_at;
  return {rep.ok() && decay.ok(), os.str()};
}

// ---------------------------------------------------------------- alpha, beta

Outcome alphabeta_equations() {
  Report rep;
  double worst = -1e9;
  for (int kappa = 2; kappa <= 20; ++kappa) {
    SieveContext& ctx = solver(kappa).context();
    const double quarter = -static_cast<double>(ctx.target().bits) / 4;
    try {
      const AlphaBetaResiduals res = alphabeta_residuals(ctx, solver(kappa).critical());
      const double w = std::max(res.first.log2_width(), res.second.log2_width());
      worst = std::max(worst, w - quarter);
      rep.check(res.first.contains(2) && res.second.contains(0), "kappa=" + std::to_string(kappa) + " misses 2 or 0");
      rep.check(w <= quarter, "kappa=" + std::to_string(kappa) + " width 2^" + fmt(w) + " above 2^" + fmt(quarter));
    } catch (const Error& e) {
      rep.fail("kappa=" + std::to_string(kappa) + ": " + e.what());
    }
  }
  return rep.outcome("kappa = 2..20 enclose 2 and 0; worst width is 2^" + fmt(worst) + " times 2^-B/4");
}

// ---------------------------------------------------------------- oracles

// Ein(x) for a point x >= 0 by its alternating series, with the first
// omitted term as the error once the terms decrease.
Interval ein_series(const Interval& x) {
  const Precision P = x.precision();
  Interval sum(0, P);
  Interval term = x;  // x^n / n!
  for (long n = 1;; ++n) {
    const Interval t = term / n;
    const double xd = x.hi_double();
    if (static_cast<double>(n) > xd + 1 && t.hi_double() < std::ldexp(1.0, -static_cast<int>(P.bits))) {
      return sum + Interval(-1, 1, P) * t;
    }
    sum = (n % 2 == 1) ? sum + t : sum - t;
    term = term * x / (n + 1);
  }
}

// p(u) = int_0^inf exp(-kappa Ein(x) - u x) dx. The integrand is decreasing
// and convex, so per panel the midpoint rule is a lower bound and the
// trapezoid rule an upper bound; the tail past M is at most
// exp(-kappa Ein(M) - u M) / u.
Interval p_quadrature(int kappa, const Interval& u) {
  const Precision P = u.precision();
  const long M = static_cast<long>(std::ceil(60.0 / u.lo_double())) + 10;
  auto g = [&](const Interval& x) { return exp(-(kappa * ein_series(x)) - u * x); };
  // panels are densest near 0, where the curvature is largest
  const long cuts[][3] = {{0, 1, 16000}, {1, 4, 6000}, {4, M, 2000}};
  Interval lower(0, P), upper(0, P);
  Interval last(0, P);
  for (const auto& seg : cuts) {
    const Interval a(seg[0], P);
    const Interval h = Interval(seg[1] - seg[0], P) / seg[2];
    Interval mid(0, P), trap(0, P);
    Interval left = g(a);
    for (long i = 0; i < seg[2]; ++i) {
      const Interval right = g(a + h * (i + 1));
      mid += g(a + h * (2 * i + 1) / 2L);
      trap += (left + right) / 2L;
      left = right;
    }
    lower += h * mid;
    upper += h * trap;
    last = left;
  }
  return hull(lower.lower(), (upper + last / u).upper());
}

Outcome oracle_cross_checks() {
  Report rep;
  std::ostringstream summary;
  // p against quadrature
  SieveContext& ctx = solver(2).context();
  const Precision P = ctx.precision();
  double widest = -1e9;
  for (const char* u : {"2.25", "3", "4.5", "7.75", "12.5"}) {
    const Interval U = Interval::from_string(u, Precision(128));
    const Interval ref = p_quadrature(2, U);
    const long u0 = floor_lo(U);
    const Interval got = gp_eval(ctx.p(u0), Interval::from_string(u, P) - u0);
    widest = std::max(widest, ref.log2_width());
    rep.check(got.intersects(ref), std::string("p(") + u + ") " + got.to_string(12) + " vs " + ref.to_string(12));
  }
  summary << "p at 5 points inside quadrature enclosures (widest 2^" << fmt(widest) << ")";

  // gp_exp, gp_recip, gp_integrate on g(z) = 2 + z/2 - z^2/5 + z^3/7
  const Precision W(256);
  const Precision O(512);
  const std::vector<mpq_class> c{2, mpq_class(1, 2), mpq_class(-1, 5), mpq_class(1, 7)};
  const std::size_t N = 200;
  GPoly g(N, W);
  for (std::size_t i = 0; i < c.size(); ++i) g[i] = Interval(c[i], W);
  const GPoly e = gp_exp(g);
  // g([0,1]) lies in [2, 2.45]
  const GPoly r = gp_recip(g, hull(Interval(3, W) / 2L, Interval(3, W)));
  const GPoly I = gp_integrate(g);
  int checked = 0;
  mpfr_t z, v, acc, t;
  mpfr_inits2(O.bits, z, v, acc, t, static_cast<mpfr_ptr>(nullptr));
  auto inside = [](const Interval& enc, mpfr_srcptr x) { return mpfr_lessequal_p(enc.lo(), x) && mpfr_lessequal_p(x, enc.hi()); };
  for (int i = 0; i < 1000; ++i) {
    const mpq_class zq(i, 999);
    mpfr_set_q(z, zq.get_mpq_t(), MPFR_RNDN);
    const Interval Z(zq, W);
    // g(z) and int_0^z g
    mpfr_set_si(acc, 0, MPFR_RNDN);
    mpfr_set_si(v, 0, MPFR_RNDN);
    for (std::size_t k = c.size(); k-- > 0;) {
      mpfr_mul(acc, acc, z, MPFR_RNDN);
      mpfr_set_q(t, c[k].get_mpq_t(), MPFR_RNDN);
      mpfr_add(acc, acc, t, MPFR_RNDN);
      mpfr_mul(v, v, z, MPFR_RNDN);
      mpfr_div_ui(t, t, static_cast<unsigned long>(k + 1), MPFR_RNDN);
      mpfr_add(v, v, t, MPFR_RNDN);
    }
    mpfr_mul(v, v, z, MPFR_RNDN);
    if (!inside(gp_eval(I, Z), v)) rep.fail("gp_integrate at z=" + zq.get_str());
    mpfr_exp(t, acc, MPFR_RNDN);
    if (!inside(gp_eval(e, Z), t)) rep.fail("gp_exp at z=" + zq.get_str());
    mpfr_ui_div(t, 1, acc, MPFR_RNDN);
    if (!inside(gp_eval(r, Z), t)) rep.fail("gp_recip at z=" + zq.get_str());
    ++checked;
  }
  mpfr_clears(z, v, acc, t, static_cast<mpfr_ptr>(nullptr));
  summary << "; gp_exp, gp_recip, gp_integrate contain 512-bit values at " << checked << " points each";
  return rep.outcome(summary.str());
}

// ---------------------------------------------------------------- number theory

IntPoly ip(std::initializer_list<long> c) {
  IntPoly p;
  for (long x : c) p.emplace_back(x);
  return p;
}

PolySystem euclid_system() { return make_system({ip({1, 1, 1}), ip({1, 0, 1}), ip({1, 2, 1, 1})}); }

Outcome number_theory() {
  Report rep;
  const PolySystem sys = euclid_system();
  const IntPoly H = sys.product();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint64_t> d(2, 100);
  int pairs = 0;
  while (pairs < 200) {
    const std::uint64_t a = d(rng), b = d(rng);
    if (std::gcd(a, b) != 1 || a * b > 10000) continue;
    ++pairs;
    const std::uint64_t ra = rho_bruteforce(H, a), rb = rho_bruteforce(H, b), rab = rho_bruteforce(H, a * b);
    rep.check(rab == ra * rb, "brute force not multiplicative at " + std::to_string(a) + "*" + std::to_string(b));
    rep.check(rho(H, a * b) == rab && rho(H, a) == ra && rho(H, b) == rb,
              "rho differs from enumeration at " + std::to_string(a) + "*" + std::to_string(b));
  }
  const mpz_class d1 = delta(sys);
  const mpz_class d2 = delta(euclid_system());
  rep.check(d1 == d2, "Delta differs between runs");
  rep.check(d1 == 1656, "Delta = " + d1.get_str());
  rep.check(!fixed_prime_divisor(sys).has_value(), "fixed prime divisor found for the Euclid polynomial");
  rep.check(fixed_prime_divisor(make_system({ip({2, 1, 1})})).value_or(0) == 2, "x^2+x+2 should have 2");
  return rep.outcome("200 coprime pairs (q <= 10^4) agree with enumeration; Delta = " + d1.get_str() +
                     "; fixed prime divisors none / 2");
}

// ---------------------------------------------------------------- census

Outcome census_check() {
  Report rep;
  const PolySystem sys = euclid_system();
  const CensusResult small = census(sys, 1000, 13, 1);
  const CensusResult large = census(sys, 10000, 13, 1);
  const double x = 10000;
  const double threshold = 0.05 * x / std::pow(std::log(x), 3);
  rep.check(static_cast<double>(large.squarefree_count) > threshold,
            "count " + std::to_string(large.squarefree_count) + " below " + fmt(threshold));
  rep.check(large.squarefree_count >= small.squarefree_count, "count decreases from x=10^3 to 10^4");
  return rep.outcome("r=13: " + std::to_string(small.squarefree_count) + " at x=10^3, " +
                     std::to_string(large.squarefree_count) + " at x=10^4 (threshold " + fmt(threshold) + ")");
}

// ---------------------------------------------------------------- refinement

Outcome determinism_and_refinement() {
  Report rep;
  int cells = 0;
  for (int kappa : {2, 3, 4, 5, 6, 10}) {
    const std::string k = "kappa=" + std::to_string(kappa);
    KappaSolver& base = solver(kappa);
    KappaSolver fine(kappa, 2 * Precision::for_kappa(kappa).bits);
    rep.check(base.critical().alpha.contains(fine.critical().alpha), k + " alpha not nested");
    rep.check(base.critical().beta.contains(fine.critical().beta), k + " beta not nested");
    const int hmax = kappa == 10 ? 10 : std::min(20, 3 * kappa);
    for (int h = kappa; h <= hmax; ++h) {
      const OptimResult& a = result(kappa, h);
      const OptimResult b = fine.solve(h);
      ++cells;
      const std::string kh = k + " h=" + std::to_string(h);
      rep.check(a.r == b.r, kh + " r changed");
      rep.check(b.bits == 2 * Precision::for_kappa(kappa).bits, kh + " escalated at doubled B");
      rep.check(a.R_min.contains(b.R_min), kh + " R_min " + b.R_min.to_string(10) + " not inside " + a.R_min.to_string(10));
    }
  }
  // identical output on a second run
  SieveContext c1(3), c2(3);
  const CriticalPair p1 = compute_critical_pair(c1);
  const CriticalPair p2 = compute_critical_pair(c2);
  rep.check(p1.alpha.to_string(60) == p2.alpha.to_string(60) && p1.beta.to_string(60) == p2.beta.to_string(60),
            "kappa=3 (alpha, beta) differ between runs");
  KappaSolver again(2);
  rep.check(again.solve(4).R_min.to_string(40) == result(2, 4).R_min.to_string(40), "kappa=2 h=4 R_min differs");
  return rep.outcome("doubled B nests (alpha, beta) for 6 kappa and R_min for " + std::to_string(cells) +
                     " cells, r unchanged; repeated runs identical");
}

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<std::string> only;
  std::vector<std::string> known;
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--known-failure", known, "criteria expected to fail");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {"table", "r table for h <= 20", table_reproduction},
      {"extended", "kappa = h in {25, 40, 50} certified", extended_range},
      {"dde", "delay equation residuals", dde_residuals},
      {"structure", "structural invariants of F, f, alpha, beta", structural_invariants},
      {"alphabeta", "defining equations of (alpha, beta), kappa <= 20", alphabeta_equations},
      {"oracles", "oracle cross-checks", oracle_cross_checks},
      {"numbertheory", "rho, Delta, fixed prime divisors", number_theory},
      {"census", "census of square-free almost-prime values", census_check},
      {"refinement", "determinism and refinement at doubled B", determinism_and_refinement},
  };

  std::set<std::string> failed;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) failed.insert(c.id);
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << o.detail << " ("
              << fmt(secs, 3) << " s)" << std::endl;
  }
  std::set<std::string> expected;
  for (const auto& k : known) {
    if (only.empty() || std::find(only.begin(), only.end(), k) != only.end()) expected.insert(k);
  }
  for (const auto& id : expected) {
    if (!failed.count(id)) std::cout << "note: [" << id << "] is listed as a known failure but passed\n";
  }
  return failed == expected ? 0 : 1;
}
