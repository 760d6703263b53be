#include "dhr/optimize.hpp"

#include "dhr/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace dhr {

namespace {

long ceil_hi(const Interval& x) {
  const long f = floor_lo(x.upper());
  return x.upper().contains(f) ? f : f + 1;
}

}  // namespace

Optimizer::Optimizer(SieveFunctions& S, OptimizeOptions opts) : S_(S), opts_(opts) {}

Interval Optimizer::closed_F(const Interval& w) const {
  // int_w^2 A u^{-kappa} du
  const int kappa = S_.context().kappa();
  const Precision prec = S_.context().precision();
  const Interval two(2, prec);
  return S_.context().A() * (pow(w, static_cast<long>(1 - kappa)) - pow(two, static_cast<long>(1 - kappa))) /
         static_cast<long>(kappa - 1);
}

Interval Optimizer::closed_kernel(const Interval& v, const Interval& w) const {
  // int_w^2 A u^{-kappa}/(v-u) du with the antiderivative
  // v^{-kappa} log(u/(v-u)) - sum_{n=1}^{kappa-1} v^{n-kappa} u^{-n}/n
  const int kappa = S_.context().kappa();
  const Precision prec = S_.context().precision();
  auto phi = [&](const Interval& u) {
    Interval s = pow(v, static_cast<long>(-kappa)) * log(u / (v - u));
    for (int n = 1; n < kappa; ++n) {
      s -= pow(v, static_cast<long>(n - kappa)) * pow(u, static_cast<long>(-n)) / static_cast<long>(n);
    }
    return s;
  };
  return S_.context().A() * (phi(Interval(2, prec)) - phi(w));
}

Optimizer::VData& Optimizer::data(const mpq_class& v) {
  auto it = cache_.find(v);
  if (it != cache_.end()) return it->second;
  const Precision prec = S_.context().precision();
  VData d;
  d.v = Interval(v, prec);
  if (!certainly_gt(d.v, S_.critical().beta) || !certainly_gt(d.v, Interval(3, prec))) {
    throw DomainError("R: v must exceed beta and 3");
  }
  const Interval top = d.v - 1;
  const long last = piece_index(top);
  d.f_v = S_.f(d.v);
  d.F_tail = S_.int_F(Interval(2, prec), top);
  const PiecewiseFn& F = S_.F_pieces();
  const Interval zero(0, prec);
  const Interval one(1, prec);
  for (long j = 2; j < last; ++j) d.kernel_full.emplace(j, F.integral_over(j, zero, one, d.v - j));
  d.kernel_last = F.integral_over(last, zero, top - last, d.v - last);
  return cache_.emplace(v, std::move(d)).first->second;
}

Interval Optimizer::kernel_integral(VData& d, const Interval& w) {
  const Precision prec = S_.context().precision();
  const Interval two(2, prec);
  const Interval top = d.v - 1;
  const long last = piece_index(top);
  Interval sum(prec);
  Interval start = w;
  if (certainly_le(w, two)) {
    sum += closed_kernel(d.v, w);
    start = two;
  } else if (!certainly_gt(w, two)) {
    throw PrecisionError("R: w(v) straddles 2");
  }
  const long jw = piece_index(start);
  const PiecewiseFn& F = S_.F_pieces();
  if (jw == last) return sum + F.integral_over(jw, start - jw, top - last, d.v - jw);
  sum += F.integral_over(jw, start - jw, Interval(1, prec), d.v - jw);
  for (long j = jw + 1; j < last; ++j) sum += d.kernel_full.at(j);
  return sum + d.kernel_last;
}

Interval Optimizer::dRdw_numerator(const mpq_class& v, const Interval& w, int h) {
  VData& d = data(v);
  const Precision prec = S_.context().precision();
  const Interval two(2, prec);
  const Interval k(S_.context().kappa(), prec);
  // int_w^{v-1} F; above 2 integrate directly, F_tail - int_2^w F cancels
  // badly for large kappa
  Interval integral = certainly_le(w, two) ? d.F_tail + closed_F(w) : S_.int_F(w, d.v - 1);
  return Interval(h, prec) * d.v * d.f_v - k * integral;
}

Interval Optimizer::w_of_v(const mpq_class& v, int h) {
  VData& d = data(v);
  const Precision prec = S_.context().precision();
  const int kappa = S_.context().kappa();
  const Interval two(2, prec);
  const Interval c = Interval(h, prec) * d.v * d.f_v - Interval(kappa, prec) * d.F_tail;
  // c = A kappa/(kappa-1) (w^{1-kappa} - 2^{1-kappa}) when w <= 2
  auto closed = [&](const Interval& cc) {
    const Interval x = cc * static_cast<long>(kappa - 1) / (Interval(kappa, prec) * S_.context().A()) +
                       pow(two, static_cast<long>(1 - kappa));
    return pow(x, Interval(-1, prec) / static_cast<long>(kappa - 1));
  };
  if (c.is_nonnegative()) return closed(c);
  // bisection of the numerator, increasing in w, on (2, beta - 1)
  Interval lo = two;
  Interval hi = (S_.critical().beta - 1).lower();
  if (!dRdw_numerator(v, hi, h).is_positive()) throw ComputeError("w(v): numerator not positive at beta - 1");
  const double required = -static_cast<double>(S_.context().target().bits) / 2.0;
  const double target = required - 8.0;
  while (hull(lo, hi).log2_width() > target) {
    Interval m(prec);
    mpfr_add(m.lo_mut(), lo.lo(), hi.hi(), MPFR_RNDN);
    mpfr_div_2ui(m.lo_mut(), m.lo(), 1, MPFR_RNDN);
    mpfr_set(m.hi_mut(), m.lo(), MPFR_RNDN);
    const Interval D = dRdw_numerator(v, m, h);
    if (D.is_positive()) {
      hi = m;
    } else if (D.is_negative()) {
      lo = m;
    } else {
      break;
    }
  }
  if (c.is_negative()) {
    if (hull(lo, hi).log2_width() > required) throw PrecisionError("w(v): bisection stalled");
    return hull(lo, hi);
  }
  // c straddles 0: the root is either below 2 (closed form) or in [2, hi]
  return hull(closed(Interval(0, prec) + c.upper()), hi);
}

Interval Optimizer::R_of_v(const mpq_class& v, int h) {
  const Interval w = w_of_v(v, h);
  VData& d = data(v);
  if (!certainly_lt(w + 1, d.v)) throw DomainError("R: w(v) + 1 must be below v");
  const Interval k(S_.context().kappa(), S_.context().precision());
  return k / d.f_v * kernel_integral(d, w);
}

Interval Optimizer::R_direct(const mpq_class& v, const Interval& w, int h) {
  VData& d = data(v);
  const Precision prec = S_.context().precision();
  if (!certainly_lt(w + 1, d.v)) throw DomainError("R: w + 1 must be below v");
  if (!w.is_positive()) throw DomainError("R: w must be positive");
  const Interval two(2, prec);
  const Interval k(S_.context().kappa(), prec);
  // int_w^{v-1} F; above 2 integrate directly, F_tail - int_2^w F cancels
  // badly for large kappa
  Interval integral = certainly_le(w, two) ? d.F_tail + closed_F(w) : S_.int_F(w, d.v - 1);
  const Interval vw = d.v - w;
  return Interval(h, prec) * d.v / vw + k / d.f_v * (kernel_integral(d, w) - integral / vw);
}

OptimResult Optimizer::minimize(int h) {
  SieveContext& ctx = S_.context();
  const Precision prec = ctx.precision();
  const int kappa = ctx.kappa();
  if (h < kappa) throw UsageError("minimize: h must be at least kappa");
  const long start = ceil_hi(S_.critical().alpha);
  // linear search over integers for R(v-1) > R(v) < R(v+1)
  auto R_at = [&](long v) { return R_of_v(mpq_class(v), h); };
  std::vector<double> mids;
  long centre = 0;
  for (long v = start; v + 1 < opts_.vmax; ++v) {
    mids.push_back(R_at(v).mid_double());
    const std::size_t n = mids.size();
    if (n >= 3 && mids[n - 3] > mids[n - 2] && mids[n - 2] < mids[n - 1]) {
      centre = v - 1;
      break;
    }
    if (n == 2 && mids[0] < mids[1]) throw ComputeError("minimize: R increases from ceil(alpha)");
  }
  if (centre == 0) throw ComputeError("minimize: no interior minimum below vmax");

  // Fibonacci search on [centre-1, centre+1], exact rational points
  const int iters = opts_.golden_iterations;
  std::vector<mpz_class> fib{1, 1};
  while (static_cast<int>(fib.size()) < iters + 3) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
  const mpz_class& Fn = fib[static_cast<std::size_t>(iters + 2)];
  mpq_class a(centre - 1);
  mpq_class b(centre + 1);
  mpq_class x1 = a + (b - a) * mpq_class(fib[static_cast<std::size_t>(iters)], Fn);
  mpq_class x2 = a + (b - a) * mpq_class(fib[static_cast<std::size_t>(iters + 1)], Fn);
  x1.canonicalize();
  x2.canonicalize();
  Interval R1 = R_of_v(x1, h);
  Interval R2 = R_of_v(x2, h);
  for (int it = 0; it < iters; ++it) {
    bool left;
    if (certainly_lt(R1, R2)) {
      left = true;
    } else if (certainly_gt(R1, R2)) {
      left = false;
    } else {
      left = R1.mid_double() <= R2.mid_double();
    }
    if (left) {
      b = x2;
      x2 = x1;
      R2 = R1;
      x1 = a + b - x2;
      if (x1 == x2) break;
      if (x1 > x2) {
        std::swap(x1, x2);
        std::swap(R1, R2);
        R2 = R_of_v(x2, h);
      } else {
        R1 = R_of_v(x1, h);
      }
    } else {
      a = x1;
      x1 = x2;
      R1 = R2;
      x2 = a + b - x1;
      if (x1 == x2) break;
      if (x2 < x1) {
        std::swap(x1, x2);
        std::swap(R1, R2);
        R1 = R_of_v(x1, h);
      } else {
        R2 = R_of_v(x2, h);
      }
    }
  }
  const bool take_first = certainly_lt(R1, R2) || (!certainly_gt(R1, R2) && R1.mid_double() <= R2.mid_double());
  const mpq_class v_opt = take_first ? x1 : x2;

  OptimResult res;
  res.kappa = kappa;
  res.h = h;
  res.v_opt = Interval(v_opt, prec);
  res.w_opt = w_of_v(v_opt, h);
  res.R_min = R_of_v(v_opt, h);
  res.bits = ctx.target().bits;
  const mpq_class quarter(1, 4);
  res.local_min = certainly_gt(R_of_v(v_opt - quarter, h), res.R_min) &&
                  certainly_gt(R_of_v(v_opt + quarter, h), res.R_min);
  if (!certainly_gt(res.v_opt, S_.critical().alpha + 3)) {
    throw ComputeError("minimize: optimal v not above alpha + 3");
  }
  const auto r = certified_floor(res.R_min);
  if (!r) throw PrecisionError("minimize: floor of R_min not certified: " + res.R_min.to_string(25));
  res.r = *r;
  // drop the non-integer points of this search
  for (auto it = cache_.begin(); it != cache_.end();) {
    it = it->first.get_den() == 1 ? std::next(it) : cache_.erase(it);
  }
  return res;
}

long admissible_r(int kappa, int h) {
  if (kappa < 1) throw UsageError("admissible_r: kappa must be positive");
  if (kappa > h) throw UsageError("admissible_r: kappa must not exceed h");
  if (kappa == 1) return h <= 2 ? h : h + 1;
  KappaSolver solver(kappa);
  return solver.solve(h).r;
}

KappaSolver::KappaSolver(int kappa, long bits, OptimizeOptions opts) : kappa_(kappa), opts_(opts) {
  if (kappa < 2) throw UsageError("KappaSolver: kappa must be at least 2");
  const long b = bits > 0 ? bits : Precision::for_kappa(kappa).bits;
  build(b);
}

void KappaSolver::build(long bits) {
  // alpha and beta may also need more bits; escalate here the same way
  for (int attempt = 0;; ++attempt) {
    try {
      opt_.reset();
      S_.reset();
      ctx_ = std::make_unique<SieveContext>(kappa_, Precision(bits));
      CriticalPair cp = compute_critical_pair(*ctx_);
      S_ = std::make_unique<SieveFunctions>(*ctx_, std::move(cp), opts_.vmax);
      opt_ = std::make_unique<Optimizer>(*S_, opts_);
      bits_ = bits;
      return;
    } catch (const PrecisionError&) {
      if (attempt >= 4) throw;
      bits *= 2;
      if (opts_.on_escalate) opts_.on_escalate(kappa_, bits);
    }
  }
}

OptimResult KappaSolver::solve(int h) {
  if (h < kappa_) throw UsageError("solve: h must be at least kappa");
  for (int attempt = 0;; ++attempt) {
    try {
      return opt_->minimize(h);
    } catch (const PrecisionError&) {
      if (attempt >= 4) throw;
      if (opts_.on_escalate) opts_.on_escalate(kappa_, bits_ * 2);
      build(bits_ * 2);
    }
  }
}

}  // namespace dhr
