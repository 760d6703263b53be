#include "dhr/dde.hpp"

#include "dhr/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dhr {

namespace {

Interval compute_A(int kappa, const Interval& gamma) {
  const Precision prec = gamma.precision();
  return factorial(kappa, prec) * pow(mul_2si(exp(gamma), 1), static_cast<long>(kappa));
}

long trim_bits(Precision prec) { return prec.bits + 16; }

template <typename F>
const GPoly& memo(std::map<long, GPoly>& cache, long key, F&& build) {
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  GPoly value = build();
  return cache.emplace(key, std::move(value)).first->second;
}

}  // namespace

SieveContext::SieveContext(int kappa, Precision prec)
    : kappa_(kappa),
      target_(prec),
      prec_(prec.bits + guard_bits),
      gamma_(euler_gamma(prec_)),
      A_(prec_),
      q_(compute_q(std::max(kappa, 1))) {
  if (kappa < 1) throw UsageError("kappa must be positive");
  if (prec.bits < 53) throw UsageError("precision must be at least 53 bits");
  A_ = compute_A(kappa, gamma_);
}

const GPoly& SieveContext::ein(long m) {
  if (m < 0) throw UsageError("ein: negative m");
  auto it = ein_.find(m);
  if (it != ein_.end()) return it->second;
  // fill the chain upwards from the largest cached index
  long start = 0;
  for (long k = m; k >= 0; --k) {
    if (ein_.count(k)) {
      start = k + 1;
      break;
    }
  }
  for (long k = start; k <= m; ++k) {
    GPoly e = k == 0 ? ein_expansion(0, degree(), prec_)
                     : ein_expansion_from(k, gp_eval(ein_.at(k - 1), Interval(1, prec_)), degree());
    ein_.emplace(k, std::move(e));
  }
  return ein_.at(m);
}

const GPoly& SieveContext::exp_ein(long m) {
  return memo(exp_ein_, m, [&] {
    const GPoly& e = ein(m);
    return gp_exp(Interval(-kappa_, prec_) * e);
  });
}

const GPoly& SieveContext::p(long u0) {
  return memo(p_, u0, [&] { return compute_p(*this, u0); });
}

const GPoly& SieveContext::q_piece(long u0) {
  return memo(q_piece_, u0, [&] {
    const RationalPoly s = shift_rational_poly(q_, u0);
    GPoly g(degree(), prec_);
    for (std::size_t i = 0; i < s.a.size(); ++i) g[i] = Interval(s.a[i], prec_);
    return g;
  });
}

const GPoly& SieveContext::sigma(long u0) {
  return memo(sigma_, u0, [&] { return compute_sigma(*this, u0); });
}

const GPoly& SieveContext::inv_sigma(long u0) {
  return memo(inv_sigma_, u0, [&] { return compute_inv_sigma(*this, u0); });
}

const GPoly& SieveContext::pi(long u0) {
  auto it = pi_.find(u0);
  if (it != pi_.end()) return it->second;
  auto [pi, xi] = compute_pi_xi(*this, u0);
  xi_.emplace(u0, std::move(xi));
  return pi_.emplace(u0, std::move(pi)).first->second;
}

const GPoly& SieveContext::xi(long u0) {
  if (!xi_.count(u0)) pi(u0);
  return xi_.at(u0);
}

GPoly ein_expansion(long m, std::size_t N, Precision prec) {
  if (m < 0) throw UsageError("ein_expansion: negative m");
  if (N < 1) throw UsageError("ein_expansion: degree must be positive");
  // Ein(z) = sum (-1)^{n-1} z^n / (n n!), last term with a Theta factor
  GPoly e(N, prec);
  Interval fact(1, prec);
  for (std::size_t n = 1; n <= N; ++n) {
    fact = fact * static_cast<long>(n);
    Interval c = Interval(1, prec) / (fact * static_cast<long>(n));
    if (n % 2 == 0) c = -c;
    e[n] = n < N ? c : hull_zero(c);
  }
  for (long k = 1; k <= m; ++k) e = ein_expansion_from(k, gp_eval(e, Interval(1, prec)), N);
  return e;
}

GPoly ein_expansion_from(long m, const Interval& ein_m, std::size_t N) {
  if (m < 1) throw UsageError("ein_expansion_from: m must be positive");
  const Precision prec = ein_m.precision();
  // Ein^(k)(m)/k! = (-1)^{k-1} I_{k-1}(m) / k!, with I_j = int_0^1 t^j e^{-mt} dt
  const auto moments = exp_moment_table(static_cast<long>(N) - 1, Interval(m, prec));
  GPoly e(N, prec);
  e[0] = ein_m;
  Interval fact(1, prec);
  for (std::size_t k = 1; k <= N; ++k) {
    fact = fact * static_cast<long>(k);
    Interval c = moments[k - 1] / fact;
    if (k % 2 == 0) c = -c;
    e[k] = k < N ? c : hull_zero(c);
  }
  return gp_trim(e, trim_bits(prec));
}

GPoly compute_p(SieveContext& ctx, long u0) {
  if (u0 < 2) throw UsageError("compute_p: u0 must be at least 2");
  const Precision prec = ctx.precision();
  const std::size_t N = ctx.degree();
  const long tol = trim_bits(prec) + 4;
  const long M = static_cast<long>(std::ceil(static_cast<double>(prec.bits) * std::log(2.0) / static_cast<double>(u0)));

  // e^{-uz} = sum_{r<R} (-uz)^r/r! + Theta (-uz)^R/R!, R as small as the target allows
  std::size_t R = 1;
  {
    double log2_fact = 0.0;
    while (R < N) {
      log2_fact += std::log2(static_cast<double>(R));
      if (log2_fact > static_cast<double>(tol)) break;
      ++R;
    }
  }
  std::vector<Interval> inv_fact(R + 1, Interval(prec));
  inv_fact[0] = Interval(1, prec);
  for (std::size_t r = 1; r <= R; ++r) inv_fact[r] = inv_fact[r - 1] / static_cast<long>(r);

  std::size_t max_len = 1;
  for (long m = 0; m < M; ++m) max_len = std::max(max_len, ctx.exp_ein(m).effective_length());
  const auto J = exp_moment_table(static_cast<long>(max_len + R), Interval(u0, prec));

  GPoly total(N, prec);
  for (long m = 0; m < M; ++m) {
    const GPoly& a = ctx.exp_ein(m);
    const std::size_t L = a.effective_length();
    GPoly c(N, prec);
    for (std::size_t r = 0; r <= R; ++r) {
      Interval s(prec);
      for (std::size_t n = 0; n < L; ++n) fma_acc(s, a[n], J[n + r]);
      Interval b = r % 2 == 0 ? inv_fact[r] : -inv_fact[r];
      if (r == R) b = hull_zero(b);
      c[r] = b * s;
    }
    c = exp(Interval(-m * u0, prec)) * c;
    if (m == 0) {
      total = total + c;
    } else {
      total = total + gp_mul(c, gp_expx(N, Interval(-m, prec), true));
    }
  }
  // int_M^inf exp(-kappa Ein(x) - u x) dx <= u^{-1} e^{-kappa Ein(M) - M u}
  const Interval ein_M = gp_eval(ctx.ein(M - 1), Interval(1, prec));
  const Interval tail = exp(-(Interval(ctx.kappa(), prec) * ein_M) - Interval(M * u0, prec)) / u0;
  total[0] += hull_zero(tail);
  return gp_trim(total, trim_bits(prec));
}

GPoly compute_sigma(SieveContext& ctx, long u0) {
  if (u0 < 0) throw UsageError("compute_sigma: negative u0");
  const Precision prec = ctx.precision();
  const std::size_t N = ctx.degree();
  const int kappa = ctx.kappa();
  if (N < static_cast<std::size_t>(kappa)) throw UsageError("compute_sigma: degree below kappa");
  const Interval invA = Interval(1, prec) / ctx.A();
  if (u0 <= 1) {
    // A^{-1} u^kappa or A^{-1} (1 + u)^kappa
    GPoly s(N, prec);
    if (u0 == 0) {
      s[static_cast<std::size_t>(kappa)] = invA;
    } else {
      for (int n = 0; n <= kappa; ++n) s[static_cast<std::size_t>(n)] = invA * binomial(kappa, n, prec);
    }
    return s;
  }
  if (u0 == 2) {
    // Closed form on [2,3]: with x = z/(2+z) and L = log(1 + z/2),
    // A sigma(2+z) = (2+z)^kappa (1 - kappa (L - sum_{n<=kappa} x^n/n)).
    // The Taylor route carries a remainder of order 2^-N N^kappa here.
    GPoly L(N, prec);
    Interval pow2(1, prec);
    for (std::size_t k = 1; k <= N; ++k) {
      pow2 = pow2 * 2L;
      Interval c = Interval(1, prec) / (pow2 * static_cast<long>(k));
      if (k % 2 == 0) c = -c;
      L[k] = k < N ? c : hull_zero(c);
    }
    GPoly poly(N, prec);
    const auto base = shifted_power_poly(2, kappa, prec);
    for (std::size_t i = 0; i < base.size(); ++i) poly[i] = base[i];
    for (int n = 1; n <= kappa; ++n) {
      const auto part = shifted_power_poly(2, kappa - n, prec);
      const Interval w = Interval(kappa, prec) / static_cast<long>(n);
      for (std::size_t i = 0; i < part.size(); ++i) fma_acc(poly[i + static_cast<std::size_t>(n)], w, part[i]);
    }
    const GPoly logpart = gp_mul_poly(L, shifted_power_poly(2, kappa, prec));
    return gp_trim(invA * (poly - Interval(kappa, prec) * logpart), trim_bits(prec));
  }
  const GPoly& back2 = ctx.sigma(u0 - 2);
  const Interval sigma_u0 = gp_eval(ctx.sigma(u0 - 1), Interval(1, prec));
  const Interval inv_u0 = Interval(1, prec) / u0;
  // (1 + t/u0)^{-kappa-1} sigma(u0 - 2 + t)
  const GPoly weight = gp_binom(Interval(kappa + 1, prec), N, inv_u0, true);
  const GPoly integral = gp_integrate(gp_mul(weight, back2));
  const GPoly bracket = (-(Interval(kappa, prec) * inv_u0) * integral) + sigma_u0;
  return gp_trim(gp_mul_poly(bracket, binomial_power_poly(kappa, inv_u0)), trim_bits(prec));
}

namespace {

// A (1+u)^{-kappa} from the series in (1-u)/2; all series terms are positive,
// so the truncation error is largest at u = 0.
GPoly inv_sigma_one(SieveContext& ctx) {
  const Precision prec = ctx.precision();
  const Precision wp(prec.bits + 64);
  const std::size_t N = ctx.degree();
  const int kappa = ctx.kappa();
  std::vector<Interval> w(N + 1, Interval(wp));
  // w_n = 2^{-kappa-n} C(kappa+n-1, n)
  w[0] = mul_2si(Interval(1, wp), -kappa);
  for (std::size_t n = 1; n <= N; ++n) w[n] = mul_2si(w[n - 1] * static_cast<long>(kappa + n - 1) / static_cast<long>(n), -1);
  GPoly c(N, prec);
  for (std::size_t k = 0; k <= N; ++k) {
    Interval s(wp);
    Interval binom(1, wp);  // C(n, k) for n = k
    for (std::size_t n = k; n <= N; ++n) {
      if (n > k) binom = binom * static_cast<long>(n) / static_cast<long>(n - k);
      fma_acc(s, w[n], binom);
    }
    if (k % 2 == 1) s = -s;
    c[k] = s.with_precision(prec);
  }
  c[0] = hull(c[0].lower(), Interval(1, prec));
  return gp_trim(ctx.A() * c, trim_bits(prec));
}

// A / sigma(2 + u) from the expansion of A sigma(3 - u), inverted and
// reflected.
GPoly inv_sigma_two(SieveContext& ctx) {
  const Precision prec = ctx.precision();
  const Precision wp(2 * prec.bits);
  const std::size_t N = ctx.degree();
  const std::size_t D = N + 1;
  const int kappa = ctx.kappa();
  const Interval K(kappa, wp);

  // L(u) = 1 - kappa log(3/2) + kappa sum_{n=1}^N u^n/(n 3^n) + Theta kappa u^{N+1}/(2(N+1)3^N)
  GPoly L(D, wp);
  L[0] = 1 - K * log(Interval(mpq_class(3, 2), wp));
  Interval pow3(1, wp);
  for (std::size_t n = 1; n <= N; ++n) {
    pow3 = pow3 * 3L;
    L[n] = K / (pow3 * static_cast<long>(n));
  }
  L[D] = hull_zero(K / (pow3 * static_cast<long>(2 * (N + 1))));

  // (3 - u)^kappa and kappa sum_{n=1}^kappa (1-u)^n (3-u)^{kappa-n} / n, exactly
  RationalPoly three_minus;
  three_minus.a = {mpq_class(3), mpq_class(-1)};
  RationalPoly one_minus;
  one_minus.a = {mpq_class(1), mpq_class(-1)};
  auto power = [](const RationalPoly& b, int e) {
    RationalPoly r;
    r.a = {mpq_class(1)};
    for (int i = 0; i < e; ++i) {
      RationalPoly t;
      t.a.assign(r.a.size() + 1, mpq_class(0));
      for (std::size_t j = 0; j < r.a.size(); ++j) {
        t.a[j] += r.a[j] * b.a[0];
        t.a[j + 1] += r.a[j] * b.a[1];
      }
      r = std::move(t);
    }
    return r;
  };
  RationalPoly extra;
  extra.a = {mpq_class(0)};
  for (int n = 1; n <= kappa; ++n) {
    const RationalPoly a = power(one_minus, n);
    const RationalPoly b = power(three_minus, kappa - n);
    RationalPoly prod;
    prod.a.assign(a.a.size() + b.a.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.a.size(); ++i) {
      for (std::size_t j = 0; j < b.a.size(); ++j) prod.a[i + j] += a.a[i] * b.a[j];
    }
    extra = extra + mpq_class(kappa, n) * prod;
  }

  GPoly S = gp_mul_poly(L, power(three_minus, kappa).to_intervals(wp));
  for (std::size_t i = 0; i < extra.a.size() && i <= D; ++i) S[i] += Interval(extra.a[i], wp);

  // approximate inverse of degree N, certified by the residual over the
  // degree N+1 expansion: 1/S = k (1 + Theta([-d, d]))
  std::vector<Interval> k = approximate_inverse(S, wp);
  k.resize(N + 1, Interval(wp));
  const Interval d = residual_bound(S, k);

  // substitute u -> 1 - u in k
  GPoly out(N, wp);
  for (std::size_t j = 0; j <= N; ++j) {
    Interval s(wp);
    Interval binom(1, wp);  // C(m, j)
    for (std::size_t m = j; m <= N; ++m) {
      if (m > j) binom = binom * static_cast<long>(m) / static_cast<long>(m - j);
      fma_acc(s, k[m], binom);
    }
    if (j % 2 == 1) s = -s;
    out[j] = s + hull(-d, d) * s.magnitude();
  }
  GPoly scaled(N, prec);
  const Interval A = ctx.A().with_precision(wp);
  for (std::size_t j = 0; j <= N; ++j) scaled[j] = (A * out[j]).with_precision(prec);
  return gp_trim(scaled, trim_bits(prec));
}

}  // namespace

GPoly compute_inv_sigma(SieveContext& ctx, long u0) {
  if (u0 < 1) throw UsageError("compute_inv_sigma: 1/sigma near 0 is handled in closed form");
  if (u0 == 1) return inv_sigma_one(ctx);
  if (u0 == 2) return inv_sigma_two(ctx);
  const Precision prec = ctx.precision();
  const GPoly& s = ctx.sigma(u0);
  return gp_trim(gp_recip_residual(s, Precision(2 * prec.bits)), trim_bits(prec));
}

std::pair<GPoly, GPoly> compute_pi_xi(SieveContext& ctx, long u0) {
  if (u0 < 3) throw UsageError("compute_pi_xi: u0 must be at least 3");
  const Precision prec = ctx.precision();
  const Interval one(1, prec);
  const Interval K(ctx.kappa(), prec);
  const std::vector<Interval> linear{Interval(u0, prec), one};  // u0 + u

  // integrand pieces g_j(s) = X(j + 1 + s) / sigma(j + s) for j = u0-2, u0-1, u0
  auto build = [&](auto&& piece) {
    GPoly G[3] = {GPoly(ctx.degree(), prec), GPoly(ctx.degree(), prec), GPoly(ctx.degree(), prec)};
    for (long d = 0; d < 3; ++d) {
      const long j = u0 - 2 + d;
      G[d] = gp_integrate(gp_mul(piece(j + 1), ctx.inv_sigma(j)));
    }
    // int_{u0-2+u}^{u0+u} = [G0(1) - G0(u)] + G1(1) + G2(u)
    const Interval fixed = gp_eval(G[0], one) + gp_eval(G[1], one);
    GPoly integral = (G[2] - G[0]) + fixed;
    GPoly lead = gp_mul(gp_mul_poly(piece(u0), linear), ctx.inv_sigma(u0));
    return std::make_pair(lead, integral);
  };
  auto [pl, pint] = build([&](long j) -> const GPoly& { return ctx.p(j); });
  auto [ql, qint] = build([&](long j) -> const GPoly& { return ctx.q_piece(j); });
  GPoly pi = gp_trim(pl + K * pint, trim_bits(prec));
  GPoly xi = gp_trim(ql - K * qint, trim_bits(prec));
  return {std::move(pi), std::move(xi)};
}

}  // namespace dhr
