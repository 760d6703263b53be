#include "dhr/alphabeta.hpp"

#include "dhr/errors.hpp"

#include <string>

namespace dhr {

namespace {

Interval point_midpoint(const Interval& a, const Interval& b, Precision prec) {
  Interval m(prec);
  mpfr_add(m.lo_mut(), a.lo(), b.hi(), MPFR_RNDN);
  mpfr_div_2ui(m.lo_mut(), m.lo(), 1, MPFR_RNDN);
  mpfr_set(m.hi_mut(), m.lo(), MPFR_RNDN);
  return m;
}

int certain_sign(const Interval& x) {
  if (x.is_positive()) return 1;
  if (x.is_negative()) return -1;
  return 0;
}

}  // namespace

Interval find_rho(const RationalPoly& q, Precision prec) {
  const int kappa = (q.degree() + 1) / 2;
  mpq_class lo(2 * kappa - 1);
  mpq_class hi(4 * kappa);
  const SturmSequence sturm(q);
  // grow the upper end until q > 0 there with no roots beyond it
  for (int it = 0; q(hi) <= 0 || sturm.count_above(hi) > 0; ++it) {
    if (it > 64) throw ComputeError("find_rho: no upper bracket");
    hi *= 2;
  }
  if (sturm.count(lo, hi) == 0) {
    // greatest root below the default lower end
    for (int it = 0; sturm.count_above(lo) == 0; ++it) {
      if (it > 64) throw ComputeError("find_rho: q has no real zero");
      lo = lo * 2 - hi;
    }
  }
  // invariant: the greatest root lies in (lo, hi]; first isolate it
  while (sturm.count(lo, hi) > 1) {
    mpq_class mid = (lo + hi) / 2;
    if (sturm.count(mid, hi) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // then bisect on exact signs over dyadic points n / 2^k
  unsigned long k = 0;
  while (lo.get_den() != 1 || hi.get_den() != 1) {
    lo *= 2;
    hi *= 2;
    ++k;
  }
  mpz_class a = lo.get_num();
  mpz_class b = hi.get_num();
  if (sign_at_dyadic(q, a, k) >= 0 || sign_at_dyadic(q, b, k) <= 0) {
    throw ComputeError("find_rho: greatest zero is not a sign change");
  }
  const unsigned long target = static_cast<unsigned long>(prec.bits + 8);
  while (k < target) {
    a <<= 1;
    b <<= 1;
    ++k;
    const mpz_class m = (a + b) / 2;
    if (sign_at_dyadic(q, m, k) < 0) {
      a = m;
    } else {
      b = m;
    }
  }
  mpq_class qa(a), qb(b);
  mpq_div_2exp(qa.get_mpq_t(), qa.get_mpq_t(), k);
  mpq_div_2exp(qb.get_mpq_t(), qb.get_mpq_t(), k);
  return hull(Interval(qa, prec), Interval(qb, prec));
}

long piece_index(const Interval& u) {
  const auto f = certified_floor(u);
  if (!f) throw AmbiguousBoundaryError("argument " + u.to_string(12) + " straddles an integer");
  return *f;
}

Interval ell(SieveContext& ctx, const Interval& u) {
  const long u0 = piece_index(u);
  const Interval z = u - u0;
  const Interval pi = gp_eval(ctx.pi(u0), z);
  const Interval xi = gp_eval(ctx.xi(u0), z);
  const Interval q1 = gp_eval(ctx.q_piece(u0 - 1), z);
  const Interval p1 = gp_eval(ctx.p(u0 - 1), z);
  return (pi - 2) * q1 + xi * p1;
}

Interval find_alpha(SieveContext& ctx, const Interval& rho) {
  const Precision prec = ctx.precision();
  Interval a = rho.upper() + 1;
  Interval b = rho.lower() + 2;
  const int sa = certain_sign(ell(ctx, a));
  const int sb = certain_sign(ell(ctx, b));
  if (sa == 0 || sb == 0) throw PrecisionError("find_alpha: sign of l at the bracket ends is undecided");
  if (sa == sb) throw ComputeError("find_alpha: l does not change sign on (rho+1, rho+2)");
  // refine past the required width while signs stay decidable, so that
  // quantities depending on alpha keep some slack
  const double required = -static_cast<double>(ctx.target().bits) / 2.0;
  const double target = -static_cast<double>(prec.bits) + 24.0;
  while (hull(a, b).log2_width() > target) {
    const Interval m = point_midpoint(a, b, prec);
    const int sm = certain_sign(ell(ctx, m));
    if (sm == 0) {
      if (hull(a, b).log2_width() > required) {
        throw PrecisionError("find_alpha: sign of l undecided; increase precision");
      }
      break;
    }
    if (sm == sa) {
      a = m;
    } else {
      b = m;
    }
  }
  const Interval alpha = hull(a, b);
  if (!certainly_lt(alpha, Interval(15 * ctx.kappa(), prec) / 4L)) {
    throw ComputeError("find_alpha: root above 3.75 kappa");
  }
  return alpha;
}

const GPoly& BetaIntegrand::piece(long j) {
  auto it = pieces_.find(j);
  if (it != pieces_.end()) return it->second;
  // (j + s)^{kappa-1} / sigma(j - 1 + s)
  const Precision prec = ctx_.precision();
  GPoly g = gp_mul_poly(ctx_.inv_sigma(j - 1), shifted_power_poly(j, ctx_.kappa() - 1, prec));
  return pieces_.emplace(j, std::move(g)).first->second;
}

Interval BetaIntegrand::full(long j) {
  auto it = full_.find(j);
  if (it != full_.end()) return it->second;
  const Precision prec = ctx_.precision();
  Interval v = gp_integral(piece(j), Interval(0, prec), Interval(1, prec));
  return full_.emplace(j, v).first->second;
}

Interval BetaIntegrand::integral(const Interval& x, const Interval& y) {
  const Precision prec = ctx_.precision();
  const long jx = piece_index(x);
  const long jy = piece_index(y);
  if (jx < 2) throw DomainError("beta integral: lower end below 2");
  Interval sum(prec);
  if (jx == jy) {
    sum = gp_integral(piece(jx), x - jx, y - jy);
  } else if (jx > jy) {
    throw DomainError("beta integral: reversed range");
  } else {
    sum = gp_integral(piece(jx), x - jx, Interval(1, prec));
    for (long j = jx + 1; j < jy; ++j) sum += full(j);
    sum += gp_integral(piece(jy), Interval(0, prec), y - jy);
  }
  return Interval(ctx_.kappa(), prec) * sum;
}

namespace {

Interval beta_target(SieveContext& ctx, const Interval& alpha) {
  const long a0 = piece_index(alpha);
  const Interval z = alpha - a0;
  const Interval xi = gp_eval(ctx.xi(a0), z);
  const Interval q1 = gp_eval(ctx.q_piece(a0 - 1), z);
  return pow(alpha - 1, static_cast<long>(ctx.kappa() - 1)) * xi / q1;
}

}  // namespace

Interval find_beta(SieveContext& ctx, const Interval& alpha) {
  const Precision prec = ctx.precision();
  const Interval T = beta_target(ctx, alpha);
  if (!T.is_positive()) throw ComputeError("find_beta: target is not positive");
  BetaIntegrand J(ctx);
  const Interval top = alpha - 1;
  Interval a(2 * ctx.kappa(), prec);
  Interval b = top.lower();
  if (!certainly_gt(J.integral(a, top), T)) throw ComputeError("find_beta: target not bracketed");
  const double required = -static_cast<double>(ctx.target().bits) / 2.0;
  const double target = -static_cast<double>(prec.bits) + 24.0;
  while (hull(a, b).log2_width() > target) {
    const Interval m = point_midpoint(a, b, prec);
    const Interval v = J.integral(m, top);
    if (certainly_gt(v, T)) {
      a = m;
    } else if (certainly_lt(v, T)) {
      b = m;
    } else if (hull(a, b).log2_width() > required) {
      throw PrecisionError("find_beta: comparison undecided; increase precision");
    } else {
      break;
    }
  }
  return hull(a, b);
}

CriticalPair compute_critical_pair(SieveContext& ctx) {
  const Precision prec = ctx.precision();
  Interval rho = find_rho(ctx.q(), prec);
  Interval alpha = find_alpha(ctx, rho);
  Interval beta = find_beta(ctx, alpha);
  const Interval T = beta_target(ctx, alpha);
  const Interval f1 = T / pow(alpha - 1, static_cast<long>(ctx.kappa()));
  return CriticalPair{rho, alpha, beta, T, f1};
}

AlphaBetaResiduals alphabeta_residuals(SieveContext& ctx, const CriticalPair& cp) {
  const Precision prec = ctx.precision();
  const int kappa = ctx.kappa();
  const long a0 = piece_index(cp.alpha);
  const Interval z = cp.alpha - a0;
  BetaIntegrand J(ctx);
  // J already carries the factor kappa
  const Interval I = J.integral(cp.beta, cp.alpha - 1);
  const Interval scale = pow(cp.alpha - 1, static_cast<long>(1 - kappa));
  const Interval pi = gp_eval(ctx.pi(a0), z);
  const Interval xi = gp_eval(ctx.xi(a0), z);
  const Interval p1 = gp_eval(ctx.p(a0 - 1), z);
  const Interval q1 = gp_eval(ctx.q_piece(a0 - 1), z);
  (void)prec;
  return AlphaBetaResiduals{pi + scale * p1 * I, xi - scale * q1 * I};
}

}  // namespace dhr
