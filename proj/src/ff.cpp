#include "dhr/ff.hpp"

#include "dhr/errors.hpp"

#include <string>

namespace dhr {

namespace {

long trim_bits(Precision prec) { return prec.bits + 16; }

}  // namespace

SieveFunctions::SieveFunctions(SieveContext& ctx, CriticalPair cp, long u0_max)
    : ctx_(ctx),
      cp_(std::move(cp)),
      u0_max_(u0_max),
      a_(piece_index(cp_.alpha)),
      built_(0),
      F_(cp_.alpha - piece_index(cp_.alpha)),
      f_(cp_.alpha - piece_index(cp_.alpha)),
      beta_integral_(ctx) {
  if (ctx.kappa() < 2) throw UsageError("SieveFunctions: kappa must be at least 2");
  if (u0_max_ < a_ + 1) throw UsageError("SieveFunctions: u0_max below ceil(alpha)");
  const Precision prec = ctx_.precision();
  const Interval& s = F_.split();
  for (long u0 = 2; u0 < a_; ++u0) F_.set(u0, {ctx_.inv_sigma(u0), std::nullopt});
  // F on [a, alpha] is 1/sigma; beyond alpha it starts from F(alpha)
  const GPoly& inv_a = ctx_.inv_sigma(a_);
  const Interval F_alpha = gp_eval(inv_a, s);
  // f on [alpha-1, a] from f(alpha-1), with F(u-1) = 1/sigma(a-2+z)
  GPoly f_right = half_piece(a_ - 1, ctx_.inv_sigma(a_ - 2), s, cp_.f_alpha_minus_1);
  f_.set(a_ - 1, {std::nullopt, f_right});
  F_.set(a_, {inv_a, half_piece(a_, f_right, s, F_alpha)});
  // f on [a, a+1]: F(u-1) = 1/sigma(a-1+z) throughout
  const Interval f_a = gp_eval(f_right, Interval(1, prec));
  f_.set(a_, {half_piece(a_, ctx_.inv_sigma(a_ - 1), Interval(0, prec), f_a), std::nullopt});
  built_ = a_;
}

GPoly SieveFunctions::half_piece(long u0, const GPoly& other, const Interval& s0, const Interval& c) const {
  // (u0+s)^kappa g(u0+s) = (u0+s0)^kappa c + kappa int_{s0}^{s} (u0+t)^{kappa-1} other(t) dt
  const Precision prec = ctx_.precision();
  const int kappa = ctx_.kappa();
  const Interval k(kappa, prec);
  const GPoly G = gp_integrate(gp_mul_poly(other, shifted_power_poly(u0, kappa - 1, prec)));
  const Interval K = pow(s0 + u0, static_cast<long>(kappa)) * c - k * gp_eval(G, s0);
  const GPoly bracket = (k * G) + K;
  const Interval inv_u0 = Interval(1, prec) / u0;
  const GPoly scale = gp_binom(k, ctx_.degree(), inv_u0, true);
  return gp_trim(pow(inv_u0, static_cast<long>(kappa)) * gp_mul(scale, bracket), trim_bits(prec));
}

void SieveFunctions::extend_to(long u0) {
  if (u0 > u0_max_) {
    throw DomainError("F, f requested at u0 = " + std::to_string(u0) + " beyond the configured bound " +
                      std::to_string(u0_max_));
  }
  const Precision prec = ctx_.precision();
  const Interval& s = F_.split();
  const Interval zero(0, prec);
  const Interval one(1, prec);
  auto end_value = [&](const PiecewiseFn& g, long k) {
    const auto& p = g.piece(k);
    return gp_eval(p.right ? *p.right : *p.left, one);
  };
  auto left_of = [](const PiecewiseFn::UnitPiece& p) -> const GPoly& { return *p.left; };
  // the right half of a piece without a split is its whole expansion
  auto right_of = [](const PiecewiseFn::UnitPiece& p) -> const GPoly& { return p.right ? *p.right : *p.left; };
  while (built_ < u0) {
    const long k = built_ + 1;
    const auto& fp = f_.piece(k - 1);
    const auto& Fp = F_.piece(k - 1);
    GPoly F_left = half_piece(k, left_of(fp), zero, end_value(F_, k - 1));
    GPoly F_right = half_piece(k, right_of(fp), s, gp_eval(F_left, s));
    GPoly f_left = half_piece(k, left_of(Fp), zero, end_value(f_, k - 1));
    GPoly f_right = half_piece(k, right_of(Fp), s, gp_eval(f_left, s));
    F_.set(k, {std::move(F_left), std::move(F_right)});
    f_.set(k, {std::move(f_left), std::move(f_right)});
    built_ = k;
  }
}

Interval SieveFunctions::F(const Interval& u) {
  const Precision prec = ctx_.precision();
  if (!u.is_positive()) throw DomainError("F: argument must be positive");
  if (certainly_le(u, Interval(2, prec))) return ctx_.A() * pow(u, static_cast<long>(-ctx_.kappa()));
  const long u0 = piece_index(u);
  if (u0 >= 2) extend_to(u0);
  if (u0 < 2) {
    // u straddles 2 from below: 1/sigma is A u^{-kappa} up to 2
    return hull(ctx_.A() * pow(u, static_cast<long>(-ctx_.kappa())), F_.eval_at(2, Interval(0, prec)));
  }
  return F_.eval_at(u0, u - u0);
}

Interval SieveFunctions::f_below(const Interval& u) {
  // u^kappa f(u) = kappa int_beta^u t^{kappa-1}/sigma(t-1) dt = T - J(u)
  const Precision prec = ctx_.precision();
  const Interval zero(0, prec);
  if (certainly_le(u, cp_.beta.lower())) return zero;
  const Interval top = cp_.alpha - 1;
  const Interval x = max(u, cp_.beta);
  const Interval v = (cp_.T - beta_integral_.integral(x, top)) / pow(u, static_cast<long>(ctx_.kappa()));
  if (certainly_gt(u, cp_.beta)) return v;
  return hull(zero, v);
}

Interval SieveFunctions::f(const Interval& u) {
  if (!u.is_positive()) throw DomainError("f: argument must be positive");
  const Interval top = cp_.alpha - 1;
  if (certainly_lt(u, top)) return f_below(u);
  const long u0 = piece_index(u);
  extend_to(std::max(u0, a_));
  if (certainly_le(top.upper(), u)) return f_.eval_at(u0, u - u0);
  return hull(f_below(u), f_.eval_at(u0, u - u0));
}

Interval SieveFunctions::int_F(const Interval& a, const Interval& b) {
  const Precision prec = ctx_.precision();
  const int kappa = ctx_.kappa();
  if (!a.is_positive()) throw DomainError("int_F: lower limit must be positive");
  if (certainly_lt(b, a)) throw DomainError("int_F: reversed limits");
  const Interval two(2, prec);
  Interval sum(prec);
  // closed form on [a, min(b, 2)]: A (a^{1-kappa} - m^{1-kappa}) / (kappa - 1)
  if (certainly_lt(a, two)) {
    const Interval m = min(b, two);
    sum += ctx_.A() * (pow(a, static_cast<long>(1 - kappa)) - pow(m, static_cast<long>(1 - kappa))) / (kappa - 1L);
  }
  if (!certainly_gt(b, two)) return sum;
  const Interval lo = max(a, two);
  const long j0 = piece_index(lo);
  const long j1 = piece_index(b);
  extend_to(j1);
  const Interval one(1, prec);
  const Interval zero(0, prec);
  if (j0 == j1) return sum + F_.integral(j0, lo - j0, b - j1);
  sum += F_.integral(j0, lo - j0, one);
  for (long j = j0 + 1; j < j1; ++j) {
    auto it = full_F_.find(j);
    if (it == full_F_.end()) it = full_F_.emplace(j, F_.integral(j, zero, one)).first;
    sum += it->second;
  }
  sum += F_.integral(j1, zero, b - j1);
  return sum;
}

SieveFunctions compute_Ff(SieveContext& ctx, const CriticalPair& cp, long u0_max) {
  SieveFunctions s(ctx, cp, u0_max);
  s.extend_to(u0_max);
  return s;
}

}  // namespace dhr
