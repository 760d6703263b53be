#pragma once

// The upper and lower sieve functions F and f.

#include "dhr/alphabeta.hpp"
#include "dhr/piecewise.hpp"

#include <map>

namespace dhr {

// F = 1/sigma on (0, alpha], f = 0 on (0, beta], continued beyond by the
// delay equations. Pieces above floor(alpha) are built on demand, up to
// u0_max, and split at the fractional part of alpha.
class SieveFunctions {
 public:
  SieveFunctions(SieveContext& ctx, CriticalPair cp, long u0_max = 200);

  SieveContext& context() const { return ctx_; }
  const CriticalPair& critical() const { return cp_; }
  long u0_max() const { return u0_max_; }
  // floor(alpha)
  long alpha_floor() const { return a_; }

  Interval F(const Interval& u);
  Interval f(const Interval& u);

  // Builds F and f pieces for every unit interval up to u0.
  void extend_to(long u0);
  const PiecewiseFn& F_pieces() const { return F_; }
  const PiecewiseFn& f_pieces() const { return f_; }

  // Integral of F over [a, b] (0 < a <= b), closed form below 2.
  Interval int_F(const Interval& a, const Interval& b);

 private:
  GPoly half_piece(long u0, const GPoly& other, const Interval& s0, const Interval& c) const;
  GPoly F_half(long u0, bool left) const;
  Interval f_below(const Interval& u);

  SieveContext& ctx_;
  CriticalPair cp_;
  long u0_max_;
  long a_;
  long built_;
  PiecewiseFn F_;
  PiecewiseFn f_;
  std::map<long, Interval> full_F_;
  BetaIntegrand beta_integral_;
};

// All pieces up to u0_max. UsageError when u0_max < ceil(alpha).
SieveFunctions compute_Ff(SieveContext& ctx, const CriticalPair& cp, long u0_max);

}  // namespace dhr
