#pragma once

// The sieve limits alpha and beta.

#include "dhr/dde.hpp"

#include <map>

namespace dhr {

struct CriticalPair {
  Interval rho;
  Interval alpha;
  Interval beta;
  // T = (alpha-1)^{kappa-1} Xi~(alpha) / q(alpha-1), the value of the beta integral
  Interval T;
  // f(alpha - 1) = T / (alpha-1)^kappa
  Interval f_alpha_minus_1;
};

// Greatest real zero of q, to about prec bits.
Interval find_rho(const RationalPoly& q, Precision prec);

// Integer part of u; AmbiguousBoundaryError when u straddles an integer.
long piece_index(const Interval& u);

// l(u) = (Pi~(u) - 2) q(u-1) + Xi~(u) p(u-1)
Interval ell(SieveContext& ctx, const Interval& u);

// Root of l in (rho+1, rho+2), width at most 2^{-B/2}.
Interval find_alpha(SieveContext& ctx, const Interval& rho);

// kappa * integral of t^{kappa-1}/sigma(t-1) over [x, y], for 2 <= x <= y.
class BetaIntegrand {
 public:
  explicit BetaIntegrand(SieveContext& ctx) : ctx_(ctx) {}
  Interval integral(const Interval& x, const Interval& y);

 private:
  const GPoly& piece(long j);
  Interval full(long j);
  SieveContext& ctx_;
  std::map<long, GPoly> pieces_;
  std::map<long, Interval> full_;
};

Interval find_beta(SieveContext& ctx, const Interval& alpha);

CriticalPair compute_critical_pair(SieveContext& ctx);

// Left-hand sides of the two defining equations at (alpha, beta); they
// should enclose 2 and 0.
struct AlphaBetaResiduals {
  Interval first;
  Interval second;
};
AlphaBetaResiduals alphabeta_residuals(SieveContext& ctx, const CriticalPair& cp);

}  // namespace dhr
