#pragma once

// Piecewise expansions of the auxiliary functions p, q, sigma, 1/sigma and
// of Pi~, Xi~ on unit intervals [u0, u0 + 1].

#include "dhr/gpoly.hpp"
#include "dhr/interval.hpp"
#include "dhr/rational_poly.hpp"

#include <map>
#include <utility>

namespace dhr {

// Per-kappa state: constants and memoised pieces. Pieces are built on first
// use; a context is meant to be used from one thread at a time.
class SieveContext {
 public:
  SieveContext(int kappa, Precision prec);
  explicit SieveContext(int kappa) : SieveContext(kappa, Precision::for_kappa(kappa)) {}

  // Interval arithmetic runs guard_bits above the target B.
  static constexpr long guard_bits = 32;

  int kappa() const { return kappa_; }
  // Target precision B; error budgets and bisection widths refer to it.
  Precision target() const { return target_; }
  // Working precision of every interval, B + guard_bits.
  Precision precision() const { return prec_; }
  // Truncation degree N of every expansion, equal to the working precision.
  std::size_t degree() const { return static_cast<std::size_t>(prec_.bits); }
  const Interval& gamma() const { return gamma_; }
  // A = kappa! (2 e^gamma)^kappa
  const Interval& A() const { return A_; }
  const RationalPoly& q() const { return q_; }

  const GPoly& ein(long m);
  // exp(-kappa Ein(m + z))
  const GPoly& exp_ein(long m);
  const GPoly& p(long u0);
  const GPoly& q_piece(long u0);
  const GPoly& sigma(long u0);
  const GPoly& inv_sigma(long u0);
  const GPoly& pi(long u0);
  const GPoly& xi(long u0);

 private:
  int kappa_;
  Precision target_;
  Precision prec_;
  Interval gamma_;
  Interval A_;
  RationalPoly q_;
  std::map<long, GPoly> ein_, exp_ein_, p_, q_piece_, sigma_, inv_sigma_, pi_, xi_;
};

// Ein(m + z) on [0,1]. Builds the chain of expansions 0..m internally.
GPoly ein_expansion(long m, std::size_t N, Precision prec);
// Expansion at m from the constant term Ein(m) (m >= 1).
GPoly ein_expansion_from(long m, const Interval& ein_m, std::size_t N);

GPoly compute_p(SieveContext& ctx, long u0);
GPoly compute_sigma(SieveContext& ctx, long u0);
GPoly compute_inv_sigma(SieveContext& ctx, long u0);
std::pair<GPoly, GPoly> compute_pi_xi(SieveContext& ctx, long u0);

}  // namespace dhr
