#pragma once

// Generalised polynomials on [0,1].
//
// A GPoly of degree N stands for every function
//     z -> sum_{n=0}^{N} g_n(z) z^n,   z in [0,1],
// whose coefficient functions satisfy g_n(z) in coeffs[n] for all z. All
// truncation errors are folded into coefficients (usually the top one), so
// the representation is closed under the operations below and evaluation
// always yields a rigorous enclosure.

#include "dhr/interval.hpp"

#include <cstddef>
#include <vector>

namespace dhr {

class GPoly {
 public:
  GPoly(std::size_t degree, Precision prec);
  explicit GPoly(std::vector<Interval> coeffs);

  static GPoly constant(const Interval& c, std::size_t degree);

  std::size_t degree() const { return coeffs_.size() - 1; }
  Precision precision() const { return coeffs_.front().precision(); }

  const Interval& operator[](std::size_t n) const { return coeffs_[n]; }
  Interval& operator[](std::size_t n) { return coeffs_[n]; }
  const std::vector<Interval>& coeffs() const { return coeffs_; }

  // One past the last coefficient that is not exactly zero.
  std::size_t effective_length() const;
  // log2 of the widest coefficient width.
  double max_log2_width() const;

 private:
  std::vector<Interval> coeffs_;
};

// Horner evaluation; z must lie in [0,1].
Interval gp_eval(const GPoly& f, const Interval& z);

GPoly operator+(const GPoly& a, const GPoly& b);
GPoly operator-(const GPoly& a, const GPoly& b);
GPoly operator-(const GPoly& a);
GPoly operator*(const Interval& c, const GPoly& f);
GPoly operator*(const GPoly& f, const Interval& c);
// Adds c to the constant coefficient.
GPoly operator+(const GPoly& f, const Interval& c);

// Product with every i + j >= N term folded into the top coefficient.
// Throws UsageError when the degrees differ.
GPoly gp_mul(const GPoly& f, const GPoly& g);

// Product with an exact polynomial (constant coefficients, any degree).
GPoly gp_mul_poly(const GPoly& f, const std::vector<Interval>& poly);

// 1/f, given fbound enclosing f([0,1]) with 0 not in fbound.
GPoly gp_recip(const GPoly& f, const Interval& fbound);

// 1/f from a floating-point inverse k of the midpoint series, certified by
// the residual e = 1 - f k: with eps >= sum |e_n|, 1/f = k (1 + Theta([-d, d]))
// where d = eps / (1 - eps). Avoids the width growth of the interval
// recurrence when the coefficients of f do not alternate. Throws
// PrecisionError when eps >= 1/2.
GPoly gp_recip_residual(const GPoly& f, Precision work);
// The approximate inverse and the bound d separately.
std::vector<Interval> approximate_inverse(const GPoly& f, Precision work);
Interval residual_bound(const GPoly& f, const std::vector<Interval>& k);

// exp(f) by the factorised Taylor product with Lagrange remainders.
GPoly gp_exp(const GPoly& f);

// Antiderivative vanishing at 0, same degree.
GPoly gp_integrate(const GPoly& f);

// (1 + scale*z)^(-nu) for nu > 0 and scale >= 0. With truncate set, the
// Lagrange remainder is placed at the first index whose term drops below
// 2^-(prec+16); higher coefficients are exactly zero.
GPoly gp_binom(const Interval& nu, std::size_t degree, const Interval& scale, bool truncate = false);

// exp(scale*z) with the Lagrange remainder exp(Theta([0,1]) scale z).
GPoly gp_expx(std::size_t degree, const Interval& scale, bool truncate = false);

// Folds negligible high-order coefficients into a lower index. Coefficients
// whose combined magnitude is below 2^-tol_bits of the largest one are
// absorbed as Theta([0,1]) terms; the result encloses the input.
GPoly gp_trim(const GPoly& f, long tol_bits);
// Same, with an absolute threshold 2^-bits.
GPoly gp_trim_abs(const GPoly& f, long bits);

// Exact coefficients of (base + z)^k.
std::vector<Interval> shifted_power_poly(long base, int k, Precision prec);
// Exact coefficients of (1 + scale*z)^k.
std::vector<Interval> binomial_power_poly(int k, const Interval& scale);

// Integral of f over [a, b] with a, b subsets of [0,1]; signed when a > b.
Interval gp_integral(const GPoly& f, const Interval& a, const Interval& b);

// Integral of f(u)/(V - u) over [a, b] subset of [0,1], V > 1 bounded away
// from [a, b]; signed when a > b.
Interval gp_integral_over(const GPoly& f, const Interval& a, const Interval& b, const Interval& V);

}  // namespace dhr
