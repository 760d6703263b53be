#include "dhr/gpoly.hpp"

#include "dhr/errors.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace dhr {

GPoly::GPoly(std::size_t degree, Precision prec) : coeffs_(degree + 1, Interval(prec)) {}

GPoly::GPoly(std::vector<Interval> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw UsageError("GPoly needs at least one coefficient");
}

GPoly GPoly::constant(const Interval& c, std::size_t degree) {
  GPoly r(degree, c.precision());
  r[0] = c;
  return r;
}

std::size_t GPoly::effective_length() const {
  std::size_t n = coeffs_.size();
  while (n > 1 && coeffs_[n - 1].is_exact_zero()) --n;
  return n;
}

double GPoly::max_log2_width() const {
  double w = -INFINITY;
  for (const auto& c : coeffs_) w = std::max(w, c.log2_width());
  return w;
}

Interval gp_eval(const GPoly& f, const Interval& z) {
  if (mpfr_sgn(z.lo()) < 0 || mpfr_cmp_ui(z.hi(), 1) > 0) {
    throw DomainError("gp_eval: argument outside [0,1]");
  }
  const std::size_t len = f.effective_length();
  Interval acc = f[len - 1];
  for (std::size_t n = len - 1; n-- > 0;) {
    acc = acc * z;
    acc += f[n];
  }
  return acc;
}

GPoly operator+(const GPoly& a, const GPoly& b) {
  if (a.degree() != b.degree()) throw UsageError("GPoly degree mismatch");
  GPoly r = a;
  for (std::size_t n = 0; n <= a.degree(); ++n) r[n] += b[n];
  return r;
}

GPoly operator-(const GPoly& a, const GPoly& b) {
  if (a.degree() != b.degree()) throw UsageError("GPoly degree mismatch");
  GPoly r = a;
  for (std::size_t n = 0; n <= a.degree(); ++n) r[n] -= b[n];
  return r;
}

GPoly operator-(const GPoly& a) {
  GPoly r = a;
  for (std::size_t n = 0; n <= a.degree(); ++n) r[n] = -a[n];
  return r;
}

GPoly operator*(const Interval& c, const GPoly& f) {
  GPoly r = f;
  const std::size_t len = f.effective_length();
  for (std::size_t n = 0; n < len; ++n) r[n] = c * f[n];
  return r;
}

GPoly operator*(const GPoly& f, const Interval& c) { return c * f; }

GPoly operator+(const GPoly& f, const Interval& c) {
  GPoly r = f;
  r[0] += c;
  return r;
}

namespace {

std::vector<std::size_t> nonzero_indices(const std::vector<Interval>& v, std::size_t len) {
  std::vector<std::size_t> idx;
  idx.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (!v[i].is_exact_zero()) idx.push_back(i);
  }
  return idx;
}

// h = a * b truncated at degree N; overflow terms carry Theta([0,1])^(i+j-N).
GPoly mul_kernel(const std::vector<Interval>& a, std::size_t la, const std::vector<Interval>& b,
                 std::size_t lb, std::size_t N, Precision prec) {
  GPoly h(N, prec);
  const auto ia = nonzero_indices(a, la);
  const auto ib = nonzero_indices(b, lb);
  for (std::size_t i : ia) {
    for (std::size_t j : ib) {
      const std::size_t k = i + j;
      if (k <= N) {
        fma_acc(h[k], a[i], b[j]);
      } else {
        fma_acc_theta(h[N], a[i], b[j]);
      }
    }
  }
  return h;
}

Precision common_precision(const GPoly& f, const GPoly& g) {
  return Precision(std::max(f.precision().bits, g.precision().bits));
}

}  // namespace

GPoly gp_mul(const GPoly& f, const GPoly& g) {
  if (f.degree() != g.degree()) throw UsageError("gp_mul: degree mismatch");
  return mul_kernel(f.coeffs(), f.effective_length(), g.coeffs(), g.effective_length(), f.degree(),
                    common_precision(f, g));
}

GPoly gp_mul_poly(const GPoly& f, const std::vector<Interval>& poly) {
  if (poly.empty()) return GPoly(f.degree(), f.precision());
  return mul_kernel(f.coeffs(), f.effective_length(), poly, poly.size(), f.degree(), f.precision());
}

GPoly gp_recip(const GPoly& f, const Interval& fbound) {
  if (fbound.contains_zero()) throw DomainError("gp_recip: bound contains 0");
  if (f[0].contains_zero()) throw DomainError("gp_recip: constant coefficient contains 0");
  const std::size_t N = f.degree();
  const Precision prec = f.precision();
  const std::size_t len = f.effective_length();
  GPoly k(N, prec);
  if (N == 0) {
    k[0] = Interval(1, prec) / fbound;
    return k;
  }
  const Interval inv0 = Interval(1, prec) / f[0];
  k[0] = inv0;
  for (std::size_t n = 1; n < N; ++n) {
    Interval s(prec);
    const std::size_t imax = std::min(n, len - 1);
    for (std::size_t i = 1; i <= imax; ++i) fma_acc(s, f[i], k[n - i]);
    k[n] = -(s * inv0);
  }
  // k_N = -(1/f) sum_{i<=N, j<N, i+j>=N} f_i k_j z^{i+j-N}
  Interval s(prec);
  for (std::size_t i = 1; i < len; ++i) {
    for (std::size_t j = (i >= N ? 0 : N - i); j < N; ++j) {
      if (i + j == N) {
        fma_acc(s, f[i], k[j]);
      } else {
        fma_acc_theta(s, f[i], k[j]);
      }
    }
  }
  k[N] = -(s / fbound);
  return k;
}

namespace {

// Nearest point of the given precision to the midpoint of x.
Interval nearest_point(const Interval& x, Precision prec) {
  const Interval m = x.midpoint();
  Interval r(prec);
  mpfr_set(r.lo_mut(), m.lo(), MPFR_RNDN);
  mpfr_set(r.hi_mut(), r.lo(), MPFR_RNDN);
  return r;
}

}  // namespace

std::vector<Interval> approximate_inverse(const GPoly& f, Precision work) {
  const std::size_t N = f.degree();
  const std::size_t len = f.effective_length();
  std::vector<Interval> fm(len, Interval(work));
  for (std::size_t i = 0; i < len; ++i) fm[i] = nearest_point(f[i], work);
  if (fm[0].contains_zero()) throw DomainError("approximate_inverse: constant coefficient is 0");
  const Interval inv0 = nearest_point(Interval(1, work) / fm[0], work);
  std::vector<Interval> k(N + 1, Interval(work));
  k[0] = inv0;
  for (std::size_t n = 1; n <= N; ++n) {
    Interval s(work);
    const std::size_t imax = std::min(n, len - 1);
    for (std::size_t i = 1; i <= imax; ++i) fma_acc(s, fm[i], k[n - i]);
    k[n] = nearest_point(-(s * inv0), work);
  }
  for (auto& c : k) c = nearest_point(c, f.precision());
  return k;
}

Interval residual_bound(const GPoly& f, const std::vector<Interval>& k) {
  const Precision prec = f.precision();
  const GPoly fk = gp_mul_poly(f, k);
  Interval eps(prec);
  for (std::size_t n = 0; n <= fk.degree(); ++n) {
    Interval e = n == 0 ? Interval(1, prec) - fk[n] : -fk[n];
    eps += e.magnitude();
  }
  eps = eps.upper();
  if (!certainly_lt(eps, Interval(mpq_class(1, 2), prec))) {
    throw PrecisionError("reciprocal residual too large");
  }
  return (eps / (1 - eps)).upper();
}

GPoly gp_recip_residual(const GPoly& f, Precision work) {
  const std::vector<Interval> k = approximate_inverse(f, work);
  const Interval d = residual_bound(f, k);
  GPoly r(f.degree(), f.precision());
  for (std::size_t n = 0; n < k.size(); ++n) r[n] = k[n] + hull(-d, d) * k[n].magnitude();
  return r;
}

GPoly gp_exp(const GPoly& f) {
  const std::size_t N = f.degree();
  const Precision prec = f.precision();
  const long tol = prec.bits + 16;
  GPoly result = GPoly::constant(exp(f[0]), N);
  const std::size_t len = f.effective_length();
  for (std::size_t n = 1; n < len; ++n) {
    if (f[n].is_exact_zero()) continue;
    // exp(x) = sum_{j<J} x^j/j! + Theta x^J/J! exp(Theta x) with x = f_n z^n
    const std::size_t jmax = (N + n - 1) / n;  // ceil(N/n)
    GPoly factor(N, prec);
    Interval term(1, prec);
    std::size_t J = 0;
    for (; J < jmax; ++J) {
      if (J > 0) term = term * f[n] / static_cast<long>(J);
      const Interval m = term.magnitude();
      if (J > 1 && (mpfr_zero_p(m.hi()) || mpfr_get_exp(m.hi()) < -tol)) break;
      factor[n * J] += term;
    }
    if (J == jmax) term = term * f[n] / static_cast<long>(J);
    const Interval rem = term * exp(hull_zero(f[n]));
    factor[std::min(n * J, N)] += hull_zero(rem);
    result = gp_trim(gp_mul(result, factor), tol);
  }
  return result;
}

GPoly gp_integrate(const GPoly& f) {
  const std::size_t N = f.degree();
  const Precision prec = f.precision();
  GPoly r(N, prec);
  if (N == 0) {
    r[0] = hull_zero(f[0]);
    return r;
  }
  const std::size_t len = f.effective_length();
  for (std::size_t n = 1; n <= N && n - 1 < len; ++n) r[n] = f[n - 1] / static_cast<long>(n);
  if (!f[N].is_exact_zero()) r[N] += hull_zero(f[N] / static_cast<long>(N + 1));
  return r;
}

namespace {

bool below_cutoff(const Interval& term, long bits) {
  const Interval m = term.magnitude();
  if (mpfr_zero_p(m.hi())) return true;
  return mpfr_get_exp(m.hi()) < -bits;
}

}  // namespace

GPoly gp_binom(const Interval& nu, std::size_t degree, const Interval& scale, bool truncate) {
  if (!nu.is_positive()) throw DomainError("gp_binom: nu must be positive");
  if (mpfr_sgn(scale.lo()) < 0) throw DomainError("gp_binom: scale must be nonnegative");
  const Precision prec(std::max(nu.precision().bits, scale.precision().bits));
  const long cutoff = prec.bits + 16;
  GPoly r(degree, prec);
  // term_n = (-1)^n C(n+nu-1, n) scale^n
  Interval term(1, prec);
  for (std::size_t n = 0;; ++n) {
    const bool last = n == degree || (truncate && n > 0 && below_cutoff(term, cutoff));
    if (last) {
      r[n] = hull_zero(term);
      break;
    }
    r[n] = term;
    term = -(term * (nu + static_cast<long>(n)) * scale) / static_cast<long>(n + 1);
  }
  return r;
}

GPoly gp_expx(std::size_t degree, const Interval& scale, bool truncate) {
  const Precision prec = scale.precision();
  const long cutoff = prec.bits + 16;
  GPoly r(degree, prec);
  const Interval lagrange = exp(hull_zero(scale));
  Interval term(1, prec);
  bool past_peak = false;
  for (std::size_t n = 0;; ++n) {
    if (n > 0 && mpfr_cmp_ui(scale.magnitude().hi(), n) < 0) past_peak = true;
    const bool last = n == degree || (truncate && past_peak && below_cutoff(term, cutoff));
    if (last) {
      r[n] = term * lagrange;
      break;
    }
    r[n] = term;
    term = term * scale / static_cast<long>(n + 1);
  }
  return r;
}

namespace {

// Folds the longest tail whose magnitudes sum to at most 2^limit into the
// last kept coefficient as a Theta term.
GPoly fold_tail(const GPoly& f, long limit) {
  const std::size_t len = f.effective_length();
  if (len <= 2) return f;
  double tail = 0.0;  // in units of 2^limit
  std::size_t K = len - 1;
  while (K > 1) {
    const Interval m = f[K].magnitude();
    if (!mpfr_zero_p(m.hi())) {
      const long e = static_cast<long>(mpfr_get_exp(m.hi())) - limit;
      if (e > 0) break;
      tail += std::ldexp(1.0, static_cast<int>(std::max<long>(e, -1000)));
      if (tail > 1.0) break;
    }
    --K;
  }
  if (K + 1 >= len) return f;
  GPoly r = f;
  for (std::size_t n = K + 1; n < len; ++n) {
    r[K] += hull_zero(f[n]);
    r[n] = Interval(f.precision());
  }
  return r;
}

}  // namespace

GPoly gp_trim(const GPoly& f, long tol_bits) {
  long top = LONG_MIN;
  for (const auto& c : f.coeffs()) {
    const Interval m = c.magnitude();
    if (!mpfr_zero_p(m.hi())) top = std::max(top, static_cast<long>(mpfr_get_exp(m.hi())));
  }
  if (top == LONG_MIN) return f;
  return fold_tail(f, top - tol_bits);
}

GPoly gp_trim_abs(const GPoly& f, long bits) { return fold_tail(f, -bits); }

std::vector<Interval> shifted_power_poly(long base, int k, Precision prec) {
  std::vector<Interval> c;
  c.reserve(static_cast<std::size_t>(k) + 1);
  mpz_class b(base);
  for (int j = 0; j <= k; ++j) {
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(k - j));
    c.emplace_back(mpz_class(binom * p), prec);
  }
  return c;
}

std::vector<Interval> binomial_power_poly(int k, const Interval& scale) {
  std::vector<Interval> c;
  c.reserve(static_cast<std::size_t>(k) + 1);
  Interval s(1, scale.precision());
  for (int j = 0; j <= k; ++j) {
    c.push_back(binomial(k, j, scale.precision()) * s);
    s = s * scale;
  }
  return c;
}

Interval gp_integral(const GPoly& f, const Interval& a, const Interval& b) {
  const std::size_t len = f.effective_length();
  const Precision prec = f.precision();
  Interval sum(prec);
  Interval pa = a;
  Interval pb = b;
  for (std::size_t n = 0; n < len; ++n) {
    // weight z^n >= 0, so the mean value lies in coeffs[n]
    const Interval w = (pb - pa) / static_cast<long>(n + 1);
    fma_acc(sum, f[n], w);
    pa = pa * a;
    pb = pb * b;
  }
  return sum;
}

Interval gp_integral_over(const GPoly& f, const Interval& a, const Interval& b, const Interval& V) {
  const Precision prec = f.precision();
  const Interval ab = hull(a, b);
  if (!certainly_gt(V, ab)) throw DomainError("gp_integral_over: V must exceed the range");
  const double top_arg = std::max(std::fabs(ab.hi_double()), std::fabs(ab.lo_double()));
  if (top_arg == 0.0) return Interval(prec);
  const double ratio = top_arg / V.lo_double();
  const std::size_t len = f.effective_length();
  std::size_t extra = 8;
  if (ratio > 0.0) {
    const double per_step = -std::log2(ratio);
    extra = static_cast<std::size_t>(std::ceil(static_cast<double>(prec.bits + 10) / std::max(per_step, 0.05)));
    extra = std::min<std::size_t>(extra, static_cast<std::size_t>(8 * prec.bits));
  }
  const std::size_t top = len - 1 + extra;
  std::vector<Interval> pa, pb;  // a^n, b^n for n = 0..top+1
  pa.reserve(top + 2);
  pb.reserve(top + 2);
  pa.emplace_back(1, prec);
  pb.emplace_back(1, prec);
  for (std::size_t n = 1; n <= top + 1; ++n) {
    pa.push_back(pa.back() * a);
    pb.push_back(pb.back() * b);
  }
  // M_top enclosed by the mean value of 1/(V-u)
  Interval m = (pb[top + 1] - pa[top + 1]) / static_cast<long>(top + 1) / (V - ab);
  Interval sum(prec);
  for (std::size_t n = top;; --n) {
    if (n < len) fma_acc(sum, f[n], m);
    if (n == 0) break;
    // M_{n-1} = (M_n + (b^n - a^n)/n) / V
    m = (m + (pb[n] - pa[n]) / static_cast<long>(n)) / V;
  }
  return sum;
}

}  // namespace dhr
