#pragma once

// Arbitrary-precision interval arithmetic on MPFR endpoints.
//
// Every operation rounds the lower endpoint towards -inf and the upper
// endpoint towards +inf, so the result always contains the exact image of
// the operands. The precision of a result is the larger of the operand
// precisions; there is no global precision state.

#include <mpfr.h>

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace dhr {

struct Precision {
  long bits = 53;

  constexpr Precision() = default;
  constexpr explicit Precision(long b) : bits(b) {}

  // Working precision used for sieve dimension kappa: 12(kappa + 10) bits.
  static constexpr Precision for_kappa(int kappa) { return Precision(12L * (kappa + 10)); }

  friend constexpr bool operator==(Precision a, Precision b) { return a.bits == b.bits; }
};

class Interval {
 public:
  explicit Interval(Precision prec = Precision{});
  Interval(long value, Precision prec);
  Interval(const mpz_class& value, Precision prec);
  Interval(const mpq_class& value, Precision prec);
  // [lo, hi] for exact integers lo <= hi.
  Interval(long lo, long hi, Precision prec);

  // Rejects NaN and infinities.
  static Interval from_double(double value, Precision prec);
  // Encloses the decimal string (e.g. "0.1").
  static Interval from_string(const std::string& value, Precision prec);
  static Interval unit(Precision prec) { return Interval(0, 1, prec); }

  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  Precision precision() const { return Precision(mpfr_get_prec(lo_)); }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

  bool is_exact_zero() const { return mpfr_zero_p(lo_) && mpfr_zero_p(hi_); }
  bool is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }
  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  bool is_positive() const { return mpfr_sgn(lo_) > 0; }
  bool is_negative() const { return mpfr_sgn(hi_) < 0; }
  bool is_nonnegative() const { return mpfr_sgn(lo_) >= 0; }
  bool is_nonpositive() const { return mpfr_sgn(hi_) <= 0; }

  bool contains(const Interval& other) const;
  bool contains(long value) const;
  bool intersects(const Interval& other) const;

  // Exact midpoint as a point interval (one extra bit of precision).
  Interval midpoint() const;
  // Upper bound on hi - lo.
  Interval width() const;
  // log2 of an upper bound on the width; -inf for point intervals.
  double log2_width() const;
  // Largest |x| over the interval, rounded up, as a point interval.
  Interval magnitude() const;
  // Lower endpoint / upper endpoint as point intervals.
  Interval lower() const;
  Interval upper() const;

  // Outward-rounded doubles.
  double lo_double() const;
  double hi_double() const;
  double mid_double() const;

  // Same value, different precision, still enclosing.
  Interval with_precision(Precision prec) const;

  // "[lo, hi]" with the given number of significant digits.
  std::string to_string(int digits = 20) const;
  // Midpoint printed with a fixed number of decimal places.
  std::string mid_fixed(int places) const;

  // Raw endpoint access for kernels in this library.
  mpfr_ptr lo_mut() { return lo_; }
  mpfr_ptr hi_mut() { return hi_; }

 private:
  __mpfr_struct lo_[1];
  __mpfr_struct hi_[1];

  void check_finite() const;
};

Interval operator-(const Interval& a);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Throws DomainError when 0 is in b.
Interval operator/(const Interval& a, const Interval& b);

Interval operator+(const Interval& a, long b);
Interval operator-(const Interval& a, long b);
Interval operator-(long a, const Interval& b);
Interval operator*(const Interval& a, long b);
Interval operator*(long a, const Interval& b);
Interval operator/(const Interval& a, long b);
Interval operator/(long a, const Interval& b);

Interval& operator+=(Interval& a, const Interval& b);
Interval& operator-=(Interval& a, const Interval& b);
Interval& operator*=(Interval& a, const Interval& b);

// acc += a * b without temporaries.
void fma_acc(Interval& acc, const Interval& a, const Interval& b);
// acc += hull(0, a * b * [0,1]) i.e. the product scaled by an unknown factor in [0,1].
void fma_acc_theta(Interval& acc, const Interval& a, const Interval& b);

Interval abs(const Interval& a);
Interval sqr(const Interval& a);
Interval pow(const Interval& a, long n);
// a >= 0 required unless the exponent is a point integer.
Interval pow(const Interval& a, const Interval& nu);
Interval exp(const Interval& a);
Interval log(const Interval& a);
Interval sqrt(const Interval& a);
Interval mul_2si(const Interval& a, long e);

Interval hull(const Interval& a, const Interval& b);
// hull(0, a)
Interval hull_zero(const Interval& a);
std::optional<Interval> intersect(const Interval& a, const Interval& b);
// Pointwise max / min of the underlying reals.
Interval max(const Interval& a, const Interval& b);
Interval min(const Interval& a, const Interval& b);

// Certified comparisons: true only when every pair of points agrees.
bool certainly_lt(const Interval& a, const Interval& b);
bool certainly_gt(const Interval& a, const Interval& b);
bool certainly_le(const Interval& a, const Interval& b);

// floor(x) when every point of the interval has the same floor.
std::optional<long> certified_floor(const Interval& a);
// floor of the lower endpoint.
long floor_lo(const Interval& a);

Interval euler_gamma(Precision prec);
Interval const_log2(Precision prec);
Interval factorial(long n, Precision prec);
Interval binomial(long n, long k, Precision prec);

// Integral of z^n e^{-u0 z} over [0,1] for u0 > 0.
Interval exp_moment(long n, const Interval& u0);
Interval exp_moment_series(long n, const Interval& u0);
Interval exp_moment_recurrence(long n, const Interval& u0);
// I_0, ..., I_top in one pass.
std::vector<Interval> exp_moment_table(long top, const Interval& u0);

}  // namespace dhr
