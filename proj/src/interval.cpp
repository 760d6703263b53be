#include "dhr/interval.hpp"

#include "dhr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <utility>

namespace dhr {

namespace {

// Scratch endpoints reused by the kernels below; one set per thread.
struct Scratch {
  mpfr_t a, b, c, d;
  Scratch() {
    mpfr_inits2(64, a, b, c, d, static_cast<mpfr_ptr>(nullptr));
  }
  ~Scratch() { mpfr_clears(a, b, c, d, static_cast<mpfr_ptr>(nullptr)); }
  void ensure(mpfr_prec_t p) {
    if (mpfr_get_prec(a) != p) {
      mpfr_set_prec(a, p);
      mpfr_set_prec(b, p);
      mpfr_set_prec(c, p);
      mpfr_set_prec(d, p);
    }
  }
};

Scratch& scratch(mpfr_prec_t p) {
  thread_local Scratch s;
  s.ensure(p);
  return s;
}

mpfr_prec_t max_prec(const Interval& a, const Interval& b) {
  return std::max(mpfr_get_prec(a.lo()), mpfr_get_prec(b.lo()));
}

// [rlo, rhi] = a * b with outward rounding; rlo/rhi must not alias inputs.
void mul_endpoints(mpfr_ptr rlo, mpfr_ptr rhi, const Interval& a, const Interval& b) {
  mpfr_srcptr al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  const int sal = mpfr_sgn(al), sah = mpfr_sgn(ah), sbl = mpfr_sgn(bl), sbh = mpfr_sgn(bh);
  if (sal >= 0) {
    if (sbl >= 0) {
      mpfr_mul(rlo, al, bl, MPFR_RNDD);
      mpfr_mul(rhi, ah, bh, MPFR_RNDU);
    } else if (sbh <= 0) {
      mpfr_mul(rlo, ah, bl, MPFR_RNDD);
      mpfr_mul(rhi, al, bh, MPFR_RNDU);
    } else {
      mpfr_mul(rlo, ah, bl, MPFR_RNDD);
      mpfr_mul(rhi, ah, bh, MPFR_RNDU);
    }
  } else if (sah <= 0) {
    if (sbl >= 0) {
      mpfr_mul(rlo, al, bh, MPFR_RNDD);
      mpfr_mul(rhi, ah, bl, MPFR_RNDU);
    } else if (sbh <= 0) {
      mpfr_mul(rlo, ah, bh, MPFR_RNDD);
      mpfr_mul(rhi, al, bl, MPFR_RNDU);
    } else {
      mpfr_mul(rlo, al, bh, MPFR_RNDD);
      mpfr_mul(rhi, al, bl, MPFR_RNDU);
    }
  } else {
    if (sbl >= 0) {
      mpfr_mul(rlo, al, bh, MPFR_RNDD);
      mpfr_mul(rhi, ah, bh, MPFR_RNDU);
    } else if (sbh <= 0) {
      mpfr_mul(rlo, ah, bl, MPFR_RNDD);
      mpfr_mul(rhi, al, bl, MPFR_RNDU);
    } else {
      auto& s = scratch(mpfr_get_prec(rlo));
      mpfr_mul(rlo, al, bh, MPFR_RNDD);
      mpfr_mul(s.c, ah, bl, MPFR_RNDD);
      mpfr_min(rlo, rlo, s.c, MPFR_RNDD);
      mpfr_mul(rhi, al, bl, MPFR_RNDU);
      mpfr_mul(s.c, ah, bh, MPFR_RNDU);
      mpfr_max(rhi, rhi, s.c, MPFR_RNDU);
    }
  }
}

}  // namespace

Interval::Interval(Precision prec) {
  mpfr_init2(lo_, prec.bits);
  mpfr_init2(hi_, prec.bits);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(long value, Precision prec) {
  mpfr_init2(lo_, prec.bits);
  mpfr_init2(hi_, prec.bits);
  mpfr_set_si(lo_, value, MPFR_RNDD);
  mpfr_set_si(hi_, value, MPFR_RNDU);
}

Interval::Interval(long lo, long hi, Precision prec) {
  if (lo > hi) throw UsageError("Interval: lo > hi");
  mpfr_init2(lo_, prec.bits);
  mpfr_init2(hi_, prec.bits);
  mpfr_set_si(lo_, lo, MPFR_RNDD);
  mpfr_set_si(hi_, hi, MPFR_RNDU);
}

Interval::Interval(const mpz_class& value, Precision prec) {
  mpfr_init2(lo_, prec.bits);
  mpfr_init2(hi_, prec.bits);
  mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const mpq_class& value, Precision prec) {
  mpfr_init2(lo_, prec.bits);
  mpfr_init2(hi_, prec.bits);
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Interval Interval::from_double(double value, Precision prec) {
  if (!std::isfinite(value)) throw DomainError("Interval: non-finite endpoint");
  Interval r(prec);
  mpfr_set_d(r.lo_, value, MPFR_RNDD);
  mpfr_set_d(r.hi_, value, MPFR_RNDU);
  return r;
}

Interval Interval::from_string(const std::string& value, Precision prec) {
  Interval r(prec);
  if (mpfr_set_str(r.lo_, value.c_str(), 10, MPFR_RNDD) != 0 ||
      mpfr_set_str(r.hi_, value.c_str(), 10, MPFR_RNDU) != 0) {
    throw UsageError("Interval: cannot parse '" + value + "'");
  }
  r.check_finite();
  return r;
}

Interval::Interval(const Interval& other) {
  mpfr_init2(lo_, mpfr_get_prec(other.lo_));
  mpfr_init2(hi_, mpfr_get_prec(other.hi_));
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept {
  std::memcpy(lo_, other.lo_, sizeof(lo_));
  std::memcpy(hi_, other.hi_, sizeof(hi_));
  other.lo_->_mpfr_d = nullptr;
  other.hi_->_mpfr_d = nullptr;
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    if (mpfr_get_prec(lo_) != mpfr_get_prec(other.lo_)) {
      mpfr_set_prec(lo_, mpfr_get_prec(other.lo_));
      mpfr_set_prec(hi_, mpfr_get_prec(other.hi_));
    }
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  std::swap(lo_[0], other.lo_[0]);
  std::swap(hi_[0], other.hi_[0]);
  return *this;
}

Interval::~Interval() {
  if (lo_->_mpfr_d != nullptr) mpfr_clear(lo_);
  if (hi_->_mpfr_d != nullptr) mpfr_clear(hi_);
}

void Interval::check_finite() const {
  if (!mpfr_number_p(lo_) || !mpfr_number_p(hi_)) {
    throw DomainError("Interval: non-finite endpoint");
  }
}

bool Interval::contains(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.lo_) && mpfr_lessequal_p(other.hi_, hi_);
}

bool Interval::contains(long value) const {
  return mpfr_cmp_si(lo_, value) <= 0 && mpfr_cmp_si(hi_, value) >= 0;
}

bool Interval::intersects(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

Interval Interval::midpoint() const {
  Interval r(Precision(mpfr_get_prec(lo_) + 1));
  mpfr_add(r.lo_, lo_, hi_, MPFR_RNDN);  // exact at prec + 1
  mpfr_div_2ui(r.lo_, r.lo_, 1, MPFR_RNDN);
  mpfr_set(r.hi_, r.lo_, MPFR_RNDN);
  return r;
}

Interval Interval::width() const {
  Interval r(precision());
  mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
  mpfr_set(r.lo_, r.hi_, MPFR_RNDD);
  return r;
}

double Interval::log2_width() const {
  Interval w = width();
  if (mpfr_zero_p(w.hi_)) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, w.hi_, MPFR_RNDU);
  return std::log2(m) + static_cast<double>(e);
}

Interval Interval::magnitude() const {
  Interval r(precision());
  mpfr_abs(r.hi_, lo_, MPFR_RNDU);
  if (mpfr_cmpabs(hi_, lo_) > 0) mpfr_abs(r.hi_, hi_, MPFR_RNDU);
  mpfr_set(r.lo_, r.hi_, MPFR_RNDD);
  return r;
}

Interval Interval::lower() const {
  Interval r(precision());
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval Interval::upper() const {
  Interval r(precision());
  mpfr_set(r.lo_, hi_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
double Interval::mid_double() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

Interval Interval::with_precision(Precision prec) const {
  Interval r(prec);
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

std::string Interval::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "[%.*RDg, %.*RUg]", digits, lo_, digits, hi_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

std::string Interval::mid_fixed(int places) const {
  Interval m = midpoint();
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*RNf", places, m.lo_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

Interval operator-(const Interval& a) {
  Interval r(a.precision());
  mpfr_neg(r.lo_mut(), a.hi(), MPFR_RNDD);
  mpfr_neg(r.hi_mut(), a.lo(), MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(Precision(max_prec(a, b)));
  mpfr_add(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_add(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(Precision(max_prec(a, b)));
  mpfr_sub(r.lo_mut(), a.lo(), b.hi(), MPFR_RNDD);
  mpfr_sub(r.hi_mut(), a.hi(), b.lo(), MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  Interval r(Precision(max_prec(a, b)));
  mul_endpoints(r.lo_mut(), r.hi_mut(), a, b);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DomainError("Interval division by an interval containing 0");
  if (b.is_negative()) return -(a / (-b));
  Interval r(Precision(max_prec(a, b)));
  if (a.is_nonnegative()) {
    mpfr_div(r.lo_mut(), a.lo(), b.hi(), MPFR_RNDD);
    mpfr_div(r.hi_mut(), a.hi(), b.lo(), MPFR_RNDU);
  } else if (a.is_nonpositive()) {
    mpfr_div(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_div(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
  } else {
    mpfr_div(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_div(r.hi_mut(), a.hi(), b.lo(), MPFR_RNDU);
  }
  return r;
}

Interval operator+(const Interval& a, long b) {
  Interval r(a.precision());
  mpfr_add_si(r.lo_mut(), a.lo(), b, MPFR_RNDD);
  mpfr_add_si(r.hi_mut(), a.hi(), b, MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, long b) {
  Interval r(a.precision());
  mpfr_sub_si(r.lo_mut(), a.lo(), b, MPFR_RNDD);
  mpfr_sub_si(r.hi_mut(), a.hi(), b, MPFR_RNDU);
  return r;
}

Interval operator-(long a, const Interval& b) {
  Interval r(b.precision());
  mpfr_si_sub(r.lo_mut(), a, b.hi(), MPFR_RNDD);
  mpfr_si_sub(r.hi_mut(), a, b.lo(), MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, long b) {
  Interval r(a.precision());
  if (b >= 0) {
    mpfr_mul_si(r.lo_mut(), a.lo(), b, MPFR_RNDD);
    mpfr_mul_si(r.hi_mut(), a.hi(), b, MPFR_RNDU);
  } else {
    mpfr_mul_si(r.lo_mut(), a.hi(), b, MPFR_RNDD);
    mpfr_mul_si(r.hi_mut(), a.lo(), b, MPFR_RNDU);
  }
  return r;
}

Interval operator*(long a, const Interval& b) { return b * a; }

Interval operator/(const Interval& a, long b) {
  if (b == 0) throw DomainError("Interval division by 0");
  Interval r(a.precision());
  if (b > 0) {
    mpfr_div_si(r.lo_mut(), a.lo(), b, MPFR_RNDD);
    mpfr_div_si(r.hi_mut(), a.hi(), b, MPFR_RNDU);
  } else {
    mpfr_div_si(r.lo_mut(), a.hi(), b, MPFR_RNDD);
    mpfr_div_si(r.hi_mut(), a.lo(), b, MPFR_RNDU);
  }
  return r;
}

Interval operator/(long a, const Interval& b) { return Interval(a, b.precision()) / b; }

Interval& operator+=(Interval& a, const Interval& b) {
  if (mpfr_get_prec(b.lo()) > mpfr_get_prec(a.lo())) {
    a = a + b;
    return a;
  }
  mpfr_add(a.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_add(a.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
  return a;
}

Interval& operator-=(Interval& a, const Interval& b) {
  if (mpfr_get_prec(b.lo()) > mpfr_get_prec(a.lo())) {
    a = a - b;
    return a;
  }
  auto& s = scratch(mpfr_get_prec(a.lo()));
  mpfr_sub(s.a, a.lo(), b.hi(), MPFR_RNDD);
  mpfr_sub(a.hi_mut(), a.hi(), b.lo(), MPFR_RNDU);
  mpfr_set(a.lo_mut(), s.a, MPFR_RNDD);
  return a;
}

Interval& operator*=(Interval& a, const Interval& b) {
  a = a * b;
  return a;
}

void fma_acc(Interval& acc, const Interval& a, const Interval& b) {
  if (a.is_exact_zero() || b.is_exact_zero()) return;
  auto& s = scratch(mpfr_get_prec(acc.lo()));
  mul_endpoints(s.a, s.b, a, b);
  mpfr_add(acc.lo_mut(), acc.lo(), s.a, MPFR_RNDD);
  mpfr_add(acc.hi_mut(), acc.hi(), s.b, MPFR_RNDU);
}

void fma_acc_theta(Interval& acc, const Interval& a, const Interval& b) {
  if (a.is_exact_zero() || b.is_exact_zero()) return;
  auto& s = scratch(mpfr_get_prec(acc.lo()));
  mul_endpoints(s.a, s.b, a, b);
  if (mpfr_sgn(s.a) < 0) mpfr_add(acc.lo_mut(), acc.lo(), s.a, MPFR_RNDD);
  if (mpfr_sgn(s.b) > 0) mpfr_add(acc.hi_mut(), acc.hi(), s.b, MPFR_RNDU);
}

Interval abs(const Interval& a) {
  if (a.is_nonnegative()) return a;
  if (a.is_nonpositive()) return -a;
  Interval r(a.precision());
  mpfr_set_zero(r.lo_mut(), 1);
  mpfr_set(r.hi_mut(), a.magnitude().hi(), MPFR_RNDU);
  return r;
}

Interval sqr(const Interval& a) { return pow(a, 2); }

Interval pow(const Interval& a, long n) {
  const Precision p = a.precision();
  if (n == 0) return Interval(1, p);
  if (n < 0) return Interval(1, p) / pow(a, -n);
  Interval r(p);
  if (a.is_nonnegative()) {
    mpfr_pow_ui(r.lo_mut(), a.lo(), static_cast<unsigned long>(n), MPFR_RNDD);
    mpfr_pow_ui(r.hi_mut(), a.hi(), static_cast<unsigned long>(n), MPFR_RNDU);
  } else if (n % 2 == 1) {
    mpfr_pow_ui(r.lo_mut(), a.lo(), static_cast<unsigned long>(n), MPFR_RNDD);
    mpfr_pow_ui(r.hi_mut(), a.hi(), static_cast<unsigned long>(n), MPFR_RNDU);
  } else if (a.is_nonpositive()) {
    mpfr_pow_ui(r.lo_mut(), a.hi(), static_cast<unsigned long>(n), MPFR_RNDD);
    mpfr_pow_ui(r.hi_mut(), a.lo(), static_cast<unsigned long>(n), MPFR_RNDU);
  } else {
    Interval m = a.magnitude();
    mpfr_set_zero(r.lo_mut(), 1);
    mpfr_pow_ui(r.hi_mut(), m.hi(), static_cast<unsigned long>(n), MPFR_RNDU);
  }
  return r;
}

Interval pow(const Interval& a, const Interval& nu) {
  if (nu.is_point() && mpfr_integer_p(nu.lo()) && mpfr_fits_slong_p(nu.lo(), MPFR_RNDN)) {
    return pow(a, mpfr_get_si(nu.lo(), MPFR_RNDN));
  }
  if (mpfr_sgn(a.lo()) < 0) throw DomainError("pow: negative base with non-integer exponent");
  if (a.is_positive()) return exp(nu * log(a));
  if (!nu.is_positive()) throw DomainError("pow: 0 raised to a non-positive power");
  if (mpfr_zero_p(a.hi())) return Interval(a.precision());
  return hull_zero(exp(nu * log(a.upper())));
}

Interval exp(const Interval& a) {
  Interval r(a.precision());
  mpfr_exp(r.lo_mut(), a.lo(), MPFR_RNDD);
  mpfr_exp(r.hi_mut(), a.hi(), MPFR_RNDU);
  return r;
}

Interval log(const Interval& a) {
  if (!a.is_positive()) throw DomainError("log of an interval not bounded away from 0");
  Interval r(a.precision());
  mpfr_log(r.lo_mut(), a.lo(), MPFR_RNDD);
  mpfr_log(r.hi_mut(), a.hi(), MPFR_RNDU);
  return r;
}

Interval sqrt(const Interval& a) {
  if (mpfr_sgn(a.lo()) < 0) throw DomainError("sqrt of a negative interval");
  Interval r(a.precision());
  mpfr_sqrt(r.lo_mut(), a.lo(), MPFR_RNDD);
  mpfr_sqrt(r.hi_mut(), a.hi(), MPFR_RNDU);
  return r;
}

Interval mul_2si(const Interval& a, long e) {
  Interval r(a.precision());
  mpfr_mul_2si(r.lo_mut(), a.lo(), e, MPFR_RNDD);
  mpfr_mul_2si(r.hi_mut(), a.hi(), e, MPFR_RNDU);
  return r;
}

Interval hull(const Interval& a, const Interval& b) {
  Interval r(Precision(max_prec(a, b)));
  mpfr_min(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval hull_zero(const Interval& a) {
  Interval r(a.precision());
  if (mpfr_sgn(a.lo()) < 0) mpfr_set(r.lo_mut(), a.lo(), MPFR_RNDD);
  if (mpfr_sgn(a.hi()) > 0) mpfr_set(r.hi_mut(), a.hi(), MPFR_RNDU);
  return r;
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  if (!a.intersects(b)) return std::nullopt;
  Interval r(Precision(max_prec(a, b)));
  mpfr_max(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_min(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval max(const Interval& a, const Interval& b) {
  Interval r(Precision(max_prec(a, b)));
  mpfr_max(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval min(const Interval& a, const Interval& b) {
  Interval r(Precision(max_prec(a, b)));
  mpfr_min(r.lo_mut(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_min(r.hi_mut(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

bool certainly_lt(const Interval& a, const Interval& b) { return mpfr_less_p(a.hi(), b.lo()) != 0; }
bool certainly_gt(const Interval& a, const Interval& b) { return mpfr_greater_p(a.lo(), b.hi()) != 0; }
bool certainly_le(const Interval& a, const Interval& b) { return mpfr_lessequal_p(a.hi(), b.lo()) != 0; }

std::optional<long> certified_floor(const Interval& a) {
  const long f = floor_lo(a);
  // hi < f + 1
  if (mpfr_cmp_si(a.hi(), f + 1) < 0) return f;
  return std::nullopt;
}

long floor_lo(const Interval& a) {
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(a.lo()));
  mpfr_floor(t, a.lo());
  const long f = mpfr_get_si(t, MPFR_RNDD);
  mpfr_clear(t);
  return f;
}

Interval euler_gamma(Precision prec) {
  Interval r(prec);
  mpfr_const_euler(r.lo_mut(), MPFR_RNDD);
  mpfr_const_euler(r.hi_mut(), MPFR_RNDU);
  return r;
}

Interval const_log2(Precision prec) {
  Interval r(prec);
  mpfr_const_log2(r.lo_mut(), MPFR_RNDD);
  mpfr_const_log2(r.hi_mut(), MPFR_RNDU);
  return r;
}

Interval factorial(long n, Precision prec) {
  if (n < 0) throw DomainError("factorial of a negative integer");
  Interval r(prec);
  mpfr_fac_ui(r.lo_mut(), static_cast<unsigned long>(n), MPFR_RNDD);
  mpfr_fac_ui(r.hi_mut(), static_cast<unsigned long>(n), MPFR_RNDU);
  return r;
}

Interval binomial(long n, long k, Precision prec) {
  if (k < 0 || k > n) return Interval(prec);
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Interval(c, prec);
}

namespace {

constexpr long kGuardBits = 32;

void require_positive_u0(const Interval& u0) {
  if (!u0.is_positive()) throw DomainError("exp_moment: u0 must be bounded away from 0");
}

}  // namespace

Interval exp_moment_series(long n, const Interval& u0) {
  require_positive_u0(u0);
  if (n < 0) throw DomainError("exp_moment: negative order");
  const Precision out = u0.precision();
  const Precision wp(out.bits + kGuardBits);
  const Interval u = u0.with_precision(wp);
  // e^{-u0} sum_k u0^k / ((n+1)...(n+k+1)); positive terms.
  Interval term = Interval(1, wp) / (n + 1);
  Interval sum = term;
  for (long k = 1;; ++k) {
    term = term * u / (n + k + 1);
    sum += term;
    // ratio of the next term is at most u0/(n+k+2)
    const double ratio = u.hi_double() / static_cast<double>(n + k + 2);
    if (ratio <= 0.5) {
      Interval rel = term / sum;
      if (rel.hi_double() < std::ldexp(1.0, -static_cast<int>(wp.bits))) {
        sum += hull_zero(term);  // tail <= term * r/(1-r) <= term
        break;
      }
    }
  }
  return (exp(-u) * sum).with_precision(out);
}

Interval exp_moment_recurrence(long n, const Interval& u0) {
  require_positive_u0(u0);
  if (n < 0) throw DomainError("exp_moment: negative order");
  const Precision out = u0.precision();
  const Precision wp(out.bits + kGuardBits);
  const Interval u = u0.with_precision(wp);
  const Interval e = exp(-u);
  Interval moment = (1 - e) / u;
  for (long k = 1; k <= n; ++k) moment = (moment * k - e) / u;
  return moment.with_precision(out);
}

Interval exp_moment(long n, const Interval& u0) {
  require_positive_u0(u0);
  if (static_cast<double>(n) > u0.hi_double()) return exp_moment_series(n, u0);
  return exp_moment_recurrence(n, u0);
}

}  // namespace dhr

namespace dhr {

std::vector<Interval> exp_moment_table(long top, const Interval& u0) {
  require_positive_u0(u0);
  if (top < 0) throw DomainError("exp_moment_table: negative order");
  const Precision out = u0.precision();
  const Precision wp(out.bits + kGuardBits);
  const Interval u = u0.with_precision(wp);
  const Interval e = exp(-u);
  std::vector<Interval> table(static_cast<std::size_t>(top) + 1, Interval(wp));
  // forward where n <= u0, backward from a series value above that
  const long split = std::min<long>(top, static_cast<long>(std::floor(u.lo_double())));
  table[0] = (1 - e) / u;
  for (long k = 1; k <= split; ++k) table[k] = (table[k - 1] * k - e) / u;
  if (split < top) {
    table[top] = exp_moment_series(top, u);
    for (long k = top; k > split + 1; --k) table[k - 1] = (u * table[k] + e) / k;
  }
  for (auto& v : table) v = v.with_precision(out);
  return table;
}

}  // namespace dhr
