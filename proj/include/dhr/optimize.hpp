#pragma once

// Minimisation of R(v, w) and the admissible integer r.

#include "dhr/ff.hpp"

#include <gmpxx.h>

#include <functional>
#include <map>
#include <memory>
#include <optional>

namespace dhr {

struct OptimResult {
  int kappa = 0;
  int h = 0;
  Interval v_opt;
  Interval w_opt;
  Interval R_min;
  long r = 0;
  // target precision B of the run that certified r
  long bits = 0;
  // R(v_opt -+ 0.25) both exceed R_min
  bool local_min = false;
};

struct OptimizeOptions {
  // v searched below this bound
  long vmax = 200;
  int golden_iterations = 30;
  // called with (kappa, new bits) before each precision escalation
  std::function<void(int, long)> on_escalate;
};

class Optimizer {
 public:
  explicit Optimizer(SieveFunctions& S, OptimizeOptions opts = {});

  SieveFunctions& functions() const { return S_; }

  // Integral of F over [a, b].
  Interval int_F(const Interval& a, const Interval& b) { return S_.int_F(a, b); }
  // h v f(v) - kappa int_w^{v-1} F; vanishes at the stationary w.
  Interval dRdw_numerator(const mpq_class& v, const Interval& w, int h);
  Interval w_of_v(const mpq_class& v, int h);
  // R(v, w(v)) = kappa/f(v) int_{w(v)}^{v-1} F(u)/(v-u) du
  Interval R_of_v(const mpq_class& v, int h);
  // The two-argument R(v, w).
  Interval R_direct(const mpq_class& v, const Interval& w, int h);

  // Throws PrecisionError when R_min straddles an integer.
  OptimResult minimize(int h);

 private:
  struct VData {
    Interval v;
    Interval f_v;
    // int_2^{v-1} F
    Interval F_tail;
    // int_{j}^{j+1} F(u)/(v-u) du for whole pieces below v-1, by j
    std::map<long, Interval> kernel_full;
    // int over the last partial piece [floor(v-1), v-1]
    Interval kernel_last;
  };
  VData& data(const mpq_class& v);
  // int_w^{v-1} F(u)/(v-u) du
  Interval kernel_integral(VData& d, const Interval& w);
  Interval closed_kernel(const Interval& v, const Interval& w) const;
  Interval closed_F(const Interval& w) const;

  SieveFunctions& S_;
  OptimizeOptions opts_;
  std::map<mpq_class, VData> cache_;
};

// r for a single (kappa, h): h for kappa = 1 and h <= 2, h + 1 for kappa = 1
// and h >= 3, else floor(R_min). UsageError when kappa > h.
long admissible_r(int kappa, int h);

// Everything that depends on kappa alone, shared by all h. Failed floor
// certification is retried at doubled precision, at most four times.
class KappaSolver {
 public:
  explicit KappaSolver(int kappa, long bits = 0, OptimizeOptions opts = {});

  int kappa() const { return kappa_; }
  long bits() const { return bits_; }
  SieveContext& context() { return *ctx_; }
  const CriticalPair& critical() const { return S_->critical(); }
  SieveFunctions& functions() { return *S_; }
  Optimizer& optimizer() { return *opt_; }

  OptimResult solve(int h);

 private:
  void build(long bits);

  int kappa_;
  long bits_ = 0;
  OptimizeOptions opts_;
  std::unique_ptr<SieveContext> ctx_;
  std::unique_ptr<SieveFunctions> S_;
  std::unique_ptr<Optimizer> opt_;
};

}  // namespace dhr
