#pragma once

// Functions stored as one expansion per unit interval [u0, u0+1], optionally
// split into two halves at a common point s in (0,1).

#include "dhr/gpoly.hpp"

#include <map>
#include <optional>

namespace dhr {

class PiecewiseFn {
 public:
  // Without a right half the left expansion covers all of [0,1]. A piece may
  // also lack its left half when the function is defined elsewhere there.
  struct UnitPiece {
    std::optional<GPoly> left;
    std::optional<GPoly> right;
  };

  explicit PiecewiseFn(Interval split) : split_(std::move(split)) {}

  const Interval& split() const { return split_; }
  void set(long u0, UnitPiece piece) { pieces_.insert_or_assign(u0, std::move(piece)); }
  bool has(long u0) const { return pieces_.count(u0) != 0; }
  const UnitPiece& piece(long u0) const;
  long u0_min() const { return pieces_.begin()->first; }
  long u0_max() const { return pieces_.rbegin()->first; }
  bool empty() const { return pieces_.empty(); }

  // Value at u0 + z for z in [0,1]; hull of both halves when z meets the split.
  Interval eval_at(long u0, const Interval& z) const;
  // Dispatch on floor(u); AmbiguousBoundaryError when u straddles an integer.
  Interval eval(const Interval& u) const;

  // Integral over [u0 + a, u0 + b], 0 <= a <= b <= 1.
  Interval integral(long u0, const Interval& a, const Interval& b) const;
  // Integral of g(u0+z)/(V - z) over the same range, V = v - u0 > 1.
  Interval integral_over(long u0, const Interval& a, const Interval& b, const Interval& V) const;

  // Adjacent endpoint enclosures that fail to intersect, as u0 values.
  std::vector<long> continuity_failures() const;

 private:
  template <class Op>
  Interval integrate_halves(long u0, const Interval& a, const Interval& b, Op op) const;

  Interval split_;
  std::map<long, UnitPiece> pieces_;
};

}  // namespace dhr
