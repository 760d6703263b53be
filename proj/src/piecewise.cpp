#include "dhr/piecewise.hpp"

#include "dhr/errors.hpp"

#include <string>

namespace dhr {

const PiecewiseFn::UnitPiece& PiecewiseFn::piece(long u0) const {
  auto it = pieces_.find(u0);
  if (it == pieces_.end()) throw DomainError("no piece at u0 = " + std::to_string(u0));
  return it->second;
}

namespace {

const GPoly& half(const std::optional<GPoly>& g, long u0) {
  if (!g) throw DomainError("piece at u0 = " + std::to_string(u0) + " is not defined on this half");
  return *g;
}

}  // namespace

Interval PiecewiseFn::eval_at(long u0, const Interval& z) const {
  const UnitPiece& p = piece(u0);
  if (!p.right) return gp_eval(half(p.left, u0), z);
  if (certainly_lt(z, split_)) return gp_eval(half(p.left, u0), z);
  if (certainly_gt(z, split_)) return gp_eval(*p.right, z);
  const Interval r = gp_eval(*p.right, z);
  if (!p.left) return r;
  return hull(gp_eval(*p.left, z), r);
}

Interval PiecewiseFn::eval(const Interval& u) const {
  const auto f = certified_floor(u);
  if (!f) throw AmbiguousBoundaryError("argument " + u.to_string(12) + " straddles an integer");
  return eval_at(*f, u - *f);
}

template <class Op>
Interval PiecewiseFn::integrate_halves(long u0, const Interval& a, const Interval& b, Op op) const {
  const UnitPiece& p = piece(u0);
  if (!p.right) return op(half(p.left, u0), a, b);
  // each endpoint lies certainly left of the split, certainly right, or is unresolved;
  // unresolved endpoints take the hull over both readings
  const bool a_left = certainly_le(a, split_.lower());
  const bool a_right = certainly_le(split_.upper(), a);
  const bool b_left = certainly_le(b, split_.lower());
  const bool b_right = certainly_le(split_.upper(), b);
  auto across = [&] { return op(half(p.left, u0), a, split_) + op(*p.right, split_, b); };
  if (b_left) return op(half(p.left, u0), a, b);
  if (a_right) return op(*p.right, a, b);
  if (a_left && b_right) return across();
  Interval r = across();
  if (!a_left) r = hull(r, op(*p.right, a, b));
  if (!b_right) r = hull(r, op(half(p.left, u0), a, b));
  return r;
}

Interval PiecewiseFn::integral(long u0, const Interval& a, const Interval& b) const {
  return integrate_halves(u0, a, b,
                          [](const GPoly& g, const Interval& x, const Interval& y) { return gp_integral(g, x, y); });
}

Interval PiecewiseFn::integral_over(long u0, const Interval& a, const Interval& b, const Interval& V) const {
  return integrate_halves(u0, a, b, [&V](const GPoly& g, const Interval& x, const Interval& y) {
    return gp_integral_over(g, x, y, V);
  });
}

std::vector<long> PiecewiseFn::continuity_failures() const {
  std::vector<long> bad;
  for (auto it = pieces_.begin(); it != pieces_.end(); ++it) {
    const long u0 = it->first;
    const UnitPiece& p = it->second;
    const Precision prec = split_.precision();
    if (p.left && p.right && !gp_eval(*p.left, split_).intersects(gp_eval(*p.right, split_))) bad.push_back(u0);
    auto next = std::next(it);
    if (next == pieces_.end() || next->first != u0 + 1) continue;
    const Interval end = p.right ? gp_eval(*p.right, Interval(1, prec)) : gp_eval(half(p.left, u0), Interval(1, prec));
    if (!next->second.left) continue;
    if (!end.intersects(gp_eval(*next->second.left, Interval(0, prec)))) bad.push_back(u0);
  }
  return bad;
}

}  // namespace dhr
