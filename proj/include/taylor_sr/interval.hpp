#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "taylor_sr/expr.hpp"

namespace tsr {

// Extended-real closed interval. Always nonempty; infinities allowed.
// Plain floating arithmetic, no outward rounding: bounds are approximate
// enclosures used as search heuristics.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval whole() {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }
  static Interval point(double v) { return {v, v}; }

  bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  double width() const { return hi - lo; }
  double mid() const;
  bool contains_value(double v) const { return lo <= v && v <= hi; }
};

inline double Interval::mid() const {
  if (is_finite()) return 0.5 * (lo + hi);
  if (std::isfinite(lo)) return lo + 1.0;
  if (std::isfinite(hi)) return hi - 1.0;
  return 0.0;
}

Interval iv_add(Interval a, Interval b);
Interval iv_sub(Interval a, Interval b);
Interval iv_mul(Interval a, Interval b);
// Division by an interval containing zero returns the whole line.
Interval iv_div(Interval a, Interval b);
Interval iv_neg(Interval a);
Interval iv_scale(Interval a, double s);
// Dependency-aware power: even exponents map through |.| first.
Interval iv_pow_nat(Interval a, int n);
Interval iv_sin(Interval a);
Interval iv_cos(Interval a);
Interval iv_exp(Interval a);
Interval iv_logabs(Interval a);
// Protected sqrt: domain clamped to [0, inf); a fully negative interval
// yields the degenerate [0,0].
Interval iv_sqrt(Interval a);

inline bool iv_contains(Interval a, Interval b) {
  return a.lo <= b.lo && b.hi <= a.hi;
}
inline Interval iv_hull(Interval a, Interval b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Range enclosure of an expression over per-variable domains. Constant
// leaves may optionally be ranged over `const_range` (used when scoring
// subspace templates whose placeholders stand for any ERC value).
Interval iv_eval(const Expr& e, const std::vector<Interval>& domain,
                 const Interval* const_range = nullptr);

// Forward-mode interval gradient: enclosures of the value and of every
// partial derivative in one pass, without building derivative trees.
struct IntervalGradient {
  Interval value;
  std::vector<Interval> grad;  // one entry per domain variable
};
IntervalGradient iv_eval_grad(const Expr& e,
                              const std::vector<Interval>& domain);

}  // namespace tsr
