#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace granet {

/// Closed real interval [lo, hi]. Degenerate intervals (lo == hi) are allowed.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) { check(*this); }

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool is_point() const { return lo == hi; }

  friend bool operator==(const Interval&, const Interval&) = default;

  static void check(const Interval& v) {
    if (!(std::isfinite(v.lo) && std::isfinite(v.hi)))
      throw std::invalid_argument("Interval: bounds must be finite");
    if (v.lo > v.hi)
      throw std::invalid_argument("Interval: requires lo <= hi");
  }
};

/// Shift both endpoints by a constant (what the forecasts need; no general
/// interval calculus lives here).
inline Interval operator+(const Interval& a, double c) {
  return Interval(a.lo + c, a.hi + c);
}

/// Probability value, 0 <= value <= 1.
struct Probability {
  double value = 0.0;
};

/// Uncertainty of an interval comparison, 0 <= value <= 2. Stays <= 1
/// whenever the compared condition holds with probability >= 0.5.
struct Uncertainty {
  double value = 0.0;
};

namespace detail {

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace detail

/// P(X <= Y) with X uniform on a, Y uniform on b, independent. Exact
/// closed form: integrates the cdf of X over b piecewise, so the result is
/// deterministic. Two equal point intervals tie at 0.5.
inline Probability prob_leq(const Interval& a, const Interval& b) {
  Interval::check(a);
  Interval::check(b);
  const double wa = a.width();
  const double wb = b.width();

  if (wa == 0.0 && wb == 0.0) {
    if (a.lo < b.lo) return {1.0};
    if (a.lo > b.lo) return {0.0};
    return {0.5};
  }
  if (wa == 0.0) {
    // P(x0 <= Y), one-dimensional
    return {detail::clamp01((b.hi - a.lo) / wb)};
  }
  if (wb == 0.0) {
    // P(X <= y0)
    return {detail::clamp01((b.lo - a.lo) / wa)};
  }

  // cdf of X is 0 below a.lo, linear on [a.lo, a.hi], 1 above a.hi.
  double acc = 0.0;
  const double mid_lo = std::max(b.lo, a.lo);
  const double mid_hi = std::min(b.hi, a.hi);
  if (mid_hi > mid_lo) {
    const double u1 = mid_lo - a.lo;
    const double u2 = mid_hi - a.lo;
    acc += (u2 * u2 - u1 * u1) / (2.0 * wa);
  }
  const double top_lo = std::max(b.lo, a.hi);
  if (b.hi > top_lo) acc += b.hi - top_lo;
  return {detail::clamp01(acc / wb)};
}

/// UNC of the comparison a <= b: 2 P(X > Y).
inline Uncertainty unc_leq(const Interval& a, const Interval& b) {
  return {2.0 * (1.0 - prob_leq(a, b).value)};
}

/// Confidence of the comparison a <= b: P(X <= Y) - P(X > Y), in [-1, 1].
inline double com_leq(const Interval& a, const Interval& b) {
  return 1.0 - unc_leq(a, b).value;
}

}  // namespace granet
