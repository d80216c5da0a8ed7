#pragma once

#include "sublevel/rational.hpp"

namespace sublevel {

/// Closed interval [lo, hi] with exact endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    lo.canonicalize();
    hi.canonicalize();
    if (lo > hi) throw std::invalid_argument("interval: lo > hi");
  }

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool is_point() const { return lo == hi; }
  double length() const { return to_double(width()); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace sublevel
