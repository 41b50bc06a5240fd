#pragma once

#include <cmath>

namespace nibbled {

// Open integration interval (lo, hi), possibly extending to -infinity on the
// left.  When left_infinite is set, lo is ignored.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool left_infinite = false;

  static Interval finite(double lo_, double hi_) { return {lo_, hi_, false}; }
  static Interval tail(double hi_) { return {0.0, hi_, true}; }

  bool contains(double x) const {
    if (left_infinite) return x < hi;
    return lo < x && x < hi;
  }

  bool in_closure(double x) const {
    if (left_infinite) return x <= hi;
    return lo <= x && x <= hi;
  }

  bool operator==(const Interval& o) const {
    if (left_infinite != o.left_infinite) return false;
    if (left_infinite) return hi == o.hi;
    return lo == o.lo && hi == o.hi;
  }
};

}  // namespace nibbled
