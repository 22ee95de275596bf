#pragma once

#include <cmath>

namespace escrate::roots {

/// Bisection for a nondecreasing f with f(lo) <= target <= f(hi).
/// Stops when the bracket's relative width drops below rel_width (or the
/// bracket stops shrinking in floating point).
template <class F>
double bisect_increasing(const F& f, double target, double lo, double hi,
                         double rel_width = 1e-12) {
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= rel_width * std::abs(mid)) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace escrate::roots
