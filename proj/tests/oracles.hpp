#pragma once

// Independent reference computations. Deliberately naive: fixed-step rules
// with no adaptivity, so they share no code with the library.

#include <cmath>
#include <cstddef>

namespace oracle {

template <class F>
double trapezoid(const F& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i));
  return sum * h;
}

template <class F>
double midpoint(const F& f, double a, double b, std::size_t n) {
  const double h = (b - a) / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += f(a + h * (static_cast<double>(i) + 0.5));
  return sum * h;
}

template <class F>
double central_difference(const F& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Pinned with mpmath (50 digits): int_2^10 r / (3 log r + log log r) dr.
inline constexpr double kPhiCubic_2_10 = 8.32968593261403843;
// Same integrand on [2, 20].
inline constexpr double kPhiCubic_2_20 = 24.7520184451403232708;

}  // namespace oracle
