#pragma once

#include <string>
#include <vector>

#include "escrate/monotone_interp.hpp"
#include "escrate/profiles.hpp"

namespace escrate {

// The intrinsic radius is tabulated in the variable v = sqrt(log(1 + s)).
// With u = expm1(v^2) the integrand a(u)^{-1/2} du becomes
// h(v) = 2 v (1 + u) / sqrt(a(u)), which is bounded near v = 0 for every
// supported family and needs no exponentials of s at large radii.
struct RadialCoefficient::State {
  Family family = Family::Constant;
  double param = 0.0;
  MonotoneCubic table;

  // Cumulative knots: knot_g[i] = rho at v = knot_v[i].
  std::vector<double> knot_v;
  std::vector<double> knot_g;
  bool intrinsic_available = true;
  std::string intrinsic_reason;
  // rho is bounded (int_0^inf a^{-1/2} < inf); its supremum is knot_g.back().
  bool bounded = false;

  double a(double r) const;
  double da(double r) const;
  double h(double v) const;
  void build_intrinsic_table();
};

}  // namespace escrate
