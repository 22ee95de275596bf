#pragma once

// Written by tools/pilot.cpp (20000 pilot paths, std::mt19937_64 noise).
// 99th percentile of the exceedance fraction on 10000 paths.

namespace escrate::pilot {

// Radial 3-d Brownian motion, x0 = 1, floor 0.1, dt = 1e-2, window [10, 1e3],
// envelope sqrt(C t log(C t)) at C = 4. Pilot estimate p = 0.244200.
inline constexpr double kEnvelopeC4Threshold = 0.256440;

// Standard Brownian motion, dt = 0.1, window [10, 1e4], eps = 0.5.
// Pilot estimate p = 0.226850.
inline constexpr double kLilEps05Threshold = 0.238782;

}  // namespace escrate::pilot
