// Pilot runs that pin the Monte Carlo thresholds used by the acceptance
// tests. Deliberately independent of the library's noise source and Euler
// loop: std::mt19937_64 with std::normal_distribution, one engine per path.
//
// For each statistic the pilot estimates the exceedance probability p from
// n_pilot paths and pins the 99th percentile of the fraction observed on an
// acceptance ensemble of n_accept paths:
//   p + 2.326 sqrt(p (1 - p) (1 / n_accept + 1 / n_pilot)),
// which also absorbs the pilot's own sampling error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <vector>

namespace {

constexpr double kZ99 = 2.3263478740408408;

struct Pinned {
  double p;
  double threshold;
};

Pinned pin(std::size_t hits, std::size_t n_pilot, std::size_t n_accept) {
  const double p = static_cast<double>(hits) / static_cast<double>(n_pilot);
  const double var = p * (1.0 - p) * (1.0 / n_accept + 1.0 / n_pilot);
  return {p, p + kZ99 * std::sqrt(var)};
}

// Radial process of 3-d Brownian motion with generator d^2 + (2/r) d,
// reflected at `floor`; counts paths with x_t > sqrt(C t log(C t)) for some
// grid t in [t0, T].
std::size_t envelope_hits(std::size_t n, std::uint64_t seed) {
  const double dt = 1e-2, T = 1e3, t0 = 10.0, C = 4.0, floor = 0.1, x0 = 1.0;
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  const auto k0 = static_cast<std::size_t>(std::llround(t0 / dt));
  std::vector<double> bound(steps + 1, 0.0);
  for (std::size_t k = k0; k <= steps; ++k) {
    const double ct = C * dt * static_cast<double>(k);
    bound[k] = std::sqrt(ct * std::log(ct));
  }
  const double noise = std::sqrt(2.0 * dt);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 gen(seed + i);
    std::normal_distribution<double> z;
    double x = x0;
    bool hit = false;
    for (std::size_t k = 1; k <= steps && !hit; ++k) {
      x = std::max(floor, x + 2.0 / x * dt + noise * z(gen));
      hit = k >= k0 && x > bound[k];
    }
    hits += hit;
  }
  return hits;
}

// Standard Brownian motion on the grid; counts paths with
// |B_t| > 1.5 sqrt(2 t log log t) for some grid t in [t0, T].
std::size_t lil_hits(std::size_t n, std::uint64_t seed) {
  const double dt = 0.1, T = 1e4, t0 = 10.0, eps = 0.5;
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  const auto k0 = static_cast<std::size_t>(std::llround(t0 / dt));
  std::vector<double> bound(steps + 1, 0.0);
  for (std::size_t k = k0; k <= steps; ++k) {
    const double t = dt * static_cast<double>(k);
    bound[k] = (1.0 + eps) * std::sqrt(2.0 * t * std::log(std::log(t)));
  }
  const double noise = std::sqrt(dt);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 gen(seed + i);
    std::normal_distribution<double> z;
    double x = 0.0;
    bool hit = false;
    for (std::size_t k = 1; k <= steps && !hit; ++k) {
      x += noise * z(gen);
      hit = k >= k0 && std::abs(x) > bound[k];
    }
    hits += hit;
  }
  return hits;
}

}  // namespace

int main() {
  constexpr std::size_t kPilot = 20000;
  constexpr std::size_t kAccept = 10000;
  const Pinned env = pin(envelope_hits(kPilot, 0x5eed0001), kPilot, kAccept);
  const Pinned lil = pin(lil_hits(kPilot, 0x5eed0002), kPilot, kAccept);
  std::printf("#pragma once\n\n");
  std::printf("// Written by tools/pilot.cpp (%zu pilot paths, std::mt19937_64 noise).\n",
              kPilot);
  std::printf("// 99th percentile of the exceedance fraction on %zu paths.\n\n", kAccept);
  std::printf("namespace escrate::pilot {\n\n");
  std::printf("// Radial 3-d Brownian motion, x0 = 1, floor 0.1, dt = 1e-2, window [10, 1e3],\n");
  std::printf("// envelope sqrt(C t log(C t)) at C = 4. Pilot estimate p = %.6f.\n", env.p);
  std::printf("inline constexpr double kEnvelopeC4Threshold = %.6f;\n\n", env.threshold);
  std::printf("// Standard Brownian motion, dt = 0.1, window [10, 1e4], eps = 0.5.\n");
  std::printf("// Pilot estimate p = %.6f.\n", lil.p);
  std::printf("inline constexpr double kLilEps05Threshold = %.6f;\n\n", lil.threshold);
  std::printf("}  // namespace escrate::pilot\n");
}
