#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "escrate/errors.hpp"
#include "escrate/profiles.hpp"
#include "escrate/random.hpp"

namespace escrate {

/// dx = theta(x) dt + sigma(x) dw, reflected at `floor`.
struct Sde1D {
  RealFn drift;
  /// Constant diffusion coefficient, used unless `diffusion` is set.
  double sigma = std::sqrt(2.0);
  RealFn diffusion;
  /// Reflection level; -inf simulates on the whole line.
  double floor = kDefaultOriginFloor;
  /// Caller's promise |theta(x) - theta(y)| <= L |x - y| on [floor, inf).
  std::optional<double> drift_lipschitz;

  double diffusion_at(double x) const { return diffusion ? diffusion(x) : sigma; }
};

/// Number of Euler steps for horizon T, tolerant to T/dt rounding.
std::size_t step_count(double T, double dt);

/// One Euler-Maruyama run with noise xi_k = N(key, k). Calls
/// on_step(k, x_k, reflected) for k = 0..steps.
template <class OnStep>
void run_path(const Sde1D& sde, double x0, std::size_t steps, double dt, std::uint64_t key,
              OnStep&& on_step) {
  const double root_dt = std::sqrt(dt);
  rng::NormalStream normal(key);
  double x = x0;
  on_step(std::size_t{0}, x, false);
  for (std::size_t k = 0; k < steps; ++k) {
    const double noise = normal(k);
    double next = x + sde.drift(x) * dt + sde.diffusion_at(x) * root_dt * noise;
    if (!std::isfinite(next)) {
      fail(ErrorKind::NonFiniteState, "non-finite state at step " + std::to_string(k + 1));
    }
    const bool reflected = next < sde.floor;
    if (reflected) next = sde.floor;
    x = next;
    on_step(k + 1, x, reflected);
  }
}

/// Two chains driven by the same noise sequence. Calls on_step(k, a_k, b_k).
template <class OnStep>
void run_coupled(const Sde1D& a, const Sde1D& b, double x0, std::size_t steps, double dt,
                 std::uint64_t key, OnStep&& on_step) {
  const double root_dt = std::sqrt(dt);
  rng::NormalStream normal(key);
  double xa = x0;
  double xb = x0;
  on_step(std::size_t{0}, xa, xb);
  for (std::size_t k = 0; k < steps; ++k) {
    const double noise = normal(k);
    xa += a.drift(xa) * dt + a.diffusion_at(xa) * root_dt * noise;
    xb += b.drift(xb) * dt + b.diffusion_at(xb) * root_dt * noise;
    if (!std::isfinite(xa) || !std::isfinite(xb)) {
      fail(ErrorKind::NonFiniteState, "non-finite state at step " + std::to_string(k + 1));
    }
    xa = std::max(xa, a.floor);
    xb = std::max(xb, b.floor);
    on_step(k + 1, xa, xb);
  }
}

struct Path {
  std::vector<double> values;
  std::size_t floor_hits = 0;
};

/// Path of length floor(T/dt) + 1 keyed directly by `seed`.
Path euler_path(const Sde1D& sde, double x0, double T, double dt, std::uint64_t seed);

/// Noise key of path `index` under `master_seed`.
inline std::uint64_t path_key(std::uint64_t master_seed, std::uint64_t index) {
  return rng::derive_key(master_seed, index);
}

struct EnsembleSpec {
  double x0 = 1.0;
  double T = 1.0;
  double dt = 1e-3;
  std::size_t n_paths = 1;
  std::uint64_t master_seed = 0;
  double barrier = std::numeric_limits<double>::infinity();
  /// Keep the full value grid; otherwise only finals and exits are stored.
  bool store_paths = true;
};

struct PathEnsemble {
  EnsembleSpec spec;
  double floor = kDefaultOriginFloor;
  std::size_t steps = 0;
  /// Row-major n_paths x (steps + 1); empty unless spec.store_paths.
  std::vector<double> values;
  std::vector<double> finals;
  /// First grid time with value > barrier.
  std::vector<std::optional<double>> first_exit;
  std::vector<std::size_t> floor_hits;

  std::size_t grid_size() const { return steps + 1; }
  double time(std::size_t k) const { return spec.dt * static_cast<double>(k); }
  std::span<const double> path(std::size_t i) const {
    return {values.data() + i * grid_size(), grid_size()};
  }
  std::size_t total_floor_hits() const;
};

void validate(const EnsembleSpec& spec, const Sde1D& sde);

PathEnsemble ensemble(const Sde1D& sde, const EnsembleSpec& spec);

/// Mean curvature of the model, m(r) = (n-1) xi'/xi.
RealFn radial_drift(const ManifoldModel& model, double floor = kDefaultOriginFloor);

/// rho -> drift_L_rho(coeff, n, rho^{-1}(rho)) in the intrinsic radius.
RealFn radial_drift(const RadialCoefficient& coeff, int n, double floor = kDefaultOriginFloor);

/// theta(r) = (n-1) sqrt(K) (1 + 1/(sqrt(K) r)), a majorant of
/// (n-1) sqrt(K) coth(sqrt(K) r).
struct HyperbolicBound {
  int n = 2;
  double curvature = 1.0;
};
RealFn radial_drift(const HyperbolicBound& bound, double floor = kDefaultOriginFloor);

struct NdPath {
  std::vector<double> euclidean_radius;
  std::vector<double> intrinsic_radius;
  std::size_t floor_hits = 0;
};

/// Euler scheme for dX_i = a'(|X|) X_i/|X| dt + sqrt(2 a(|X|)) dW_i. The
/// noise of coordinate i at step k is N(seed, k, lane i). When |X| drops
/// below `floor` the point is pushed radially back to the floor and counted.
NdPath euclidean_diffusion_nd(const RadialCoefficient& coeff, int n,
                              const std::vector<double>& x0, double T, double dt,
                              std::uint64_t seed, double floor = kDefaultOriginFloor);

}  // namespace escrate
