#include "escrate/sde.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "escrate/parallel.hpp"

namespace escrate {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void check_time_grid(double x0, double T, double dt, double floor) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::DomainError, "dt must be positive");
  if (!(T >= dt) || !std::isfinite(T)) fail(ErrorKind::DomainError, "horizon T must be >= dt");
  if (!(x0 >= floor) || !std::isfinite(x0)) {
    fail(ErrorKind::DomainError, "x0 = " + fmt(x0) + " below the floor " + fmt(floor));
  }
}

// Beyond s = e^30 the coefficient itself may overflow.
constexpr double kFarOut = 30.0;

// Drift at Euclidean radius s = e^L - 1, written in L so that large radii
// do not overflow the coefficient. Uses 1/s = 1/expm1(L).
double drift_far_out(const RadialCoefficient& coeff, int n, double L) {
  const double p = coeff.parameter();
  const double m = static_cast<double>(n - 1);
  const double inv_s = 1.0 / std::expm1(L);
  switch (coeff.family()) {
    case RadialCoefficient::Family::Constant:
      return m * inv_s;
    case RadialCoefficient::Family::Power:
      // sqrt(a) = e^{pL/2}, a' / (2 sqrt(a)) = (p/2) e^{(p/2 - 1) L}.
      return std::exp((0.5 * p - 1.0) * L) * (m / -std::expm1(-L) - 0.5 * p);
    case RadialCoefficient::Family::SquaredLog: {
      // sqrt(a) = (1+s) L^{p/2}, a' / (2 sqrt(a)) = L^{p/2} + (p/2) L^{p/2-1}.
      const double root = std::pow(L, 0.5 * p);
      return m * root * (1.0 + inv_s) - root - 0.5 * p * root / L;
    }
    case RadialCoefficient::Family::Tabulated:
      break;
  }
  fail(ErrorKind::OutOfRange, "tabulated coefficient evaluated beyond its grid");
}

}  // namespace

std::size_t step_count(double T, double dt) {
  return static_cast<std::size_t>(std::floor(T / dt * (1.0 + 1e-12)));
}

Path euler_path(const Sde1D& sde, double x0, double T, double dt, std::uint64_t seed) {
  if (!sde.drift) fail(ErrorKind::DomainError, "SDE needs a drift");
  check_time_grid(x0, T, dt, sde.floor);
  const std::size_t steps = step_count(T, dt);
  Path path;
  path.values.resize(steps + 1);
  run_path(sde, x0, steps, dt, seed, [&](std::size_t k, double x, bool reflected) {
    path.values[k] = x;
    if (reflected) ++path.floor_hits;
  });
  return path;
}

std::size_t PathEnsemble::total_floor_hits() const {
  return std::accumulate(floor_hits.begin(), floor_hits.end(), std::size_t{0});
}

void validate(const EnsembleSpec& spec, const Sde1D& sde) {
  if (!sde.drift) fail(ErrorKind::DomainError, "SDE needs a drift");
  check_time_grid(spec.x0, spec.T, spec.dt, sde.floor);
  if (spec.n_paths < 1) fail(ErrorKind::DomainError, "ensemble needs at least one path");
}

PathEnsemble ensemble(const Sde1D& sde, const EnsembleSpec& spec) {
  validate(spec, sde);
  PathEnsemble out;
  out.spec = spec;
  out.floor = sde.floor;
  out.steps = step_count(spec.T, spec.dt);
  const std::size_t width = out.grid_size();
  if (spec.store_paths) out.values.resize(spec.n_paths * width);
  out.finals.resize(spec.n_paths);
  out.first_exit.resize(spec.n_paths);
  out.floor_hits.resize(spec.n_paths);

  parallel_for(spec.n_paths, [&](std::size_t i) {
    double* row = spec.store_paths ? out.values.data() + i * width : nullptr;
    std::optional<double> exit;
    std::size_t hits = 0;
    double last = spec.x0;
    try {
      run_path(sde, spec.x0, out.steps, spec.dt, path_key(spec.master_seed, i),
               [&](std::size_t k, double x, bool reflected) {
                 if (row) row[k] = x;
                 if (reflected) ++hits;
                 if (!exit && x > spec.barrier) exit = spec.dt * static_cast<double>(k);
                 last = x;
               });
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonFiniteState) throw;
      fail(ErrorKind::NonFiniteState, "path " + std::to_string(i) + ": " + e.what());
    }
    out.finals[i] = last;
    out.first_exit[i] = exit;
    out.floor_hits[i] = hits;
  });
  return out;
}

RealFn radial_drift(const ManifoldModel& model, double floor) {
  return [model, floor](double r) { return mean_curvature(model, r, floor); };
}

RealFn radial_drift(const RadialCoefficient& coeff, int n, double floor) {
  if (n < 1) fail(ErrorKind::DomainError, "dimension must be >= 1");
  // The guard applies to the intrinsic radius the process lives in.
  return [coeff, n, floor](double rho) {
    if (!(rho >= floor)) {
      fail(ErrorKind::SingularOrigin, "radius " + fmt(rho) + " below floor " + fmt(floor));
    }
    const double L = rho_tilde_inverse_log1p(coeff, rho);
    if (L > kFarOut && coeff.family() != RadialCoefficient::Family::Tabulated) {
      return drift_far_out(coeff, n, L);
    }
    const double s = rho_tilde_inverse(coeff, rho);
    return drift_L_rho(coeff, n, s, std::min(floor, s));
  };
}

RealFn radial_drift(const HyperbolicBound& bound, double floor) {
  if (bound.n < 2 || !(bound.curvature > 0.0)) {
    fail(ErrorKind::DomainError, "hyperbolic bound needs n >= 2 and K > 0");
  }
  const double k = std::sqrt(bound.curvature);
  const double factor = (bound.n - 1) * k;
  return [k, factor, floor](double r) {
    if (!(r >= floor)) {
      fail(ErrorKind::SingularOrigin, "radius " + fmt(r) + " below floor " + fmt(floor));
    }
    return factor * (1.0 + 1.0 / (k * r));
  };
}

NdPath euclidean_diffusion_nd(const RadialCoefficient& coeff, int n,
                              const std::vector<double>& x0, double T, double dt,
                              std::uint64_t seed, double floor) {
  if (n < 2 || x0.size() != static_cast<std::size_t>(n)) {
    fail(ErrorKind::DomainError, "need n >= 2 and a starting point with n coordinates");
  }
  auto norm = [](const std::vector<double>& x) {
    double sq = 0.0;
    for (double c : x) sq += c * c;
    return std::sqrt(sq);
  };
  if (!(norm(x0) >= floor)) fail(ErrorKind::DomainError, "|x0| below floor");
  if (!(dt > 0.0) || !(T >= dt)) fail(ErrorKind::DomainError, "need dt > 0 and T >= dt");

  const std::size_t steps = step_count(T, dt);
  const double root_dt = std::sqrt(dt);
  NdPath out;
  out.euclidean_radius.resize(steps + 1);
  out.intrinsic_radius.resize(steps + 1);
  std::vector<rng::NormalStream> noise;
  for (int i = 0; i < n; ++i) noise.emplace_back(seed, static_cast<std::uint32_t>(i));
  std::vector<double> x = x0;
  double radius = norm(x);
  out.euclidean_radius[0] = radius;
  out.intrinsic_radius[0] = rho_tilde(coeff, radius);
  for (std::size_t k = 0; k < steps; ++k) {
    const double a = coeff.value(radius);
    const double radial_push = coeff.derivative(radius) / radius * dt;
    const double amplitude = std::sqrt(2.0 * a) * root_dt;
    for (int i = 0; i < n; ++i) {
      x[i] += radial_push * x[i] +
              amplitude * noise[i](k);
    }
    radius = norm(x);
    if (!std::isfinite(radius)) {
      fail(ErrorKind::NonFiniteState, "non-finite state at step " + std::to_string(k + 1));
    }
    if (radius < floor) {
      const double scale = radius > 0.0 ? floor / radius : 0.0;
      if (scale > 0.0) {
        for (double& c : x) c *= scale;
      } else {
        x.assign(x.size(), 0.0);
        x[0] = floor;
      }
      radius = floor;
      ++out.floor_hits;
    }
    out.euclidean_radius[k + 1] = radius;
    out.intrinsic_radius[k + 1] = rho_tilde(coeff, radius);
  }
  return out;
}

}  // namespace escrate
