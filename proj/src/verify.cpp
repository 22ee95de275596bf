#include "escrate/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "escrate/parallel.hpp"

namespace escrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

Provenance provenance_of(const EnsembleSpec& spec, double floor, std::size_t floor_hits) {
  return {spec.x0, spec.T, spec.dt, spec.n_paths, spec.master_seed, floor, floor_hits};
}

std::size_t first_index_at_or_after(double t0, double dt) {
  return static_cast<std::size_t>(std::ceil(t0 / dt * (1.0 - 1e-12)));
}

// Boundary values b[j][k - k0] for each threshold j on the window k >= k0.
// Paths flag threshold j when x_k > b[j][k - k0] for some k.
struct Window {
  std::size_t k0 = 0;
  std::vector<std::vector<double>> bounds;
};

// Bit j of the result is set when the path crosses bound j.
template <class Transform>
std::uint64_t crossing_mask(const Window& w, std::size_t k, double x, Transform&& value,
                            std::uint64_t mask) {
  if (k < w.k0) return mask;
  const double v = value(x);
  for (std::size_t j = 0; j < w.bounds.size(); ++j) {
    if (!(mask >> j & 1u) && v > w.bounds[j][k - w.k0]) mask |= std::uint64_t{1} << j;
  }
  return mask;
}

std::vector<std::size_t> count_bits(const std::vector<std::uint64_t>& masks, std::size_t m) {
  std::vector<std::size_t> counts(m, 0);
  for (std::uint64_t mask : masks) {
    for (std::size_t j = 0; j < m; ++j) counts[j] += mask >> j & 1u;
  }
  return counts;
}

Window envelope_window(const RateFunction& rate, const std::vector<double>& c_grid, double t0,
                       double dt, std::size_t steps) {
  if (c_grid.empty() || c_grid.size() > 64) {
    fail(ErrorKind::DomainError, "C grid needs between 1 and 64 values");
  }
  for (double c : c_grid) {
    if (!(c > 0.0)) fail(ErrorKind::DomainError, "scale constants must be positive");
  }
  const double horizon = dt * static_cast<double>(steps);
  if (!(t0 >= 0.0) || !(t0 < horizon)) {
    fail(ErrorKind::DomainError, "burn-in t0 must lie in [0, T)");
  }
  Window w;
  w.k0 = first_index_at_or_after(t0, dt);
  const auto [c_lo, c_hi] = std::minmax_element(c_grid.begin(), c_grid.end());
  if (rate.kind() == RateFunction::Kind::Table) {
    const double first = *c_lo * w.k0 * dt;
    const double last = *c_hi * horizon;
    if (first < rate.t_min() || last > rate.t_max()) {
      fail(ErrorKind::ExtrapolationError,
           "envelope needs psi on [" + fmt(first) + ", " + fmt(last) + "], table covers [" +
               fmt(rate.t_min()) + ", " + fmt(rate.t_max()) + "]");
    }
  }
  for (double c : c_grid) {
    std::vector<double> b;
    b.reserve(steps + 1 - w.k0);
    for (std::size_t k = w.k0; k <= steps; ++k) b.push_back(rate(c * dt * static_cast<double>(k)));
    w.bounds.push_back(std::move(b));
  }
  return w;
}

Window lil_window(const std::vector<double>& eps_grid, double t0, double dt, std::size_t steps) {
  if (!(t0 > std::exp(1.0))) fail(ErrorKind::DomainError, "LIL window needs t0 > e");
  if (eps_grid.empty() || eps_grid.size() > 64) {
    fail(ErrorKind::DomainError, "epsilon grid needs between 1 and 64 values");
  }
  if (!(t0 < dt * static_cast<double>(steps))) fail(ErrorKind::DomainError, "t0 must be < T");
  Window w;
  w.k0 = first_index_at_or_after(t0, dt);
  for (double eps : eps_grid) {
    if (!(eps >= 0.0)) fail(ErrorKind::DomainError, "epsilon must be >= 0");
    std::vector<double> b;
    b.reserve(steps + 1 - w.k0);
    for (std::size_t k = w.k0; k <= steps; ++k) {
      const double t = dt * static_cast<double>(k);
      b.push_back(std::isinf(eps) ? kInf : (1.0 + eps) * std::sqrt(2.0 * t * std::log(std::log(t))));
    }
    w.bounds.push_back(std::move(b));
  }
  return w;
}

std::vector<double> to_fractions(const std::vector<std::size_t>& counts, std::size_t n) {
  std::vector<double> out;
  out.reserve(counts.size());
  for (std::size_t c : counts) out.push_back(static_cast<double>(c) / static_cast<double>(n));
  return out;
}

template <class Transform>
std::vector<std::uint64_t> stored_masks(const PathEnsemble& e, const Window& w,
                                        Transform&& value) {
  if (e.values.empty()) fail(ErrorKind::DomainError, "ensemble was simulated without stored paths");
  std::vector<std::uint64_t> masks(e.spec.n_paths, 0);
  for (std::size_t i = 0; i < e.spec.n_paths; ++i) {
    const auto path = e.path(i);
    std::uint64_t mask = 0;
    for (std::size_t k = w.k0; k < path.size(); ++k) mask = crossing_mask(w, k, path[k], value, mask);
    masks[i] = mask;
  }
  return masks;
}

template <class Transform>
std::vector<std::uint64_t> streamed_masks(const Sde1D& sde, const EnsembleSpec& spec,
                                          std::size_t steps, const Window& w, Transform&& value,
                                          std::size_t& floor_hits) {
  std::vector<std::uint64_t> masks(spec.n_paths, 0);
  std::vector<std::size_t> hits(spec.n_paths, 0);
  parallel_for(spec.n_paths, [&](std::size_t i) {
    std::uint64_t mask = 0;
    std::size_t h = 0;
    run_path(sde, spec.x0, steps, spec.dt, path_key(spec.master_seed, i),
             [&](std::size_t k, double x, bool reflected) {
               if (reflected) ++h;
               mask = crossing_mask(w, k, x, value, mask);
             });
    masks[i] = mask;
    hits[i] = h;
  });
  floor_hits = 0;
  for (std::size_t h : hits) floor_hits += h;
  return masks;
}

double identity(double x) { return x; }
double magnitude(double x) { return std::abs(x); }

}  // namespace

Estimate binomial_estimate(std::size_t hits, std::size_t n) {
  Estimate e;
  e.hits = hits;
  e.n = n;
  if (n == 0) return e;
  e.p = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(e.p * (1.0 - e.p) / static_cast<double>(n));
  return e;
}

EnvelopeReport exceedance(const PathEnsemble& ensemble, const RateFunction& rate,
                          const std::vector<double>& c_grid, double t0) {
  const Window w = envelope_window(rate, c_grid, t0, ensemble.spec.dt, ensemble.steps);
  const auto masks = stored_masks(ensemble, w, identity);
  EnvelopeReport r;
  r.c_grid = c_grid;
  r.exceed_counts = count_bits(masks, c_grid.size());
  r.fractions = to_fractions(r.exceed_counts, ensemble.spec.n_paths);
  r.t0 = t0;
  r.provenance = provenance_of(ensemble.spec, ensemble.floor, ensemble.total_floor_hits());
  return r;
}

EnvelopeReport exceedance(const Sde1D& sde, const EnsembleSpec& spec, const RateFunction& rate,
                          const std::vector<double>& c_grid, double t0) {
  validate(spec, sde);
  const std::size_t steps = step_count(spec.T, spec.dt);
  const Window w = envelope_window(rate, c_grid, t0, spec.dt, steps);
  std::size_t floor_hits = 0;
  const auto masks = streamed_masks(sde, spec, steps, w, identity, floor_hits);
  EnvelopeReport r;
  r.c_grid = c_grid;
  r.exceed_counts = count_bits(masks, c_grid.size());
  r.fractions = to_fractions(r.exceed_counts, spec.n_paths);
  r.t0 = t0;
  r.provenance = provenance_of(spec, sde.floor, floor_hits);
  return r;
}

void check_drift_order(const Sde1D& low, const Sde1D& high, double R) {
  const double lo = std::max({low.floor, high.floor, 1e-6});
  if (!(R > lo)) fail(ErrorKind::DomainError, "drift order check needs R above the floor");
  constexpr int kPoints = 400;
  const double ratio = std::log(R / lo) / (kPoints - 1);
  for (int i = 0; i < kPoints; ++i) {
    const double r = i == kPoints - 1 ? R : lo * std::exp(ratio * i);
    const double a = low.drift(r);
    const double b = high.drift(r);
    if (b < a - 1e-12 * std::max(std::abs(a), 1.0)) {
      fail(ErrorKind::DriftOrderViolated,
           "dominating drift " + fmt(b) + " below dominated drift " + fmt(a) + " at r = " +
               fmt(r));
    }
  }
}

namespace {

void check_shared_noise(const Sde1D& low, const Sde1D& high, double dt) {
  if (low.diffusion || high.diffusion || low.sigma != high.sigma) {
    fail(ErrorKind::DomainError, "coupling needs the same constant diffusion coefficient");
  }
  if (low.drift_lipschitz && high.drift_lipschitz) {
    const double lip = std::max(*low.drift_lipschitz, *high.drift_lipschitz);
    if (dt * lip > 1.0) {
      fail(ErrorKind::DomainError,
           "dt = " + fmt(dt) + " breaks the monotone-step condition dt * L <= 1 (L = " +
               fmt(lip) + ")");
    }
  }
}

}  // namespace

ComparisonReport comparison_mc(const Sde1D& dominating, const Sde1D& dominated,
                               const ComparisonParams& p) {
  if (!(p.delta > 0.0) || !(p.delta < p.R)) fail(ErrorKind::DomainError, "need 0 < delta < R");
  if (!(p.r0 < p.R)) fail(ErrorKind::DomainError, "need r0 < R");
  if (p.n_paths < 1) fail(ErrorKind::DomainError, "need at least one path");
  if (!(p.dt > 0.0) || !(p.t >= p.dt)) fail(ErrorKind::DomainError, "need dt > 0 and t >= dt");
  if (!(p.r0 >= std::max(dominating.floor, dominated.floor))) {
    fail(ErrorKind::DomainError, "r0 below the floor");
  }
  check_drift_order(dominated, dominating, p.R);

  ComparisonReport report;
  report.params = p;
  report.lhs_seed = rng::derive_key(p.master_seed, 0);
  report.rhs_seed = rng::derive_key(p.master_seed, 1);
  const std::size_t steps = step_count(p.t, p.dt);
  const bool coupled = !dominating.diffusion && !dominated.diffusion &&
                       dominating.sigma == dominated.sigma;

  // Per path: bit 0 = lhs event, bit 1 = ordered, bit 2 = rhs event.
  // The lhs chains and the independent rhs chain advance in one loop so
  // their drift evaluations overlap.
  std::vector<unsigned> flags(p.n_paths, 0);
  std::vector<std::size_t> hits(p.n_paths, 0);
  const double root_dt = std::sqrt(p.dt);
  parallel_for(p.n_paths, [&](std::size_t i) {
    rng::NormalStream lhs_noise(path_key(report.lhs_seed, i));
    rng::NormalStream rhs_noise(path_key(report.rhs_seed, i));
    double high = p.r0;  // dominating, lhs noise
    double low = p.r0;   // dominated, lhs noise
    double rhs = p.r0;   // dominated, rhs noise
    bool high_exit = false, rhs_exit = false, ordered = true;
    std::size_t h = 0;
    for (std::size_t k = 0; k < steps; ++k) {
      const double za = lhs_noise(k);
      const double zb = rhs_noise(k);
      high += dominating.drift(high) * p.dt + dominating.diffusion_at(high) * root_dt * za;
      rhs += dominated.drift(rhs) * p.dt + dominated.diffusion_at(rhs) * root_dt * zb;
      if (coupled) low += dominated.drift(low) * p.dt + dominated.sigma * root_dt * za;
      if (!std::isfinite(high) || !std::isfinite(rhs) || !std::isfinite(low)) {
        fail(ErrorKind::NonFiniteState,
             "non-finite state at step " + std::to_string(k + 1) + " of path " +
                 std::to_string(i));
      }
      if (high < dominating.floor) {
        high = dominating.floor;
        ++h;
      }
      if (rhs < dominated.floor) {
        rhs = dominated.floor;
        ++h;
      }
      low = std::max(low, dominated.floor);
      high_exit |= high > p.R;
      rhs_exit |= rhs > p.R;
      ordered &= low <= high;
    }
    unsigned f = 0;
    if (!high_exit && high < p.delta) f |= 1u;
    if (coupled && ordered) f |= 2u;
    if (!rhs_exit && rhs < p.delta) f |= 4u;
    flags[i] = f;
    hits[i] = h;
  });

  std::size_t lhs_hits = 0, rhs_hits = 0, ordered = 0;
  for (std::size_t i = 0; i < p.n_paths; ++i) {
    lhs_hits += flags[i] & 1u;
    ordered += flags[i] >> 1 & 1u;
    rhs_hits += flags[i] >> 2 & 1u;
    report.floor_hits += hits[i];
  }
  report.lhs = binomial_estimate(lhs_hits, p.n_paths);
  report.rhs = binomial_estimate(rhs_hits, p.n_paths);
  report.coupled_fraction =
      coupled ? static_cast<double>(ordered) / static_cast<double>(p.n_paths)
              : std::numeric_limits<double>::quiet_NaN();
  const double combined =
      std::sqrt(report.lhs.std_error * report.lhs.std_error +
                report.rhs.std_error * report.rhs.std_error);
  report.violation = report.lhs.p > report.rhs.p + p.violation_sigmas * combined;
  return report;
}

double coupled_dominance(const Sde1D& low, const Sde1D& high, double x0, double T, double dt,
                         std::size_t n_paths, std::uint64_t master_seed) {
  check_shared_noise(low, high, dt);
  if (n_paths < 1) fail(ErrorKind::DomainError, "need at least one path");
  if (!(dt > 0.0) || !(T >= dt)) fail(ErrorKind::DomainError, "need dt > 0 and T >= dt");
  if (!(x0 >= std::max(low.floor, high.floor))) fail(ErrorKind::DomainError, "x0 below the floor");
  const std::size_t steps = step_count(T, dt);
  std::vector<unsigned char> ordered(n_paths, 1);
  parallel_for(n_paths, [&](std::size_t i) {
    bool ok = true;
    run_coupled(low, high, x0, steps, dt, path_key(master_seed, i),
                [&](std::size_t, double a, double b) {
                  if (a > b) ok = false;
                });
    ordered[i] = ok ? 1 : 0;
  });
  std::size_t count = 0;
  for (unsigned char o : ordered) count += o;
  return static_cast<double>(count) / static_cast<double>(n_paths);
}

LilReport lil_statistic(const PathEnsemble& ensemble, double t0,
                        const std::vector<double>& eps_grid) {
  const Window w = lil_window(eps_grid, t0, ensemble.spec.dt, ensemble.steps);
  const auto masks = stored_masks(ensemble, w, magnitude);
  LilReport r;
  r.eps_grid = eps_grid;
  r.exceed_counts = count_bits(masks, eps_grid.size());
  r.fractions = to_fractions(r.exceed_counts, ensemble.spec.n_paths);
  r.t0 = t0;
  r.provenance = provenance_of(ensemble.spec, ensemble.floor, ensemble.total_floor_hits());
  return r;
}

LilReport lil_statistic(const Sde1D& sde, const EnsembleSpec& spec, double t0,
                        const std::vector<double>& eps_grid) {
  validate(spec, sde);
  const std::size_t steps = step_count(spec.T, spec.dt);
  const Window w = lil_window(eps_grid, t0, spec.dt, steps);
  std::size_t floor_hits = 0;
  const auto masks = streamed_masks(sde, spec, steps, w, magnitude, floor_hits);
  LilReport r;
  r.eps_grid = eps_grid;
  r.exceed_counts = count_bits(masks, eps_grid.size());
  r.fractions = to_fractions(r.exceed_counts, spec.n_paths);
  r.t0 = t0;
  r.provenance = provenance_of(spec, sde.floor, floor_hits);
  return r;
}

}  // namespace escrate
