#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "escrate/rate_solver.hpp"
#include "escrate/sde.hpp"

namespace escrate {

struct Estimate {
  double p = 0.0;
  double std_error = 0.0;
  std::size_t hits = 0;
  std::size_t n = 0;
};

/// Binomial proportion with its standard error sqrt(p(1-p)/n).
Estimate binomial_estimate(std::size_t hits, std::size_t n);

struct Provenance {
  double x0 = 0.0;
  double T = 0.0;
  double dt = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t master_seed = 0;
  double floor = 0.0;
  std::size_t floor_hits = 0;
};

struct EnvelopeReport {
  std::vector<double> c_grid;
  /// Share of paths with x_t > psi(C t) at some grid time t in [t0, T].
  std::vector<double> fractions;
  std::vector<std::size_t> exceed_counts;
  double t0 = 0.0;
  Provenance provenance;
};

/// Exceedance fractions on a stored ensemble. Requires t0 * min(C) and
/// T * max(C) inside the rate table (ExtrapolationError otherwise) and
/// t0 < T.
EnvelopeReport exceedance(const PathEnsemble& ensemble, const RateFunction& rate,
                          const std::vector<double>& c_grid, double t0);

/// Same statistic, simulating the ensemble on the fly without storing paths.
/// Identical to building the ensemble first with the same spec.
EnvelopeReport exceedance(const Sde1D& sde, const EnsembleSpec& spec, const RateFunction& rate,
                          const std::vector<double>& c_grid, double t0);

/// Checks theta_high(r) >= theta_low(r) on a log grid over [max(floor, 1e-6), R].
/// Throws DriftOrderViolated naming the first failing grid point.
void check_drift_order(const Sde1D& low, const Sde1D& high, double R);

struct ComparisonParams {
  double r0 = 1.0;
  double t = 1.0;
  double delta = 1.0;
  double R = 10.0;
  std::size_t n_paths = 1000;
  double dt = 1e-3;
  std::uint64_t master_seed = 0;
  /// VIOLATION when lhs > rhs + threshold * combined stderr.
  double violation_sigmas = 2.0;
};

struct ComparisonReport {
  ComparisonParams params;
  /// P(x_t < delta, t < tau_R) for the dominating-drift process.
  Estimate lhs;
  /// The same event for the dominated process, on an independent ensemble.
  Estimate rhs;
  double coupled_fraction = 0.0;
  bool violation = false;
  /// Master seeds of the two ensembles; the coupled run reuses lhs_seed.
  std::uint64_t lhs_seed = 0;
  std::uint64_t rhs_seed = 0;
  std::size_t floor_hits = 0;
};

ComparisonReport comparison_mc(const Sde1D& dominating, const Sde1D& dominated,
                               const ComparisonParams& params);

/// Fraction of shared-noise path pairs with x_low <= x_high at every grid
/// time. Requires equal constant diffusion, pointwise ordered drifts and,
/// when both Lipschitz bounds are given, dt <= 1 / max(L).
double coupled_dominance(const Sde1D& low, const Sde1D& high, double x0, double T, double dt,
                         std::size_t n_paths, std::uint64_t master_seed);

struct LilReport {
  std::vector<double> eps_grid;
  /// Share of paths with |x_t| > (1 + eps) sqrt(2 t log log t) somewhere in [t0, T].
  std::vector<double> fractions;
  std::vector<std::size_t> exceed_counts;
  double t0 = 0.0;
  Provenance provenance;
};

LilReport lil_statistic(const PathEnsemble& ensemble, double t0,
                        const std::vector<double>& eps_grid);
LilReport lil_statistic(const Sde1D& sde, const EnsembleSpec& spec, double t0,
                        const std::vector<double>& eps_grid);

}  // namespace escrate
