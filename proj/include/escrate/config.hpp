#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "escrate/profiles.hpp"
#include "escrate/rate_solver.hpp"
#include "escrate/sde.hpp"

namespace escrate {

/// Which object the [model] section describes.
///   constant, power, squared_log, tabulated: radial coefficient a(r)
///   euclidean, hyperbolic: model manifold (radial drift = mean curvature)
///   hyperbolic_bound: the majorant (n-1) sqrt(K) (1 + 1/(sqrt(K) r))
///   linear: theta(x) = drift_constant + drift_inverse / x
struct ModelConfig {
  std::string family = "constant";
  double alpha = 0.0;
  double beta = 0.0;
  int n = 2;
  EnergyMode mode = EnergyMode::UnitEnergy;
  double curvature = 1.0;
  std::vector<double> radii;
  std::vector<double> values;
  double drift_constant = 0.0;
  double drift_inverse = 0.0;
};

struct SolverConfig {
  double r_lo = kNominalLowerLimit;
  double tolerance = 1e-11;
  double scale_c = 1.0;
  std::vector<double> t_grid;
};

struct SimulationConfig {
  double x0 = 1.0;
  double T = 1.0;
  double dt = 1e-3;
  std::size_t n_paths = 1;
  std::uint64_t master_seed = 0;
  double floor = kDefaultOriginFloor;
  double barrier = std::numeric_limits<double>::infinity();
  double sigma = std::sqrt(2.0);
  std::optional<double> lipschitz;
  /// "long" (one row per step) or "summary" (one row per path).
  std::string output = "long";
};

struct VerifyConfig {
  std::vector<double> c_grid{1.0, 2.0, 4.0};
  std::vector<double> eps_grid{0.0, 0.25, 0.5, 1.0};
  double t0 = 10.0;
  double delta = 1.0;
  double R = 10.0;
  /// Envelope rate: "solver" (table from model + solver), "zero" or "infinite".
  std::string rate = "solver";
  /// Envelope passes when the fraction at the largest C is at most this.
  double max_fraction = 0.05;
  /// Comparison partner of the model drift: "same", "hyperbolic_bound" or
  /// "linear" (dominating_constant + dominating_inverse / x).
  std::string dominating = "same";
  double dominating_constant = 0.0;
  double dominating_inverse = 0.0;
  double violation_sigmas = 2.0;
  double dyadic_c = 4.0;
  int levels = 30;
};

struct RunConfig {
  ModelConfig model;
  SolverConfig solver;
  SimulationConfig simulation;
  VerifyConfig verify;
  bool has_model = false;
  bool has_solver = false;
  bool has_simulation = false;
  bool has_verify = false;
};

/// Parses INI-style text: [section] headers, key = value lines, '#' or ';'
/// comments. Unknown sections or keys, malformed numbers and out-of-range
/// values throw ConfigError naming the line.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Numbers list "1, 10, 100" or geometric spec "geom(start, stop, count)".
std::vector<double> parse_grid(const std::string& text);

RadialCoefficient model_coefficient(const ModelConfig& m);
bool model_is_coefficient(const ModelConfig& m);
GrowthProfile model_profile(const ModelConfig& m);
RealFn model_drift(const ModelConfig& m, double floor);
Sde1D model_sde(const RunConfig& c);

}  // namespace escrate
