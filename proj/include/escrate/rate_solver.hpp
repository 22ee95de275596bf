#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "escrate/profiles.hpp"

namespace escrate {

/// Nominal lower endpoint of the volume integral.
inline constexpr double kNominalLowerLimit = 2.0;
/// Time constant produced by the dyadic crossing-time argument.
inline constexpr double kProofScaleConstant = 512.0;

struct SolverOptions {
  /// Relative tolerance per quadrature segment.
  double quadrature_tol = 1e-11;
  /// Relative bracket width at which inversion stops.
  double inversion_tol = 1e-11;
  /// Starting point of the lower-limit search in rate_table.
  double nominal_lower = kNominalLowerLimit;
};

/// t(R) = int_lower^R f for a positive integrand f, with its inverse.
///
/// The integral is accumulated over geometric segments [e_k, 2 e_k] (the
/// first segment starts at `lower`, or is [0, 1] when lower = 0), so long
/// ranges cost one adaptive quadrature per doubling. Inversion walks the
/// segments until the running sum passes the target and bisects inside the
/// final segment.
class MonotoneIntegral {
 public:
  MonotoneIntegral(RealFn integrand, double lower, SolverOptions opts = {});

  double lower() const { return lower_; }
  double value(double upper) const;
  /// Throws FiniteTotalIntegral when the integral visibly converges below t,
  /// OutOfRange when the answer exceeds 1e300.
  double inverse(double t) const;

 private:
  double segment(double a, double b) const;

  RealFn integrand_;
  double lower_;
  SolverOptions opts_;
};

/// Integrand r / (lambda(r) (V(r) + log log r)) of the volume integral.
/// Throws NonPositiveDenominator at the first nonpositive denominator.
double volume_integrand(const GrowthProfile& profile, double r);

/// Smallest point of the grid 2, 2.01, 2.02, ... (starting at `nominal`) at
/// which the denominator exceeds 1e-6.
double effective_lower_limit(const GrowthProfile& profile,
                             double nominal = kNominalLowerLimit);

double phi(const GrowthProfile& profile, double R, double r_lo,
           SolverOptions opts = {});
double psi(const GrowthProfile& profile, double t, double r_lo,
           SolverOptions opts = {});

/// Monotone sample table t -> psi(scale * t).
class RateFunction {
 public:
  enum class Kind { Table, Zero, Infinite };

  RateFunction(std::vector<double> t, std::vector<double> psi,
               double lower_limit, double scale, std::string shift_note);
  static RateFunction zero();
  static RateFunction infinite();

  /// Monotone interpolation between samples; ExtrapolationError outside
  /// [first sample, last sample].
  double operator()(double t) const;

  Kind kind() const { return kind_; }
  const std::vector<double>& times() const { return t_; }
  const std::vector<double>& values() const { return psi_; }
  double lower_limit() const { return lower_limit_; }
  double scale() const { return scale_; }
  const std::string& shift_note() const { return shift_note_; }
  double t_min() const;
  double t_max() const;

 private:
  explicit RateFunction(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::Table;
  std::vector<double> t_;
  std::vector<double> psi_;
  MonotoneCubic interp_;
  double lower_limit_ = kNominalLowerLimit;
  double scale_ = 1.0;
  std::string shift_note_;
};

/// Table of an arbitrary increasing closed-form rate on the grid (scale 1).
RateFunction sampled_rate(const RealFn& psi, std::vector<double> t_grid,
                          std::string note = {});

/// Samples psi(scale * t) on the grid. The lower limit is the profile's
/// effective lower limit from opts.nominal_lower; shift_note records when
/// the two differ.
RateFunction rate_table(const GrowthProfile& profile,
                        const std::vector<double>& t_grid, double scale,
                        SolverOptions opts = {});

/// Converts an intrinsic-radius rate into a Euclidean one via rho^{-1}.
RateFunction euclidean_rate(const RateFunction& rate,
                            const RadialCoefficient& coeff);

/// Rate g(t) defined by t = int_lower^g 1/b(x) dx for a positive drift bound.
double drift_rate(const RealFn& drift_bound, double lower, double t,
                  SolverOptions opts = {});

enum class Verdict { Conservative, NonConservative, Inconclusive };
enum class Leaning { None, Conservative, NonConservative };

struct ConservativenessReport {
  Verdict verdict = Verdict::Inconclusive;
  Leaning leaning = Leaning::None;
  /// Volume-integral increments over dyadic shells (heuristic route only).
  std::vector<double> increments;
  std::string basis;
};

std::string_view verdict_name(Verdict v);
std::string_view leaning_name(Leaning l);

/// Symbolic for the parametric families; Tabulated coefficients fall back to
/// the heuristic on the unit-energy profile of dimension n.
ConservativenessReport conservativeness(const RadialCoefficient& coeff, int n = 2);
ConservativenessReport conservativeness(const CatalogueCase& c);
/// Numeric heuristic; always Inconclusive with a leaning.
ConservativenessReport conservativeness(const GrowthProfile& profile,
                                        int levels = 64);

struct DyadicLevel {
  int n = 0;
  double big_r = 0.0;     ///< R_n = 2^n c
  double shell = 0.0;     ///< r_n = R_n - R_{n-1}
  double step = 0.0;      ///< t_n
  double cumulative = 0.0;  ///< T_n
  double log_bound = 0.0;
  double bound = 0.0;     ///< crossing-probability bound for level n
  double partial_sum = 0.0;
  /// (log R_n)^{-2}: the Borel-Cantelli summand exp(-2 h(R_n)), h = log log.
  double summand = 0.0;
  /// phi from 2c to 2^{n+1} c.
  double phi_next = 0.0;
  /// T_n - phi_next / 256; nonnegative up to quadrature error.
  double check = 0.0;
};

struct DyadicScheme {
  double c = 0.0;
  int levels = 0;
  double mu_b1 = 0.0;
  std::vector<DyadicLevel> rows;
  double total() const { return rows.empty() ? 0.0 : rows.back().partial_sum; }
};

/// mu_b1 <= 0 selects the default exp(V(2c)).
DyadicScheme dyadic_scheme(const GrowthProfile& profile, double c, int levels,
                           double mu_b1 = 0.0, SolverOptions opts = {});

}  // namespace escrate
