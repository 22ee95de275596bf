#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "escrate/monotone_interp.hpp"

namespace escrate {

/// Default guard for terms that carry a 1/r factor at the origin.
inline constexpr double kDefaultOriginFloor = 1e-6;

using RealFn = std::function<double(double)>;

/// Radial diffusion coefficient r -> a(r) with its derivative.
///
/// The parametric families correspond to a(x) = 1, a(x) = (1+|x|)^alpha and
/// a(x) = (1+|x|)^2 [log(1+|x|)]^beta. Tabulated coefficients are sampled on
/// a grid that starts at the origin and are interpolated with a
/// shape-preserving cubic.
///
/// Construction also tabulates the intrinsic radius
/// rho(s) = int_0^s a(u)^{-1/2} du, so that rho and its inverse are cheap to
/// evaluate afterwards. Instances are immutable and cheap to copy.
class RadialCoefficient {
 public:
  enum class Family { Constant, Power, SquaredLog, Tabulated };

  static RadialCoefficient constant();
  static RadialCoefficient power(double alpha);
  /// beta < 2 is required for the intrinsic radius to be finite at the origin.
  static RadialCoefficient squared_log(double beta);
  /// radii strictly increasing, starting at 0; values strictly positive.
  static RadialCoefficient tabulated(std::vector<double> radii,
                                     std::vector<double> values);

  Family family() const;
  /// alpha for Power, beta for SquaredLog, 0 otherwise.
  double parameter() const;
  std::string describe() const;

  double value(double r) const;
  double derivative(double r) const;
  /// Largest radius at which the coefficient can be evaluated.
  double domain_max() const;

  struct State;
  const State& state() const { return *state_; }

 private:
  explicit RadialCoefficient(std::shared_ptr<const State> state)
      : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

/// Intrinsic radius rho(s) = int_0^s a(u)^{-1/2} du.
double rho_tilde(const RadialCoefficient& coeff, double s);

/// Inverse of rho_tilde. Throws OutOfRange when r is not below the supremum
/// of rho (possible when the integral converges at infinity) or when the
/// result is not representable as a double.
double rho_tilde_inverse(const RadialCoefficient& coeff, double r);

/// log(1 + rho_tilde_inverse(r)); stays finite far beyond the range in which
/// the inverse itself is representable.
double rho_tilde_inverse_log1p(const RadialCoefficient& coeff, double r);

/// sup_s rho(s): +inf unless int_0^inf a^{-1/2} converges.
double rho_tilde_supremum(const RadialCoefficient& coeff);

enum class EnergyMode { UnitEnergy, CoefficientEnergy };

/// Volume growth V(r) = log mu(B(r)) and energy-density bound lambda(r).
class GrowthProfile {
 public:
  GrowthProfile(RealFn log_volume, RealFn energy_bound, double valid_min,
                std::string description);

  double log_volume(double r) const { return log_volume_(r); }
  double energy_bound(double r) const { return energy_bound_(r); }
  double valid_min() const { return valid_min_; }
  const std::string& description() const { return description_; }

  /// Set when the profile was derived from a radial coefficient.
  const std::optional<RadialCoefficient>& coefficient() const { return coeff_; }
  std::optional<EnergyMode> mode() const { return mode_; }

 private:
  friend GrowthProfile profile_from_radial(const RadialCoefficient&, int,
                                           EnergyMode);
  RealFn log_volume_;
  RealFn energy_bound_;
  double valid_min_;
  std::string description_;
  std::optional<RadialCoefficient> coeff_;
  std::optional<EnergyMode> mode_;
};

/// UnitEnergy: intrinsic-radius profile V(r) = n log rho^{-1}(r), lambda = 1.
/// V is +inf once r reaches the supremum of rho (the ball is the whole space).
/// CoefficientEnergy: Euclidean-radius profile V(r) = n log r, lambda = a(r).
GrowthProfile profile_from_radial(const RadialCoefficient& coeff, int n,
                                  EnergyMode mode);

/// V(r) = exponent * log r with lambda = 1.
GrowthProfile power_volume_profile(double exponent);

/// Tabulated V and lambda, interpolated monotonically on [r.front(), r.back()].
GrowthProfile tabulated_profile(std::vector<double> r,
                                std::vector<double> log_volume,
                                std::vector<double> energy_bound);

/// a'(r) enters with a negative sign, as in the documented radial drift
/// L rho_0 = -a'(r) / (2 sqrt(a(r))) + (n-1) sqrt(a(r)) / r.
/// For the divergence-form generator div(a grad) the first term carries the
/// opposite sign; callers needing that convention should add a'/sqrt(a).
double drift_L_rho(const RadialCoefficient& coeff, int n, double r,
                   double floor = kDefaultOriginFloor);

/// Rotationally symmetric model manifold ds^2 = dr^2 + xi(r)^2 dtheta^2.
class ManifoldModel {
 public:
  enum class Warp { Euclidean, Hyperbolic, Custom };

  static ManifoldModel euclidean(int n);
  static ManifoldModel hyperbolic(int n, double curvature);
  /// xi sampled from r = 0 with xi(0) = 0 and xi'(0) = 1.
  static ManifoldModel custom(int n, std::vector<double> r,
                              std::vector<double> xi);

  int dimension() const { return n_; }
  Warp warp_family() const { return warp_; }
  double curvature() const { return curvature_; }
  double warp(double r) const;
  double warp_derivative(double r) const;
  std::string describe() const;

 private:
  ManifoldModel(int n, Warp warp, double curvature)
      : n_(n), warp_(warp), curvature_(curvature) {}
  int n_;
  Warp warp_;
  double curvature_ = 0.0;
  MonotoneCubic table_;
};

/// Mean curvature m(r) = (n-1) xi'(r) / xi(r), the radial drift of Brownian
/// motion on the model. Accepts r = +inf for the limiting value.
double mean_curvature(const ManifoldModel& model, double r,
                      double floor = kDefaultOriginFloor);

/// Closed-form rates from the worked examples.
struct CatalogueCase {
  enum class Kind {
    Diri1,
    Diri2,
    Diri3,
    Geo1,
    Geo2,
    Geo3,
    GAlpha,
    HyperbolicLinear
  };

  Kind kind = Kind::Diri1;
  double parameter = 0.0;  ///< alpha (Diri2, Geo2, GAlpha) or beta (Diri3, Geo3)
  int dimension = 2;        ///< HyperbolicLinear only
  double curvature = 1.0;   ///< HyperbolicLinear only
  double epsilon = 0.0;     ///< HyperbolicLinear only

  static CatalogueCase diri1() { return {Kind::Diri1}; }
  static CatalogueCase diri2(double alpha) { return {Kind::Diri2, alpha}; }
  static CatalogueCase diri3(double beta) { return {Kind::Diri3, beta}; }
  static CatalogueCase geo1() { return {Kind::Geo1}; }
  static CatalogueCase geo2(double alpha) { return {Kind::Geo2, alpha}; }
  static CatalogueCase geo3(double beta) { return {Kind::Geo3, beta}; }
  static CatalogueCase g_alpha(double alpha) { return {Kind::GAlpha, alpha}; }
  static CatalogueCase hyperbolic_linear(int n, double curvature,
                                         double epsilon) {
    return {Kind::HyperbolicLinear, 0.0, n, curvature, epsilon};
  }

  /// Throws DomainError when parameters leave the documented ranges.
  void validate() const;
  std::string name() const;
  /// Radial coefficient behind Diri/Geo cases; nullopt for the others.
  std::optional<RadialCoefficient> coefficient() const;
  /// Smallest t at which the closed forms are defined (exclusive).
  double domain_min() const;
  /// True when psi grows like exp(c t) rather than like a power of t.
  bool exponential() const;
};

struct ClosedFormRate {
  double psi;
  /// Euclidean-radius rate where the case defines one. May be +inf when the
  /// double-exponential forms overflow.
  std::optional<double> psi_tilde;
};

ClosedFormRate closed_form_rate(const CatalogueCase& c, double t);
/// Human-readable formulas, used by the catalogue command.
std::string closed_form_formula(const CatalogueCase& c);

/// Increasing C^2 transform f with derivatives and inverse g.
struct Transform {
  RealFn f;
  RealFn df;
  RealFn d2f;
  RealFn inverse;
  static Transform identity();
};

enum class ConditionStatus { Verified, Violated };

struct Prop5Input {
  RealFn drift;
  RealFn diffusion;
  Transform transform = Transform::identity();
  /// Points x in the transformed variable; conditions are probed at g(x).
  std::vector<double> grid;
  double epsilon = 0.01;
  /// Optional dominating drift b~ >= b and its derivative. When present the
  /// report includes C2 = sup -(sigma/b~)^2 b~' and the time constant
  /// C = 1 + C2/2; the transform should then be f = int 1/b~.
  RealFn comparison_drift;
  RealFn comparison_drift_derivative;
};

struct Prop5Report {
  /// sup over the grid of b(g) f'(g) + sigma(g)^2 f''(g) / 2.
  double b0 = 0.0;
  /// Fit of sigma(g) f'(g) <= C (1 + x^alpha).
  double diffusion_constant = 0.0;
  double diffusion_exponent = 0.0;
  ConditionStatus drift_condition = ConditionStatus::Verified;
  ConditionStatus diffusion_condition = ConditionStatus::Verified;
  std::optional<double> c2;
  std::optional<double> time_constant;
  double epsilon = 0.0;
  /// t -> g((b0 + eps) t), or g((C + eps) t) when time_constant is set.
  RealFn rate;
};

Prop5Report check_prop5_conditions(const Prop5Input& input);

}  // namespace escrate
