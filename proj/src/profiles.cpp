#include "escrate/profiles.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "escrate/errors.hpp"

namespace escrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(expm1(w)) without overflow for large w.
double log_expm1(double w) {
  if (w > 40.0) return w + std::log1p(-std::exp(-w));
  return std::log(std::expm1(w));
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

GrowthProfile::GrowthProfile(RealFn log_volume, RealFn energy_bound,
                             double valid_min, std::string description)
    : log_volume_(std::move(log_volume)),
      energy_bound_(std::move(energy_bound)),
      valid_min_(valid_min),
      description_(std::move(description)) {
  if (!log_volume_ || !energy_bound_) {
    fail(ErrorKind::DomainError, "growth profile needs both V and lambda");
  }
}

GrowthProfile profile_from_radial(const RadialCoefficient& coeff, int n,
                                  EnergyMode mode) {
  if (n < 1) fail(ErrorKind::DomainError, "dimension must be >= 1");
  const double dim = static_cast<double>(n);
  if (mode == EnergyMode::UnitEnergy) {
    const double sup = rho_tilde_supremum(coeff);
    GrowthProfile p(
        [coeff, dim, sup](double r) {
          if (r >= sup) return kInf;
          return dim * log_expm1(rho_tilde_inverse_log1p(coeff, r));
        },
        [](double) { return 1.0; }, 0.0,
        "unit_energy(" + coeff.describe() + ", n=" + std::to_string(n) + ")");
    p.coeff_ = coeff;
    p.mode_ = mode;
    return p;
  }
  GrowthProfile p([dim](double r) { return dim * std::log(r); },
                  [coeff](double r) { return coeff.value(r); }, 0.0,
                  "coefficient_energy(" + coeff.describe() +
                      ", n=" + std::to_string(n) + ")");
  p.coeff_ = coeff;
  p.mode_ = mode;
  return p;
}

GrowthProfile power_volume_profile(double exponent) {
  if (!(exponent > 0.0)) fail(ErrorKind::DomainError, "volume exponent must be > 0");
  return GrowthProfile([exponent](double r) { return exponent * std::log(r); },
                       [](double) { return 1.0; }, 0.0,
                       "power_volume(d=" + fmt(exponent) + ")");
}

GrowthProfile tabulated_profile(std::vector<double> r,
                                std::vector<double> log_volume,
                                std::vector<double> energy_bound) {
  if (r.size() < 2 || r.size() != log_volume.size() ||
      r.size() != energy_bound.size()) {
    fail(ErrorKind::DomainError, "profile table needs matching columns of length >= 2");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(energy_bound[i] > 0.0)) {
      fail(ErrorKind::DomainError, "energy bound samples must be > 0");
    }
    if (i > 0 && (log_volume[i] < log_volume[i - 1] ||
                  energy_bound[i] < energy_bound[i - 1])) {
      fail(ErrorKind::DomainError, "V and lambda samples must be nondecreasing");
    }
  }
  const double lo = r.front();
  const double hi = r.back();
  const std::size_t count = r.size();
  MonotoneCubic v_table(r, std::move(log_volume));
  MonotoneCubic l_table(std::move(r), std::move(energy_bound));
  auto guard = [lo, hi](double x) {
    if (x < lo || x > hi) {
      fail(ErrorKind::OutOfRange,
           "radius " + fmt(x) + " outside tabulated profile [" + fmt(lo) + ", " +
               fmt(hi) + "]");
    }
  };
  return GrowthProfile(
      [v_table, guard](double x) { guard(x); return v_table(x); },
      [l_table, guard](double x) { guard(x); return l_table(x); }, lo,
      "tabulated_profile(" + std::to_string(count) + " samples)");
}

double drift_L_rho(const RadialCoefficient& coeff, int n, double r, double floor) {
  if (!(r >= floor) || !(r > 0.0)) {
    fail(ErrorKind::SingularOrigin, "radius " + fmt(r) + " below origin floor " + fmt(floor));
  }
  const double a = coeff.value(r);
  if (!(a > 0.0)) {
    fail(ErrorKind::NonPositiveCoefficient, "coefficient not positive at r = " + fmt(r));
  }
  const double root = std::sqrt(a);
  return -coeff.derivative(r) / (2.0 * root) +
         static_cast<double>(n - 1) * root / r;
}

ManifoldModel ManifoldModel::euclidean(int n) {
  if (n < 2) fail(ErrorKind::DomainError, "model manifold dimension must be >= 2");
  return ManifoldModel(n, Warp::Euclidean, 0.0);
}

ManifoldModel ManifoldModel::hyperbolic(int n, double curvature) {
  if (n < 2) fail(ErrorKind::DomainError, "model manifold dimension must be >= 2");
  if (!(curvature > 0.0) || !std::isfinite(curvature)) {
    fail(ErrorKind::DomainError, "hyperbolic curvature parameter K must be > 0");
  }
  return ManifoldModel(n, Warp::Hyperbolic, curvature);
}

ManifoldModel ManifoldModel::custom(int n, std::vector<double> r,
                                    std::vector<double> xi) {
  if (n < 2) fail(ErrorKind::DomainError, "model manifold dimension must be >= 2");
  if (r.size() < 3 || r.front() != 0.0 || xi.front() != 0.0) {
    fail(ErrorKind::DomainError, "custom warp needs >= 3 samples with xi(0) = 0");
  }
  for (std::size_t i = 1; i < xi.size(); ++i) {
    if (!(xi[i] > 0.0)) fail(ErrorKind::DomainError, "warp must be positive for r > 0");
  }
  ManifoldModel m(n, Warp::Custom, 0.0);
  m.table_ = MonotoneCubic(std::move(r), std::move(xi));
  // Slope at the origin from the first secant, which is what the table resolves.
  const auto xs = m.table_.xs();
  const auto ys = m.table_.ys();
  const double slope0 = (ys[1] - ys[0]) / (xs[1] - xs[0]);
  if (std::abs(slope0 - 1.0) > 0.05) {
    fail(ErrorKind::DomainError, "custom warp must satisfy xi'(0) = 1");
  }
  return m;
}

double ManifoldModel::warp(double r) const {
  switch (warp_) {
    case Warp::Euclidean:
      return r;
    case Warp::Hyperbolic: {
      const double k = std::sqrt(curvature_);
      return std::sinh(k * r) / k;
    }
    case Warp::Custom:
      if (r > table_.x_max()) fail(ErrorKind::OutOfRange, "radius beyond custom warp table");
      return table_(r);
  }
  return r;
}

double ManifoldModel::warp_derivative(double r) const {
  switch (warp_) {
    case Warp::Euclidean:
      return 1.0;
    case Warp::Hyperbolic:
      return std::cosh(std::sqrt(curvature_) * r);
    case Warp::Custom:
      if (r > table_.x_max()) fail(ErrorKind::OutOfRange, "radius beyond custom warp table");
      return table_.derivative(r);
  }
  return 1.0;
}

std::string ManifoldModel::describe() const {
  const std::string n = "n=" + std::to_string(n_);
  switch (warp_) {
    case Warp::Euclidean:
      return "euclidean(" + n + ")";
    case Warp::Hyperbolic:
      return "hyperbolic(" + n + ", K=" + fmt(curvature_) + ")";
    case Warp::Custom:
      return "custom_warp(" + n + ")";
  }
  return "model";
}

double mean_curvature(const ManifoldModel& model, double r, double floor) {
  if (!(r >= floor) || !(r > 0.0)) {
    fail(ErrorKind::SingularOrigin, "radius " + fmt(r) + " below origin floor " + fmt(floor));
  }
  const double factor = static_cast<double>(model.dimension() - 1);
  switch (model.warp_family()) {
    case ManifoldModel::Warp::Euclidean:
      return factor / r;
    case ManifoldModel::Warp::Hyperbolic: {
      // xi'/xi = sqrt(K) coth(sqrt(K) r) = sqrt(K) (1 + 2 / (e^{2 sqrt(K) r} - 1)),
      // finite at r = inf. exp is much cheaper than tanh on the simulation path.
      const double k = std::sqrt(model.curvature());
      const double y = 2.0 * k * r;
      const double tail = y < 0.5 ? std::expm1(y) : std::exp(y) - 1.0;
      return factor * k * (1.0 + 2.0 / tail);
    }
    case ManifoldModel::Warp::Custom:
      return factor * model.warp_derivative(r) / model.warp(r);
  }
  return 0.0;
}

}  // namespace escrate
