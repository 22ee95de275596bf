#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "escrate/errors.hpp"
#include "escrate/profiles.hpp"

namespace escrate {

namespace {

constexpr double kE = 2.718281828459045;

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Exponent of t in psi for the beta < 1 squared-log case.
double squared_log_exponent(double beta) {
  return (2.0 - beta) / (2.0 - 2.0 * beta);
}

}  // namespace

void CatalogueCase::validate() const {
  switch (kind) {
    case Kind::Diri1:
    case Kind::Geo1:
      return;
    case Kind::Diri2:
    case Kind::Geo2:
      if (!(parameter < 2.0)) fail(ErrorKind::DomainError, name() + " needs alpha < 2");
      return;
    case Kind::Diri3:
    case Kind::Geo3:
      if (!(parameter <= 1.0)) fail(ErrorKind::DomainError, name() + " needs beta <= 1");
      return;
    case Kind::GAlpha:
      if (!(parameter >= -1.0 && parameter <= 1.0)) {
        fail(ErrorKind::DomainError, name() + " needs -1 <= alpha <= 1");
      }
      return;
    case Kind::HyperbolicLinear:
      if (dimension < 2 || !(curvature > 0.0) || !(epsilon >= 0.0)) {
        fail(ErrorKind::DomainError, name() + " needs n >= 2, K > 0, eps >= 0");
      }
      return;
  }
}

std::string CatalogueCase::name() const {
  switch (kind) {
    case Kind::Diri1: return "diri1";
    case Kind::Diri2: return "diri2(alpha=" + fmt(parameter) + ")";
    case Kind::Diri3: return "diri3(beta=" + fmt(parameter) + ")";
    case Kind::Geo1: return "geo1";
    case Kind::Geo2: return "geo2(alpha=" + fmt(parameter) + ")";
    case Kind::Geo3: return "geo3(beta=" + fmt(parameter) + ")";
    case Kind::GAlpha: return "g_alpha(alpha=" + fmt(parameter) + ")";
    case Kind::HyperbolicLinear:
      return "hyperbolic_linear(n=" + std::to_string(dimension) +
             ", K=" + fmt(curvature) + ", eps=" + fmt(epsilon) + ")";
  }
  return "unknown";
}

std::optional<RadialCoefficient> CatalogueCase::coefficient() const {
  switch (kind) {
    case Kind::Diri1:
    case Kind::Geo1:
      return RadialCoefficient::constant();
    case Kind::Diri2:
    case Kind::Geo2:
      return RadialCoefficient::power(parameter);
    case Kind::Diri3:
    case Kind::Geo3:
      return RadialCoefficient::squared_log(parameter);
    default:
      return std::nullopt;
  }
}

double CatalogueCase::domain_min() const {
  switch (kind) {
    case Kind::Diri1:
    case Kind::Diri2:
      return 1.0;
    case Kind::Geo1:
    case Kind::Geo2:
      return kE;
    case Kind::Diri3:
    case Kind::Geo3:
      return 0.0;
    case Kind::GAlpha:
      return parameter == -1.0 ? kE : 0.0;
    case Kind::HyperbolicLinear:
      return 0.0;
  }
  return 0.0;
}

bool CatalogueCase::exponential() const {
  switch (kind) {
    case Kind::Diri3:
    case Kind::Geo3:
    case Kind::GAlpha:
      return parameter == 1.0;
    default:
      return false;
  }
}

ClosedFormRate closed_form_rate(const CatalogueCase& c, double t) {
  c.validate();
  if (!(t > c.domain_min()) || !std::isfinite(t)) {
    fail(ErrorKind::DomainError, c.name() + " needs t > " + fmt(c.domain_min()) +
                                     ", got " + fmt(t));
  }
  switch (c.kind) {
    case CatalogueCase::Kind::Diri1: {
      const double psi = std::sqrt(t * std::log(t));
      return {psi, psi};
    }
    case CatalogueCase::Kind::Diri2: {
      const double tl = t * std::log(t);
      return {std::sqrt(tl), std::pow(tl, 1.0 / (2.0 - c.parameter))};
    }
    case CatalogueCase::Kind::Geo1: {
      const double psi = std::sqrt(t * std::log(std::log(t)));
      return {psi, psi};
    }
    case CatalogueCase::Kind::Geo2: {
      const double tl = t * std::log(std::log(t));
      return {std::sqrt(tl), std::pow(tl, 1.0 / (2.0 - c.parameter))};
    }
    case CatalogueCase::Kind::Diri3:
    case CatalogueCase::Kind::Geo3: {
      const double beta = c.parameter;
      if (beta == 1.0) return {std::exp(t), std::exp(std::exp(t))};
      return {std::pow(t, squared_log_exponent(beta)),
              std::exp(std::pow(t, 1.0 / (1.0 - beta)))};
    }
    case CatalogueCase::Kind::GAlpha: {
      const double alpha = c.parameter;
      if (alpha == -1.0) return {std::sqrt(t * std::log(std::log(t))), std::nullopt};
      if (alpha == 1.0) return {std::exp(t), std::nullopt};
      return {std::pow(t, 1.0 / (1.0 - alpha)), std::nullopt};
    }
    case CatalogueCase::Kind::HyperbolicLinear:
      return {(1.0 + c.epsilon) * (c.dimension - 1) * std::sqrt(c.curvature) * t,
              std::nullopt};
  }
  return {0.0, std::nullopt};
}

std::string closed_form_formula(const CatalogueCase& c) {
  c.validate();
  const std::string a = fmt(c.parameter);
  switch (c.kind) {
    case CatalogueCase::Kind::Diri1:
      return "psi=sqrt(t*log(t)) psi_tilde=sqrt(t*log(t))";
    case CatalogueCase::Kind::Diri2:
      return "psi=sqrt(t*log(t)) psi_tilde=(t*log(t))^(1/(2-" + a + "))";
    case CatalogueCase::Kind::Geo1:
      return "psi=sqrt(t*log(log(t))) psi_tilde=sqrt(t*log(log(t)))";
    case CatalogueCase::Kind::Geo2:
      return "psi=sqrt(t*log(log(t))) psi_tilde=(t*log(log(t)))^(1/(2-" + a + "))";
    case CatalogueCase::Kind::Diri3:
    case CatalogueCase::Kind::Geo3:
      if (c.parameter == 1.0) return "psi=exp(t) psi_tilde=exp(exp(t))";
      return "psi=t^" + fmt(squared_log_exponent(c.parameter)) +
             " psi_tilde=exp(t^" + fmt(1.0 / (1.0 - c.parameter)) + ")";
    case CatalogueCase::Kind::GAlpha:
      if (c.parameter == -1.0) return "psi=sqrt(t*log(log(t)))";
      if (c.parameter == 1.0) return "psi=exp(t)";
      return "psi=t^" + fmt(1.0 / (1.0 - c.parameter));
    case CatalogueCase::Kind::HyperbolicLinear:
      return "psi=" + fmt((1.0 + c.epsilon) * (c.dimension - 1) * std::sqrt(c.curvature)) +
             "*t";
  }
  return "";
}

Transform Transform::identity() {
  return {[](double x) { return x; }, [](double) { return 1.0; },
          [](double) { return 0.0; }, [](double x) { return x; }};
}

namespace {

// Least-squares slope of log(y) against log(x) over the given points.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (denom <= 0.0) return 0.0;
  return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

}  // namespace

Prop5Report check_prop5_conditions(const Prop5Input& in) {
  if (in.grid.empty()) fail(ErrorKind::DomainError, "prop5 check needs a nonempty grid");
  if (!in.drift || !in.diffusion || !in.transform.f || !in.transform.df ||
      !in.transform.d2f || !in.transform.inverse) {
    fail(ErrorKind::DomainError, "prop5 check needs drift, diffusion and a full transform");
  }
  std::vector<double> grid = in.grid;
  std::sort(grid.begin(), grid.end());
  if (!(grid.front() > 0.0)) fail(ErrorKind::DomainError, "prop5 grid must be positive");

  const std::size_t m = grid.size();
  std::vector<double> q_drift(m), q_diff(m);
  double previous_z = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double z = in.transform.inverse(grid[i]);
    const double d1 = in.transform.df(z);
    if (!(z > previous_z) || !(d1 > 0.0)) {
      fail(ErrorKind::NonMonotoneTransform,
           "transform is not increasing near x = " + fmt(grid[i]));
    }
    previous_z = z;
    const double sigma = in.diffusion(z);
    q_drift[i] = in.drift(z) * d1 + 0.5 * sigma * sigma * in.transform.d2f(z);
    q_diff[i] = sigma * d1;
  }

  Prop5Report report;
  report.epsilon = in.epsilon;
  report.b0 = *std::max_element(q_drift.begin(), q_drift.end());

  // Tail growth probes use the upper half of the grid.
  const std::size_t half = m / 2;
  std::vector<double> tail_x(grid.begin() + static_cast<std::ptrdiff_t>(half), grid.end());
  std::vector<double> tail_drift(q_drift.begin() + static_cast<std::ptrdiff_t>(half),
                                 q_drift.end());
  std::vector<double> tail_diff(q_diff.begin() + static_cast<std::ptrdiff_t>(half),
                                q_diff.end());

  // Condition 1 fails when the drift quantity keeps growing polynomially.
  const double drift_growth = log_log_slope(tail_x, tail_drift);
  report.drift_condition = std::isfinite(report.b0) && drift_growth <= 0.05
                               ? ConditionStatus::Verified
                               : ConditionStatus::Violated;

  const double diff_max = *std::max_element(q_diff.begin(), q_diff.end());
  if (diff_max <= 0.0) {
    report.diffusion_exponent = 0.0;
    report.diffusion_constant = 0.0;
    report.diffusion_condition = ConditionStatus::Verified;
  } else {
    const double alpha = std::max(0.0, log_log_slope(tail_x, tail_diff));
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      c = std::max(c, q_diff[i] / (1.0 + std::pow(grid[i], alpha)));
    }
    report.diffusion_exponent = alpha;
    report.diffusion_constant = c;
    report.diffusion_condition = std::isfinite(c) && alpha < 1.0
                                     ? ConditionStatus::Verified
                                     : ConditionStatus::Violated;
  }

  double time_constant = report.b0;
  if (in.comparison_drift && in.comparison_drift_derivative) {
    double c2 = 0.0;
    for (double x : grid) {
      const double z = in.transform.inverse(x);
      const double btilde = in.comparison_drift(z);
      if (!(btilde > 0.0)) {
        fail(ErrorKind::DomainError, "comparison drift must be positive");
      }
      const double ratio = in.diffusion(z) / btilde;
      c2 = std::max(c2, -ratio * ratio * in.comparison_drift_derivative(z));
    }
    report.c2 = c2;
    report.time_constant = 1.0 + 0.5 * c2;
    time_constant = *report.time_constant;
  }
  const double scale = time_constant + in.epsilon;
  const RealFn g = in.transform.inverse;
  report.rate = [g, scale](double t) { return g(scale * t); };
  return report;
}

}  // namespace escrate
