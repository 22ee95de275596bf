#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "escrate/errors.hpp"
#include "escrate/quadrature.hpp"
#include "radial_state.hpp"

namespace escrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// v grid: uniform up to kUniformLimit, then geometric.
constexpr double kUniformStep = 1.0 / 16.0;
constexpr double kUniformLimit = 4.0;
constexpr double kGeometricRatio = 1.25;
constexpr double kParametricVMax = 1e150;
constexpr double kMaxRadius = 1e300;

// exp(v^2) carries a relative rounding error of about v^2 ulps, so the
// tolerance loosens with v (capped at 1e-10).
quadrature::Options knot_options(double running, double v) {
  quadrature::Options o;
  o.rel_tol = 1e-13 * std::clamp(v * v, 1.0, 1e3);
  o.abs_tol = 1e-16 * std::max(running, 1e-300);
  o.max_intervals = 4000;
  return o;
}

std::string format_param(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

double RadialCoefficient::State::a(double r) const {
  if (!(r >= 0.0)) fail(ErrorKind::DomainError, "coefficient radius must be >= 0");
  switch (family) {
    case Family::Constant:
      return 1.0;
    case Family::Power:
      return std::pow(1.0 + r, param);
    case Family::SquaredLog: {
      const double l = std::log1p(r);
      return (1.0 + r) * (1.0 + r) * std::pow(l, param);
    }
    case Family::Tabulated:
      if (r > table.x_max()) {
        fail(ErrorKind::OutOfRange, "radius " + format_param(r) +
                                        " beyond tabulated coefficient range");
      }
      return table(r);
  }
  return 1.0;
}

double RadialCoefficient::State::da(double r) const {
  if (!(r >= 0.0)) fail(ErrorKind::DomainError, "coefficient radius must be >= 0");
  switch (family) {
    case Family::Constant:
      return 0.0;
    case Family::Power:
      return param * std::pow(1.0 + r, param - 1.0);
    case Family::SquaredLog: {
      // d/dr (1+r)^2 L^beta = (1+r) L^(beta-1) (2 L + beta).
      const double l = std::log1p(r);
      if (l == 0.0) return param == 0.0 ? 2.0 : (param > 1.0 ? 0.0 : kInf);
      return (1.0 + r) * std::pow(l, param - 1.0) * (2.0 * l + param);
    }
    case Family::Tabulated:
      if (r > table.x_max()) {
        fail(ErrorKind::OutOfRange, "radius " + format_param(r) +
                                        " beyond tabulated coefficient range");
      }
      return table.derivative(r);
  }
  return 0.0;
}

double RadialCoefficient::State::h(double v) const {
  switch (family) {
    case Family::Constant:
      return 2.0 * v * std::exp(v * v);
    case Family::Power:
      return 2.0 * v * std::exp(v * v * (1.0 - 0.5 * param));
    case Family::SquaredLog:
      return 2.0 * std::pow(v, 1.0 - param);
    case Family::Tabulated: {
      const double u = std::expm1(v * v);
      const double coeff = a(u);
      if (!(coeff > 0.0)) {
        fail(ErrorKind::NonPositiveCoefficient,
             "coefficient not positive at r = " + format_param(u));
      }
      return 2.0 * v * (1.0 + u) / std::sqrt(coeff);
    }
  }
  return 0.0;
}

void RadialCoefficient::State::build_intrinsic_table() {
  const double v_max = family == Family::Tabulated
                           ? std::sqrt(std::log1p(table.x_max()))
                           : kParametricVMax;
  knot_v = {0.0};
  knot_g = {0.0};
  double v = 0.0;
  double g = 0.0;
  while (v < v_max) {
    double next = v < kUniformLimit ? v + kUniformStep : v * kGeometricRatio;
    next = std::min(next, v_max);
    // Keep the piece representable; the table ends once G passes kMaxRadius.
    while (!(h(next) * (next - v) < kMaxRadius) && next > v * (1.0 + 1e-9)) {
      next = 0.5 * (v + next);
    }
    const double piece =
        quadrature::integrate([this](double x) { return h(x); }, v, next,
                              knot_options(g, next))
            .value;
    if (!std::isfinite(piece) || g + piece > kMaxRadius) break;
    g += piece;
    v = next;
    knot_v.push_back(v);
    knot_g.push_back(g);
  }
  bounded = family == Family::Power && param > 2.0;
}

RadialCoefficient RadialCoefficient::constant() {
  auto s = std::make_shared<State>();
  s->family = Family::Constant;
  s->build_intrinsic_table();
  return RadialCoefficient(std::move(s));
}

RadialCoefficient RadialCoefficient::power(double alpha) {
  if (!std::isfinite(alpha)) fail(ErrorKind::DomainError, "alpha must be finite");
  auto s = std::make_shared<State>();
  s->family = Family::Power;
  s->param = alpha;
  s->build_intrinsic_table();
  return RadialCoefficient(std::move(s));
}

RadialCoefficient RadialCoefficient::squared_log(double beta) {
  if (!std::isfinite(beta)) fail(ErrorKind::DomainError, "beta must be finite");
  auto s = std::make_shared<State>();
  s->family = Family::SquaredLog;
  s->param = beta;
  if (beta >= 2.0) {
    // a(u)^{-1/2} ~ u^{-beta/2} near 0 is not integrable.
    s->intrinsic_available = false;
    s->intrinsic_reason = "intrinsic radius diverges at the origin for beta >= 2";
  } else {
    s->build_intrinsic_table();
  }
  return RadialCoefficient(std::move(s));
}

RadialCoefficient RadialCoefficient::tabulated(std::vector<double> radii,
                                               std::vector<double> values) {
  if (radii.size() < 2) {
    fail(ErrorKind::DomainError, "tabulated coefficient needs at least two samples");
  }
  if (radii.front() != 0.0) {
    fail(ErrorKind::DomainError, "tabulated coefficient must start at r = 0");
  }
  for (double a : values) {
    if (!(a > 0.0)) {
      fail(ErrorKind::NonPositiveCoefficient,
           "tabulated coefficient samples must be strictly positive");
    }
  }
  auto s = std::make_shared<State>();
  s->family = Family::Tabulated;
  s->table = MonotoneCubic(std::move(radii), std::move(values));
  s->build_intrinsic_table();
  return RadialCoefficient(std::move(s));
}

RadialCoefficient::Family RadialCoefficient::family() const {
  return state_->family;
}

double RadialCoefficient::parameter() const { return state_->param; }

std::string RadialCoefficient::describe() const {
  switch (state_->family) {
    case Family::Constant:
      return "constant";
    case Family::Power:
      return "power(alpha=" + format_param(state_->param) + ")";
    case Family::SquaredLog:
      return "squared_log(beta=" + format_param(state_->param) + ")";
    case Family::Tabulated:
      return "tabulated(" + std::to_string(state_->table.xs().size()) +
             " samples)";
  }
  return "unknown";
}

double RadialCoefficient::value(double r) const { return state_->a(r); }
double RadialCoefficient::derivative(double r) const { return state_->da(r); }

double RadialCoefficient::domain_max() const {
  return state_->family == Family::Tabulated ? state_->table.x_max() : kInf;
}

namespace {

const RadialCoefficient::State& intrinsic_state(const RadialCoefficient& c) {
  const auto& s = c.state();
  if (!s.intrinsic_available) fail(ErrorKind::DomainError, s.intrinsic_reason);
  return s;
}

}  // namespace

double rho_tilde(const RadialCoefficient& coeff, double s) {
  if (!(s >= 0.0)) fail(ErrorKind::DomainError, "rho_tilde needs s >= 0");
  const auto& st = intrinsic_state(coeff);
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) {
    return st.bounded ? st.knot_g.back() : kInf;
  }
  const double v = std::sqrt(std::log1p(s));
  if (v > st.knot_v.back()) {
    if (st.family == RadialCoefficient::Family::Tabulated) {
      fail(ErrorKind::OutOfRange, "s beyond tabulated coefficient range");
    }
    fail(ErrorKind::OutOfRange, "intrinsic radius exceeds representable range");
  }
  auto it = std::upper_bound(st.knot_v.begin(), st.knot_v.end(), v);
  const std::size_t i = static_cast<std::size_t>(it - st.knot_v.begin()) - 1;
  const double base = st.knot_g[i];
  if (v == st.knot_v[i]) return base;
  const double piece =
      quadrature::integrate([&st](double x) { return st.h(x); }, st.knot_v[i],
                            v, knot_options(base, v))
          .value;
  return base + piece;
}

namespace {

// Returns v = sqrt(log1p(rho^{-1}(r))).
double invert_intrinsic(const RadialCoefficient::State& st, double r) {
  if (!(r >= 0.0)) fail(ErrorKind::DomainError, "rho_tilde_inverse needs r >= 0");
  if (r == 0.0) return 0.0;
  if (!(r < st.knot_g.back())) {
    fail(ErrorKind::OutOfRange,
         "r = " + format_param(r) + " is not below the intrinsic radius range " +
             format_param(st.knot_g.back()));
  }
  auto it = std::upper_bound(st.knot_g.begin(), st.knot_g.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - st.knot_g.begin()) - 1;
  const double target = r - st.knot_g[i];
  if (target == 0.0) return st.knot_v[i];

  // Safeguarded Newton on F(v) = int_{v_i}^v h - target over [v_i, v_{i+1}].
  double lo = st.knot_v[i];
  double hi = st.knot_v[i + 1];
  const double span_g = st.knot_g[i + 1] - st.knot_g[i];
  double v = lo + (hi - lo) * (target / span_g);
  auto residual = [&](double x) {
    return quadrature::integrate([&st](double y) { return st.h(y); },
                                 st.knot_v[i], x, knot_options(r, x))
               .value -
           target;
  };
  for (int iter = 0; iter < 200; ++iter) {
    if (!(v > lo && v < hi)) v = 0.5 * (lo + hi);
    const double f = residual(v);
    if (std::abs(f) <= 1e-14 * r) return v;
    if (f < 0.0) {
      lo = v;
    } else {
      hi = v;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      return 0.5 * (lo + hi);
    }
    const double slope = st.h(v);
    double next = slope > 0.0 && std::isfinite(slope) ? v - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    v = next;
  }
  return v;
}

}  // namespace

double rho_tilde_inverse_log1p(const RadialCoefficient& coeff, double r) {
  const auto& st = intrinsic_state(coeff);
  const double v = invert_intrinsic(st, r);
  return v * v;
}

double rho_tilde_inverse(const RadialCoefficient& coeff, double r) {
  const double w = rho_tilde_inverse_log1p(coeff, r);
  const double s = std::expm1(w);
  if (!std::isfinite(s)) {
    fail(ErrorKind::OutOfRange,
         "rho_tilde_inverse(" + format_param(r) + ") overflows a double");
  }
  return s;
}

double rho_tilde_supremum(const RadialCoefficient& coeff) {
  const auto& st = intrinsic_state(coeff);
  return st.bounded ? st.knot_g.back() : kInf;
}

}  // namespace escrate
