#include "escrate/rate_solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "escrate/errors.hpp"
#include "escrate/quadrature.hpp"
#include "escrate/root_finding.hpp"

namespace escrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxRadius = 1e300;
// Consecutive negligible increments after which the integral is declared
// convergent.
constexpr int kConvergedStreak = 5;
constexpr double kNegligibleIncrement = 1e-12;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double next_edge(double e) { return e == 0.0 ? 1.0 : 2.0 * e; }

}  // namespace

MonotoneIntegral::MonotoneIntegral(RealFn integrand, double lower,
                                   SolverOptions opts)
    : integrand_(std::move(integrand)), lower_(lower), opts_(opts) {
  if (!(lower >= 0.0) || !std::isfinite(lower)) {
    fail(ErrorKind::DomainError, "integration lower limit must be finite and >= 0");
  }
}

double MonotoneIntegral::segment(double a, double b) const {
  quadrature::Options q;
  q.rel_tol = opts_.quadrature_tol;
  q.abs_tol = 1e-300;
  return quadrature::integrate(integrand_, a, b, q).value;
}

double MonotoneIntegral::value(double upper) const {
  if (!(upper >= lower_)) {
    fail(ErrorKind::DomainError,
         "upper limit " + fmt(upper) + " below lower limit " + fmt(lower_));
  }
  double total = 0.0;
  double e = lower_;
  while (e < upper) {
    const double f = std::min(next_edge(e), upper);
    total += segment(e, f);
    e = f;
  }
  return total;
}

double MonotoneIntegral::inverse(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorKind::DomainError, "rate time must be finite and >= 0, got " + fmt(t));
  }
  if (t == 0.0) return lower_;
  double cumulative = 0.0;
  double e = lower_;
  int streak = 0;
  for (;;) {
    const double f = next_edge(e);
    if (f > kMaxRadius) {
      if (streak > 0) {
        fail(ErrorKind::FiniteTotalIntegral,
             "integral levels off at " + fmt(cumulative) + " < t = " + fmt(t));
      }
      fail(ErrorKind::OutOfRange, "inverse at t = " + fmt(t) + " exceeds " + fmt(kMaxRadius));
    }
    const double inc = segment(e, f);
    if (cumulative + inc >= t) {
      const double target = t - cumulative;
      return roots::bisect_increasing([&](double x) { return segment(e, x); },
                                      target, e, f, opts_.inversion_tol);
    }
    cumulative += inc;
    streak = inc <= kNegligibleIncrement * cumulative ? streak + 1 : 0;
    if (streak >= kConvergedStreak) {
      fail(ErrorKind::FiniteTotalIntegral,
           "integral converges to about " + fmt(cumulative) + " < t = " + fmt(t));
    }
    e = f;
  }
}

double volume_integrand(const GrowthProfile& profile, double r) {
  const double denom = profile.energy_bound(r) *
                       (profile.log_volume(r) + std::log(std::log(r)));
  if (!(denom > 0.0)) {
    fail(ErrorKind::NonPositiveDenominator,
         "denominator lambda(r)(V(r) + log log r) = " + fmt(denom) +
             " at r = " + fmt(r));
  }
  return r / denom;
}

double effective_lower_limit(const GrowthProfile& profile, double nominal) {
  constexpr double kStep = 0.01;
  constexpr int kMaxSteps = 100000;
  for (int k = 0; k < kMaxSteps; ++k) {
    const double r = nominal + kStep * k;
    if (r < profile.valid_min()) continue;
    const double denom = profile.energy_bound(r) *
                         (profile.log_volume(r) + std::log(std::log(r)));
    if (denom > 1e-6) return r;
  }
  fail(ErrorKind::NonPositiveDenominator,
       "denominator never exceeds 1e-6 on [" + fmt(nominal) + ", " +
           fmt(nominal + kStep * kMaxSteps) + "]");
}

namespace {

MonotoneIntegral volume_integral(const GrowthProfile& profile, double r_lo,
                                 SolverOptions opts) {
  if (!(r_lo > 1.0)) fail(ErrorKind::DomainError, "volume integral needs r_lo > 1");
  return MonotoneIntegral(
      [&profile](double r) { return volume_integrand(profile, r); }, r_lo, opts);
}

}  // namespace

double phi(const GrowthProfile& profile, double R, double r_lo, SolverOptions opts) {
  return volume_integral(profile, r_lo, opts).value(R);
}

double psi(const GrowthProfile& profile, double t, double r_lo, SolverOptions opts) {
  return volume_integral(profile, r_lo, opts).inverse(t);
}

RateFunction::RateFunction(std::vector<double> t, std::vector<double> psi,
                           double lower_limit, double scale,
                           std::string shift_note)
    : t_(std::move(t)),
      psi_(std::move(psi)),
      lower_limit_(lower_limit),
      scale_(scale),
      shift_note_(std::move(shift_note)) {
  if (t_.empty() || t_.size() != psi_.size()) {
    fail(ErrorKind::DomainError, "rate table needs matching, nonempty columns");
  }
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1]) || !(psi_[i] > psi_[i - 1])) {
      fail(ErrorKind::DomainError, "rate samples must be strictly increasing in t and psi");
    }
  }
  interp_ = MonotoneCubic(t_, psi_);
}

RateFunction RateFunction::zero() { return RateFunction(Kind::Zero); }
RateFunction RateFunction::infinite() { return RateFunction(Kind::Infinite); }

double RateFunction::t_min() const {
  return kind_ == Kind::Table ? t_.front() : 0.0;
}

double RateFunction::t_max() const {
  return kind_ == Kind::Table ? t_.back() : kInf;
}

double RateFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Infinite:
      return kInf;
    case Kind::Table:
      break;
  }
  if (t < t_.front() || t > t_.back()) {
    fail(ErrorKind::ExtrapolationError,
         "t = " + fmt(t) + " outside rate table [" + fmt(t_.front()) + ", " +
             fmt(t_.back()) + "]");
  }
  return interp_(t);
}

RateFunction sampled_rate(const RealFn& psi, std::vector<double> t_grid, std::string note) {
  std::vector<double> values;
  values.reserve(t_grid.size());
  for (double t : t_grid) values.push_back(psi(t));
  return RateFunction(std::move(t_grid), std::move(values), kNominalLowerLimit, 1.0,
                      std::move(note));
}

RateFunction rate_table(const GrowthProfile& profile,
                        const std::vector<double>& t_grid, double scale,
                        SolverOptions opts) {
  if (t_grid.empty()) fail(ErrorKind::DomainError, "rate table needs a nonempty time grid");
  if (!(scale > 0.0)) fail(ErrorKind::DomainError, "scale constant must be > 0");
  const double r_star = effective_lower_limit(profile, opts.nominal_lower);
  const MonotoneIntegral integral = volume_integral(profile, r_star, opts);
  std::vector<double> values;
  values.reserve(t_grid.size());
  for (double t : t_grid) values.push_back(integral.inverse(scale * t));
  std::string note;
  if (r_star != opts.nominal_lower) {
    note = "lower limit moved from " + fmt(opts.nominal_lower) + " to " + fmt(r_star);
  }
  return RateFunction(t_grid, std::move(values), r_star, scale, std::move(note));
}

RateFunction euclidean_rate(const RateFunction& rate, const RadialCoefficient& coeff) {
  if (rate.kind() != RateFunction::Kind::Table) return rate;
  std::vector<double> out;
  out.reserve(rate.values().size());
  for (double v : rate.values()) out.push_back(rho_tilde_inverse(coeff, v));
  return RateFunction(rate.times(), std::move(out), rate.lower_limit(), rate.scale(),
                      rate.shift_note());
}

double drift_rate(const RealFn& drift_bound, double lower, double t, SolverOptions opts) {
  MonotoneIntegral integral(
      [&drift_bound](double x) {
        const double b = drift_bound(x);
        if (!(b > 0.0)) {
          fail(ErrorKind::DomainError, "drift bound must be positive, got " + fmt(b) +
                                           " at x = " + fmt(x));
        }
        return 1.0 / b;
      },
      lower, opts);
  return integral.inverse(t);
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Conservative: return "Conservative";
    case Verdict::NonConservative: return "NonConservative";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string_view leaning_name(Leaning l) {
  switch (l) {
    case Leaning::None: return "none";
    case Leaning::Conservative: return "Conservative";
    case Leaning::NonConservative: return "NonConservative";
  }
  return "none";
}

ConservativenessReport conservativeness(const RadialCoefficient& coeff, int n) {
  ConservativenessReport report;
  const double p = coeff.parameter();
  switch (coeff.family()) {
    case RadialCoefficient::Family::Constant:
      report.verdict = Verdict::Conservative;
      report.basis = "constant coefficient, Euclidean volume growth";
      return report;
    case RadialCoefficient::Family::Power:
      report.verdict = p <= 2.0 ? Verdict::Conservative : Verdict::NonConservative;
      report.basis = "power family: conservative iff alpha <= 2";
      return report;
    case RadialCoefficient::Family::SquaredLog:
      report.verdict = p <= 1.0 ? Verdict::Conservative : Verdict::NonConservative;
      report.basis = "squared-log family: conservative iff beta <= 1";
      return report;
    case RadialCoefficient::Family::Tabulated:
      break;
  }
  ConservativenessReport numeric =
      conservativeness(profile_from_radial(coeff, n, EnergyMode::UnitEnergy));
  numeric.basis = "tabulated coefficient; " + numeric.basis;
  return numeric;
}

ConservativenessReport conservativeness(const CatalogueCase& c) {
  c.validate();
  ConservativenessReport report;
  report.verdict = Verdict::Conservative;
  report.basis = c.name() + " has a finite upper rate function";
  return report;
}

ConservativenessReport conservativeness(const GrowthProfile& profile, int levels) {
  ConservativenessReport report;
  report.verdict = Verdict::Inconclusive;
  report.basis = "numeric dyadic-shell increments of the volume integral";
  const double r_star = effective_lower_limit(profile);
  const MonotoneIntegral integral(
      [&profile](double r) { return volume_integrand(profile, r); }, r_star);
  int k = static_cast<int>(std::floor(std::log2(r_star)));
  double running = 0.0;
  for (int level = 0; level < levels; ++level, ++k) {
    const double a = std::max(std::ldexp(1.0, k), r_star);
    const double b = std::ldexp(1.0, k + 1);
    if (b <= a) continue;
    if (b > kMaxRadius) break;
    double inc = 0.0;
    try {
      inc = integral.value(b) - integral.value(a);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OutOfRange) throw;
      break;  // tabulated data end here
    }
    report.increments.push_back(inc);
    running += inc;
  }
  const auto& inc = report.increments;
  if (inc.size() < 2) return report;
  if (inc.back() <= kNegligibleIncrement * running) {
    report.leaning = Leaning::NonConservative;
    return report;
  }
  const std::size_t window = std::min<std::size_t>(10, inc.size() - 1);
  const double reference = inc[inc.size() - 1 - window];
  bool steady = true;
  for (std::size_t i = inc.size() - window; i < inc.size(); ++i) {
    if (inc[i] < 0.5 * reference) steady = false;
  }
  if (steady) report.leaning = Leaning::Conservative;
  return report;
}

DyadicScheme dyadic_scheme(const GrowthProfile& profile, double c, int levels,
                           double mu_b1, SolverOptions opts) {
  if (!(c > 0.0) || levels < 1) {
    fail(ErrorKind::DomainError, "dyadic scheme needs c > 0 and at least one level");
  }
  const double base = 2.0 * c;
  if (!(profile.log_volume(base) + std::log(std::log(base)) > 0.0)) {
    fail(ErrorKind::NonPositiveDenominator,
         "V(2c) + log log(2c) must be > 0; increase c");
  }
  DyadicScheme scheme;
  scheme.c = c;
  scheme.levels = levels;
  const double log_mu_b1 = mu_b1 > 0.0 ? std::log(mu_b1) : profile.log_volume(base);
  scheme.mu_b1 = std::exp(log_mu_b1);

  const MonotoneIntegral integral(
      [&profile](double r) { return volume_integrand(profile, r); }, base, opts);
  const double log_prefactor = std::log(16.0 / std::sqrt(2.0 * std::numbers::pi));
  double previous_radius = 0.0;
  double cumulative = 0.0;
  double partial = 0.0;
  double phi_acc = 0.0;
  for (int n = 1; n <= levels; ++n) {
    DyadicLevel row;
    row.n = n;
    row.big_r = std::ldexp(c, n);
    row.shell = row.big_r - previous_radius;
    const double lambda = profile.energy_bound(row.big_r);
    const double log_volume = profile.log_volume(row.big_r);
    const double denom = log_volume + std::log(std::log(row.big_r));
    if (!(denom > 0.0) || !(lambda > 0.0)) {
      fail(ErrorKind::NonPositiveDenominator,
           "V(R_n) + log log R_n not positive at level " + std::to_string(n));
    }
    row.step = row.shell * row.shell / (32.0 * lambda * denom);
    cumulative += row.step;
    row.cumulative = cumulative;
    row.log_bound = log_prefactor + log_volume - log_mu_b1 + std::log(cumulative) +
                    0.5 * std::log(lambda) - 0.5 * std::log(row.step) -
                    std::log(row.shell) -
                    row.shell * row.shell / (8.0 * lambda * row.step);
    row.bound = std::exp(row.log_bound);
    partial += row.bound;
    row.partial_sum = partial;
    const double log_r = std::log(row.big_r);
    row.summand = 1.0 / (log_r * log_r);
    phi_acc += integral.value(std::ldexp(c, n + 1)) - integral.value(row.big_r);
    row.phi_next = phi_acc;
    row.check = cumulative - phi_acc / 256.0;
    scheme.rows.push_back(row);
    previous_radius = row.big_r;
  }
  return scheme;
}

}  // namespace escrate
