#include <cmath>
#include <limits>
#include <vector>

#include "escrate/verify.hpp"
#include "test_helpers.hpp"

using namespace escrate;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Sde1D brownian(double sigma = 1.0) {
  Sde1D s;
  s.drift = [](double) { return 0.0; };
  s.sigma = sigma;
  s.floor = -kInf;
  return s;
}

Sde1D radial3() {
  Sde1D s;
  s.floor = 1e-3;
  s.drift = radial_drift(ManifoldModel::euclidean(3), s.floor);
  return s;
}

RateFunction envelope_rate() {
  std::vector<double> grid;
  for (double t = 1.0; t <= 1e4; t *= 1.05) grid.push_back(t);
  grid.push_back(1e4);
  return sampled_rate([](double t) { return std::sqrt(t * std::log(t + 1.0)); }, grid);
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("binomial estimate") {
  const auto e = binomial_estimate(25, 100);
  CHECK(e.p == 0.25);
  CHECK(e.std_error == doctest::Approx(std::sqrt(0.25 * 0.75 / 100)).epsilon(1e-15));
  CHECK(binomial_estimate(0, 10).std_error == 0.0);
  CHECK(binomial_estimate(0, 0).p == 0.0);
}

TEST_CASE("sentinel rates give extreme exceedance fractions") {
  EnsembleSpec spec;
  spec.x0 = 1.0;
  spec.T = 5.0;
  spec.dt = 0.01;
  spec.n_paths = 200;
  const auto e = ensemble(radial3(), spec);
  const std::vector<double> c{1.0, 2.0, 8.0};
  const auto never = exceedance(e, RateFunction::infinite(), c, 1.0);
  for (double f : never.fractions) CHECK(f == 0.0);
  const auto always = exceedance(e, RateFunction::zero(), c, 1.0);
  for (double f : always.fractions) CHECK(f == 1.0);
  CHECK(always.provenance.n_paths == 200);
  CHECK(always.provenance.dt == 0.01);
}

TEST_CASE("exceedance is nonincreasing in C and streaming matches stored") {
  EnsembleSpec spec;
  spec.x0 = 1.0;
  spec.T = 50.0;
  spec.dt = 0.01;
  spec.n_paths = 500;
  spec.master_seed = 3;
  const auto sde = radial3();
  const auto rate = envelope_rate();
  const std::vector<double> c{0.5, 1.0, 1.5, 2.0, 4.0, 8.0};
  const auto stored = exceedance(ensemble(sde, spec), rate, c, 2.0);
  CHECK(nonincreasing(stored.fractions));
  CHECK(stored.fractions.front() > stored.fractions.back());
  spec.store_paths = false;
  const auto streamed = exceedance(sde, spec, rate, c, 2.0);
  CHECK(streamed.exceed_counts == stored.exceed_counts);
  CHECK(streamed.provenance.floor_hits == stored.provenance.floor_hits);
}

TEST_CASE("exceedance preconditions") {
  EnsembleSpec spec;
  spec.T = 2.0;
  spec.dt = 0.01;
  spec.n_paths = 10;
  const auto e = ensemble(radial3(), spec);
  const auto rate = envelope_rate();
  CHECK_ERROR_KIND(exceedance(e, rate, {1e4}, 1.0), ErrorKind::ExtrapolationError);
  CHECK_ERROR_KIND(exceedance(e, rate, {0.1}, 1.0), ErrorKind::ExtrapolationError);
  CHECK_ERROR_KIND(exceedance(e, rate, {1.0}, 3.0), ErrorKind::DomainError);
  CHECK_ERROR_KIND(exceedance(e, rate, {}, 1.0), ErrorKind::DomainError);
  CHECK_ERROR_KIND(exceedance(e, rate, {-1.0}, 1.0), ErrorKind::DomainError);
  spec.store_paths = false;
  CHECK_ERROR_KIND(exceedance(ensemble(radial3(), spec), rate, {1.0}, 1.0),
                   ErrorKind::DomainError);
}

TEST_CASE("LIL fractions are nested and the sentinel never fires") {
  EnsembleSpec spec;
  spec.x0 = 0.0;
  spec.T = 200.0;
  spec.dt = 0.1;
  spec.n_paths = 2000;
  spec.master_seed = 12;
  const std::vector<double> eps{0.0, 0.25, 0.5, 1.0, kInf};
  const auto r = lil_statistic(brownian(), spec, 10.0, eps);
  CHECK(nonincreasing(r.fractions));
  CHECK(r.fractions.front() > r.fractions[3]);
  CHECK(r.fractions.back() == 0.0);
  const auto stored = lil_statistic(ensemble(brownian(), spec), 10.0, eps);
  CHECK(stored.exceed_counts == r.exceed_counts);
  CHECK_ERROR_KIND(lil_statistic(brownian(), spec, std::exp(1.0), eps), ErrorKind::DomainError);
  CHECK_ERROR_KIND(lil_statistic(brownian(), spec, 10.0, {-0.1}), ErrorKind::DomainError);
}

TEST_CASE("drift order check names the failing point") {
  Sde1D low, high;
  low.drift = [](double r) { return r < 5.0 ? 0.0 : 2.0; };
  high.drift = [](double) { return 1.0; };
  CHECK_NOTHROW(check_drift_order(low, high, 4.0));
  try {
    check_drift_order(low, high, 10.0);
    FAIL("expected DriftOrderViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DriftOrderViolated);
    CHECK(std::string(e.what()).find("r = 5.") != std::string::npos);
  }
}

TEST_CASE("identical drifts couple perfectly and agree") {
  Sde1D s;
  s.floor = 0.05;
  s.drift = radial_drift(ManifoldModel::hyperbolic(2, 1.0), s.floor);
  s.drift_lipschitz = 400.0;
  ComparisonParams p;
  p.r0 = 1.0;
  p.t = 2.0;
  p.delta = 2.0;
  p.R = 20.0;
  p.n_paths = 2000;
  p.dt = 1e-3;
  p.master_seed = 5;
  const auto r = comparison_mc(s, s, p);
  CHECK(r.coupled_fraction == 1.0);
  CHECK(!r.violation);
  CHECK(std::abs(r.lhs.p - r.rhs.p) < 3.0 * std::hypot(r.lhs.std_error, r.rhs.std_error));
  CHECK(r.lhs_seed != r.rhs_seed);
  CHECK(coupled_dominance(s, s, 1.0, 1.0, 1e-3, 200, 9) == 1.0);
}

TEST_CASE("shifted drift dominates under coupling") {
  Sde1D low, high;
  low.drift = [](double) { return 0.0; };
  high.drift = [](double) { return 1.0; };
  low.floor = high.floor = 0.0;
  low.drift_lipschitz = high.drift_lipschitz = 1.0;
  CHECK(coupled_dominance(low, high, 1.0, 1.0, 1e-2, 500, 2) == 1.0);
  ComparisonParams p;
  p.r0 = 1.0;
  p.t = 1.0;
  p.delta = 1.5;
  p.R = 10.0;
  p.n_paths = 2000;
  p.dt = 1e-2;
  const auto r = comparison_mc(high, low, p);
  CHECK(r.coupled_fraction == 1.0);
  CHECK(r.lhs.p <= r.rhs.p);
  CHECK_ERROR_KIND(comparison_mc(low, high, p), ErrorKind::DriftOrderViolated);
}

TEST_CASE("coupling preconditions") {
  Sde1D low, high;
  low.drift = [](double) { return 0.0; };
  high.drift = [](double) { return 1.0; };
  high.sigma = 1.0;
  CHECK_ERROR_KIND(coupled_dominance(low, high, 1.0, 1.0, 0.01, 10, 1), ErrorKind::DomainError);
  high.sigma = low.sigma;
  low.drift_lipschitz = 200.0;
  high.drift_lipschitz = 1.0;
  CHECK_ERROR_KIND(coupled_dominance(low, high, 1.0, 1.0, 0.01, 10, 1), ErrorKind::DomainError);
  ComparisonParams p;
  p.delta = 20.0;
  p.R = 10.0;
  CHECK_ERROR_KIND(comparison_mc(high, low, p), ErrorKind::DomainError);
}

}  // TEST_SUITE
