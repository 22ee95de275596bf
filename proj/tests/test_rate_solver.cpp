#include <cmath>
#include <random>
#include <vector>

#include "escrate/rate_solver.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace escrate;

namespace {

double cubic_integrand(double r) { return r / (3.0 * std::log(r) + std::log(std::log(r))); }

}  // namespace

TEST_SUITE("rate_solver") {

TEST_CASE("volume integral against pinned and trapezoid oracles") {
  const auto p = power_volume_profile(3.0);
  CHECK(phi(p, 2.0, 2.0) == 0.0);
  const double v10 = phi(p, 10.0, 2.0);
  CHECK(oracle::rel_err(v10, oracle::kPhiCubic_2_10) < 1e-10);
  CHECK(oracle::rel_err(v10, oracle::trapezoid(cubic_integrand, 2.0, 10.0, 1000000)) < 1e-9);
  const double v20 = phi(p, 20.0, 2.0);
  CHECK(oracle::rel_err(v20, oracle::kPhiCubic_2_20) < 1e-10);
  CHECK(v20 > v10);
}

TEST_CASE("rate inverts the volume integral") {
  const auto p = power_volume_profile(3.0);
  CHECK(psi(p, 0.0, 2.0) == 2.0);
  for (double R : {5.0, 50.0, 500.0}) {
    CHECK(oracle::rel_err(psi(p, phi(p, R, 2.0), 2.0), R) < 1e-9);
  }
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> log_r(std::log(2.5), std::log(1e9));
  for (int i = 0; i < 50; ++i) {
    const double R = std::exp(log_r(gen));
    CHECK(oracle::rel_err(psi(p, phi(p, R, 2.0), 2.0), R) < 1e-9);
  }
}

TEST_CASE("Euclidean volume gives the square-root-log growth") {
  const auto p = power_volume_profile(3.0);
  auto closed = [](double t) { return std::sqrt(t * std::log(t)); };
  const double lo = 1e7, hi = 1e8;
  const double slope = std::log(psi(p, hi, 2.0) / psi(p, lo, 2.0)) / std::log(hi / lo);
  const double expected = std::log(closed(hi) / closed(lo)) / std::log(hi / lo);
  CHECK(std::abs(slope / expected - 1.0) < 0.05);
}

TEST_CASE("larger volume growth gives a larger rate") {
  const auto slow = power_volume_profile(2.0);
  const auto fast = power_volume_profile(4.0);
  const GrowthProfile fast_energy(
      [](double r) { return 4.0 * std::log(r); }, [](double r) { return 1.0 + 0.1 * r; }, 0.0,
      "V = 4 log r, lambda = 1 + r/10");
  for (double t : {1.0, 10.0, 1e3, 1e6}) {
    const double a = psi(slow, t, 2.0);
    const double b = psi(fast, t, 2.0);
    const double c = psi(fast_energy, t, 2.0);
    CHECK(a <= b);
    CHECK(b <= c);
  }
}

TEST_CASE("nonpositive denominators are reported") {
  const GrowthProfile flat([](double) { return 0.0; }, [](double) { return 1.0; }, 0.0, "flat");
  CHECK_ERROR_KIND(volume_integrand(flat, 2.0), ErrorKind::NonPositiveDenominator);
  const double r_star = effective_lower_limit(flat);
  CHECK(r_star > std::exp(1.0));
  CHECK(r_star < std::exp(1.0) + 0.02);
  const auto table = rate_table(flat, {1.0, 2.0}, 1.0);
  CHECK(table.lower_limit() == r_star);
  CHECK_FALSE(table.shift_note().empty());
}

TEST_CASE("non-conservative profile has a finite total integral") {
  const auto p = profile_from_radial(RadialCoefficient::power(3.0), 2, EnergyMode::UnitEnergy);
  CHECK_ERROR_KIND(psi(p, 1e3, 2.0), ErrorKind::FiniteTotalIntegral);
}

TEST_CASE("rate tables") {
  const auto p = power_volume_profile(3.0);
  const auto single = rate_table(p, {5.0}, 1.0);
  CHECK(single(5.0) == doctest::Approx(psi(p, 5.0, 2.0)).epsilon(1e-12));
  CHECK(single.shift_note().empty());

  const std::vector<double> grid = {1.0, 2.0, 4.0, 8.0, 16.0};
  const auto base = rate_table(p, grid, kProofScaleConstant);
  const auto doubled = rate_table(p, grid, 2.0 * kProofScaleConstant);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(base.values()[i] == doctest::Approx(psi(p, 512.0 * grid[i], 2.0)).epsilon(1e-12));
    CHECK(doubled.values()[i] >= base.values()[i]);
  }
  CHECK(base(3.0) > base(2.0));
  CHECK(base(3.0) < base(4.0));
  CHECK_ERROR_KIND(base(17.0), ErrorKind::ExtrapolationError);
  CHECK_ERROR_KIND(base(0.5), ErrorKind::ExtrapolationError);
  CHECK(RateFunction::zero()(1e9) == 0.0);
  CHECK(std::isinf(RateFunction::infinite()(1.0)));
}

TEST_CASE("Euclidean conversion of rates") {
  const std::vector<double> grid = {10.0, 100.0, 1000.0};
  for (const auto& c : {RadialCoefficient::constant(), RadialCoefficient::power(0.0)}) {
    const auto p = profile_from_radial(c, 2, EnergyMode::UnitEnergy);
    const auto rate = rate_table(p, grid, 1.0);
    const auto euclid = euclidean_rate(rate, c);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(oracle::rel_err(euclid.values()[i], rate.values()[i]) < 1e-10);
    }
  }
  const auto lin = RadialCoefficient::power(1.0);
  const auto p = profile_from_radial(lin, 2, EnergyMode::UnitEnergy);
  const double t = 1e8;
  const auto euclid = euclidean_rate(rate_table(p, {t}, 1.0), lin);
  const double closed = *closed_form_rate(CatalogueCase::diri2(1.0), t).psi_tilde;
  CHECK(std::abs(std::log(euclid(t)) / std::log(closed) - 1.0) < 0.05);
}

TEST_CASE("rate from a drift bound") {
  CHECK(drift_rate([](double) { return 1.0; }, 0.0, 3.0) == doctest::Approx(3.0));
  // t = int_0^g x^{-1/2} dx / 2 = sqrt(g)
  CHECK(drift_rate([](double x) { return 2.0 * std::sqrt(x); }, 0.0, 5.0) ==
        doctest::Approx(25.0).epsilon(1e-9));
}

TEST_CASE("symbolic conservativeness verdicts") {
  auto verdict = [](const RadialCoefficient& c) { return conservativeness(c).verdict; };
  CHECK(verdict(RadialCoefficient::power(0.0)) == Verdict::Conservative);
  CHECK(verdict(RadialCoefficient::power(2.0)) == Verdict::Conservative);
  CHECK(verdict(RadialCoefficient::power(3.0)) == Verdict::NonConservative);
  CHECK(verdict(RadialCoefficient::squared_log(1.0)) == Verdict::Conservative);
  CHECK(verdict(RadialCoefficient::squared_log(2.0)) == Verdict::NonConservative);
  CHECK(verdict(RadialCoefficient::constant()) == Verdict::Conservative);
  CHECK(verdict_name(Verdict::NonConservative) == "NonConservative");
}

TEST_CASE("heuristic conservativeness is always wrapped") {
  const auto euclid = conservativeness(power_volume_profile(3.0));
  CHECK(euclid.verdict == Verdict::Inconclusive);
  CHECK(euclid.leaning == Leaning::Conservative);
  CHECK(euclid.increments.size() > 10);

  const auto explosive = conservativeness(
      profile_from_radial(RadialCoefficient::power(3.0), 2, EnergyMode::UnitEnergy));
  CHECK(explosive.verdict == Verdict::Inconclusive);
  CHECK(explosive.leaning == Leaning::NonConservative);
}

TEST_CASE("dyadic scheme on the Euclidean profile") {
  const auto p = power_volume_profile(3.0);
  const auto scheme = dyadic_scheme(p, 4.0, 30);
  REQUIRE(scheme.rows.size() == 30);
  for (const auto& row : scheme.rows) {
    CAPTURE(row.n);
    CHECK(row.big_r == std::ldexp(4.0, row.n));
    if (row.n >= 2) CHECK(row.shell == row.big_r / 2.0);
    CHECK(row.step > 0.0);
    CHECK(row.bound >= 0.0);
    CHECK(row.check >= -1e-9 * row.cumulative);
    CHECK(oracle::rel_err(row.phi_next, phi(p, std::ldexp(4.0, row.n + 1), 8.0)) < 1e-9);
  }
  CHECK(std::isfinite(scheme.total()));
  CHECK(scheme.rows.back().bound < 1e-3 * scheme.total());
}

TEST_CASE("dyadic scheme rejects too small a base radius") {
  const GrowthProfile flat([](double) { return 0.0; }, [](double) { return 1.0; }, 0.0, "flat");
  CHECK_ERROR_KIND(dyadic_scheme(flat, 1.0, 5), ErrorKind::NonPositiveDenominator);
}

}
