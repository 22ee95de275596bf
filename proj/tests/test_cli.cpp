#include <algorithm>
#include <sstream>

#include "escrate/cli.hpp"
#include "test_helpers.hpp"

using namespace escrate;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

struct Captured {
  std::ostringstream out, report, diag;
  cli::Streams io() { return {out, report, diag, false}; }
};

}  // namespace

TEST_SUITE("config") {

TEST_CASE("sections, comments and values") {
  const auto c = parse(
      "# comment\n"
      "[model]\n"
      "family = power   ; trailing comment\n"
      "alpha = 1.5\n"
      "n = 3\n"
      "mode = coefficient\n"
      "[solver]\n"
      "t_grid = 1, 10, 100\n"
      "[simulation]\n"
      "floor = -inf\n"
      "x0 = 0\n"
      "master_seed = 18446744073709551615\n"
      "lipschitz = 400\n"
      "[verify]\n"
      "eps_grid = 0, inf\n");
  CHECK(c.has_model);
  CHECK(c.has_solver);
  CHECK(c.has_simulation);
  CHECK(c.has_verify);
  CHECK(c.model.family == "power");
  CHECK(c.model.alpha == 1.5);
  CHECK(c.model.n == 3);
  CHECK(c.model.mode == EnergyMode::CoefficientEnergy);
  CHECK(c.solver.t_grid == std::vector<double>{1, 10, 100});
  CHECK(std::isinf(c.simulation.floor));
  CHECK(c.simulation.master_seed == 18446744073709551615ull);
  CHECK(c.simulation.lipschitz == 400.0);
  CHECK(std::isinf(c.verify.eps_grid[1]));
}

TEST_CASE("geometric grids") {
  const auto g = parse_grid("geom(10, 1000, 3)");
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 10.0);
  CHECK(g[1] == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(g[2] == 1000.0);
  CHECK(parse_grid("").empty());
  CHECK_ERROR_KIND(parse_grid("geom(10, 1, 3)"), ErrorKind::ConfigError);
}

TEST_CASE("malformed configs are rejected") {
  CHECK_ERROR_KIND(parse("[model]\ncolour = red\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("[plots]\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("family = power\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("[model]\nalpha = one\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("[model]\nalpha = 1\nalpha = 2\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("[model]\nfamily = spiral\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("[simulation]\ndt = 0\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("[simulation]\nx0 = 0\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("[solver]\nt_grid = 10, 1\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("[verify]\ndelta = 20\nR = 10\n"), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(parse("[simulation]\nn_paths = -3\n"), ErrorKind::ConfigError);
  try {
    parse("[model]\n\nbeta = x\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("model drifts") {
  ModelConfig m;
  m.family = "linear";
  m.drift_constant = 1.0;
  m.drift_inverse = 2.0;
  CHECK(model_drift(m, 1e-6)(4.0) == 1.5);
  m.family = "hyperbolic_bound";
  m.n = 2;
  CHECK(model_drift(m, 1e-6)(1.0) == 2.0);
  m.family = "euclidean";
  m.n = 3;
  CHECK(model_drift(m, 1e-6)(2.0) == 1.0);
  CHECK_ERROR_KIND(model_profile(ModelConfig{"hyperbolic"}), ErrorKind::ConfigError);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("number formatting") {
  CHECK(cli::format_number(0.1) == "0.10000000000000001");
  CHECK(cli::format_number(100.0) == "100");
  CHECK(cli::format_number(1e300) == "1.0000000000000001e+300");
  CHECK(cli::format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("exit code contract") {
  CHECK(cli::exit_code_for(ErrorKind::ConfigError) == 2);
  CHECK(cli::exit_code_for(ErrorKind::FiniteTotalIntegral) == 3);
  CHECK(cli::exit_code_for(ErrorKind::ExtrapolationError) == 3);
  CHECK(cli::exit_code_for(ErrorKind::NonFiniteState) == 4);
  CHECK(cli::exit_code_for(ErrorKind::DriftOrderViolated) == 5);
}

TEST_CASE("rate command") {
  Captured cap;
  auto c = parse("[model]\nfamily = constant\n[solver]\nt_grid =\n");
  CHECK(cli::cmd_rate(c, cap.io()) == 0);
  CHECK(cap.out.str() == "t,psi,psi_tilde\n");

  Captured one;
  c = parse("[model]\nfamily = constant\n[solver]\nt_grid = 100\n");
  CHECK(cli::cmd_rate(c, one.io()) == 0);
  const auto text = one.out.str();
  CHECK(text.rfind("t,psi,psi_tilde\n100,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);

  Captured bad;
  c = parse("[model]\nfamily = power\nalpha = 3\n[solver]\nt_grid = 100\n");
  CHECK_ERROR_KIND(cli::cmd_rate(c, bad.io()), ErrorKind::FiniteTotalIntegral);

  Captured euclid;
  c = parse("[model]\nfamily = euclidean\nn = 3\n[solver]\nt_grid = 100\n");
  CHECK(cli::cmd_rate(c, euclid.io()) == 0);
  CHECK(euclid.out.str().back() == '\n');
  CHECK(euclid.out.str().find(",\n") != std::string::npos);
}

TEST_CASE("conserve command") {
  auto verdict = [](const std::string& model) {
    Captured cap;
    cli::cmd_conserve(parse("[model]\n" + model), cap.io());
    return cap.out.str();
  };
  CHECK(verdict("family = power\nalpha = 0\n") ==
        "verdict=Conservative family=power params=alpha=0\n");
  CHECK(verdict("family = squared_log\nbeta = 2\n") ==
        "verdict=NonConservative family=squared_log params=beta=2\n");
  CHECK(verdict("family = tabulated\nradii = 0, 1, 2, 4\nvalues = 1, 2, 3, 5\n")
            .rfind("verdict=Inconclusive family=tabulated params=points=4 leaning=", 0) == 0);
}

TEST_CASE("simulate command") {
  const auto c = parse(
      "[model]\nfamily = linear\ndrift_constant = 1\n"
      "[simulation]\nx0 = 0\nfloor = 0\nsigma = 0\nT = 2\ndt = 1\n");
  Captured cap;
  CHECK(cli::cmd_simulate(c, cap.io()) == 0);
  CHECK(cap.out.str() == "path,step,t,x\n0,0,0,0\n0,1,1,1\n0,2,2,2\n");

  auto summary = c;
  summary.simulation.output = "summary";
  summary.simulation.barrier = 1.5;
  Captured s;
  CHECK(cli::cmd_simulate(summary, s.io()) == 0);
  CHECK(s.out.str() == "path,final,exitTime\n0,2,2\n");

  auto bad = c;
  bad.model.drift_constant = 1e308;
  bad.simulation.T = 5;
  Captured b;
  CHECK_ERROR_KIND(cli::cmd_simulate(bad, b.io()), ErrorKind::NonFiniteState);
}

TEST_CASE("verify modes") {
  Captured cmp;
  const auto same = parse(
      "[model]\nfamily = hyperbolic\n"
      "[simulation]\nx0 = 1\nT = 1\ndt = 1e-3\nn_paths = 200\nfloor = 0.05\nlipschitz = 400\n"
      "[verify]\ndelta = 2\nR = 20\n");
  CHECK(cli::cmd_verify(same, "compare", cmp.io()) == 0);
  CHECK(cmp.report.str().rfind("PASS violation=0 coupled_dominance_fraction=1\n", 0) == 0);

  Captured env;
  const auto zero = parse(
      "[model]\nfamily = euclidean\nn = 3\n"
      "[simulation]\nx0 = 1\nT = 20\ndt = 0.01\nn_paths = 50\nfloor = 0.1\n"
      "[verify]\nrate = zero\nt0 = 10\nc_grid = 4\n");
  CHECK(cli::cmd_verify(zero, "envelope", env.io()) == cli::kVerification);
  CHECK(env.out.str() == "C,fraction,exceed_count\n4,1,50\n");
  CHECK(env.report.str().rfind("FAIL", 0) == 0);

  Captured dy;
  const auto diri1 = parse("[model]\nfamily = constant\n[verify]\nc = 4\nlevels = 30\n");
  CHECK(cli::cmd_verify(diri1, "dyadic", dy.io()) == 0);
  CHECK(dy.report.str().rfind("PASS sum_bound=", 0) == 0);

  Captured lil;
  const auto bm = parse(
      "[simulation]\nx0 = 0\nfloor = -inf\nT = 100\ndt = 0.1\nn_paths = 100\n"
      "[verify]\nt0 = 10\n");
  CHECK(cli::cmd_verify(bm, "lil", lil.io()) == 0);

  Captured none;
  CHECK_ERROR_KIND(cli::cmd_verify(bm, "envelope", none.io()), ErrorKind::ConfigError);
  CHECK_ERROR_KIND(cli::cmd_verify(bm, "spiral", none.io()), ErrorKind::ConfigError);
}

}  // TEST_SUITE
