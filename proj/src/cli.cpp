#include "escrate/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "escrate/verify.hpp"

namespace escrate::cli {

namespace {

void require(bool present, const char* section) {
  if (!present) fail(ErrorKind::ConfigError, std::string("missing [") + section + "] section");
}

SolverOptions solver_options(const SolverConfig& s) {
  SolverOptions opts;
  opts.quadrature_tol = s.tolerance;
  opts.inversion_tol = std::min(s.tolerance, opts.inversion_tol);
  opts.nominal_lower = s.r_lo;
  return opts;
}

void note(const Streams& io, const std::string& text) {
  if (!io.quiet && !text.empty()) io.diag << "note: " << text << '\n';
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

EnsembleSpec ensemble_spec(const SimulationConfig& s, bool store) {
  EnsembleSpec spec;
  spec.x0 = s.x0;
  spec.T = s.T;
  spec.dt = s.dt;
  spec.n_paths = s.n_paths;
  spec.master_seed = s.master_seed;
  spec.barrier = s.barrier;
  spec.store_paths = store;
  return spec;
}

std::string params_of(const ModelConfig& m) {
  if (m.family == "power") return "alpha=" + format_number(m.alpha);
  if (m.family == "squared_log") return "beta=" + format_number(m.beta);
  if (m.family == "tabulated") return "points=" + std::to_string(m.radii.size());
  return "none";
}

int envelope(const RunConfig& c, Streams io) {
  require(c.has_model, "model");
  require(c.has_simulation, "simulation");
  const auto& v = c.verify;
  const Sde1D sde = model_sde(c);
  RateFunction rate = RateFunction::zero();
  if (v.rate == "infinite") {
    rate = RateFunction::infinite();
  } else if (v.rate == "solver") {
    std::vector<double> grid = c.solver.t_grid;
    if (grid.empty()) {
      const auto [lo, hi] = std::minmax_element(v.c_grid.begin(), v.c_grid.end());
      const double first = v.t0 * *lo;
      if (!(first > 0.0)) fail(ErrorKind::ConfigError, "a solver rate needs t0 > 0");
      const double last = c.simulation.T * *hi;
      grid = parse_grid("geom(" + format_number(first) + "," + format_number(last) + ",400)");
    }
    rate = rate_table(model_profile(c.model), grid, 1.0, solver_options(c.solver));
    note(io, rate.shift_note());
  }
  const auto r = exceedance(sde, ensemble_spec(c.simulation, false), rate, v.c_grid, v.t0);
  io.out << "C,fraction,exceed_count\n";
  for (std::size_t j = 0; j < r.c_grid.size(); ++j) {
    io.out << format_number(r.c_grid[j]) << ',' << format_number(r.fractions[j]) << ','
           << r.exceed_counts[j] << '\n';
  }
  note(io, "floor=" + format_number(sde.floor) +
               " floor_hits=" + std::to_string(r.provenance.floor_hits));
  const double tail = r.fractions[std::distance(
      r.c_grid.begin(), std::max_element(r.c_grid.begin(), r.c_grid.end()))];
  const bool pass = nonincreasing(r.fractions) && tail <= v.max_fraction;
  io.report << (pass ? "PASS" : "FAIL") << " fraction_at_max_C=" << format_number(tail)
            << " max_fraction=" << format_number(v.max_fraction) << '\n';
  return pass ? kOk : kVerification;
}

int compare(const RunConfig& c, Streams io) {
  require(c.has_model, "model");
  require(c.has_simulation, "simulation");
  const auto& v = c.verify;
  const Sde1D dominated = model_sde(c);
  Sde1D dominating = dominated;
  if (v.dominating == "hyperbolic_bound") {
    dominating.drift = radial_drift(HyperbolicBound{c.model.n, c.model.curvature}, dominated.floor);
  } else if (v.dominating == "linear") {
    const double c0 = v.dominating_constant;
    const double c1 = v.dominating_inverse;
    dominating.drift = [c0, c1](double x) { return c0 + c1 / x; };
  }
  ComparisonParams p;
  p.r0 = c.simulation.x0;
  p.t = c.simulation.T;
  p.delta = v.delta;
  p.R = v.R;
  p.n_paths = c.simulation.n_paths;
  p.dt = c.simulation.dt;
  p.master_seed = c.simulation.master_seed;
  p.violation_sigmas = v.violation_sigmas;
  const auto r = comparison_mc(dominating, dominated, p);
  io.out << "quantity,estimate,std_error\n"
         << "lhs," << format_number(r.lhs.p) << ',' << format_number(r.lhs.std_error) << '\n'
         << "rhs," << format_number(r.rhs.p) << ',' << format_number(r.rhs.std_error) << '\n'
         << "coupled_dominance_fraction," << format_number(r.coupled_fraction) << ",\n";
  note(io, "lhs_seed=" + std::to_string(r.lhs_seed) + " rhs_seed=" + std::to_string(r.rhs_seed) +
               " floor=" + format_number(dominated.floor) +
               " floor_hits=" + std::to_string(r.floor_hits));
  const auto lip = c.simulation.lipschitz;
  const bool step_ok = lip && p.dt * *lip <= 1.0;
  const char* verdict = "PASS";
  if (r.violation || (step_ok && r.coupled_fraction != 1.0)) {
    verdict = "FAIL";
  } else if (!step_ok) {
    verdict = "INFO";
  }
  io.report << verdict << " violation=" << (r.violation ? 1 : 0)
            << " coupled_dominance_fraction=" << format_number(r.coupled_fraction) << '\n';
  return verdict[0] == 'F' ? kVerification : kOk;
}

int lil(const RunConfig& c, Streams io) {
  require(c.has_simulation, "simulation");
  Sde1D bm;
  bm.drift = [](double) { return 0.0; };
  bm.sigma = 1.0;
  bm.floor = c.simulation.floor;
  const auto r = lil_statistic(bm, ensemble_spec(c.simulation, false), c.verify.t0,
                               c.verify.eps_grid);
  io.out << "eps,fraction,exceed_count\n";
  for (std::size_t j = 0; j < r.eps_grid.size(); ++j) {
    io.out << format_number(r.eps_grid[j]) << ',' << format_number(r.fractions[j]) << ','
           << r.exceed_counts[j] << '\n';
  }
  note(io, "floor=" + format_number(bm.floor) +
               " floor_hits=" + std::to_string(r.provenance.floor_hits));
  const bool pass = nonincreasing(r.fractions);
  io.report << (pass ? "PASS" : "FAIL") << " nonincreasing=" << (pass ? 1 : 0) << '\n';
  return pass ? kOk : kVerification;
}

int dyadic(const RunConfig& c, Streams io) {
  require(c.has_model, "model");
  const auto s = dyadic_scheme(model_profile(c.model), c.verify.dyadic_c, c.verify.levels, 0.0,
                               solver_options(c.solver));
  io.out << "n,R_n,r_n,t_n,T_n,bound,partial_sum,summand,phi_next,check\n";
  bool ordered = true;
  for (const auto& row : s.rows) {
    io.out << row.n << ',' << format_number(row.big_r) << ',' << format_number(row.shell) << ','
           << format_number(row.step) << ',' << format_number(row.cumulative) << ','
           << format_number(row.bound) << ',' << format_number(row.partial_sum) << ','
           << format_number(row.summand) << ',' << format_number(row.phi_next) << ','
           << format_number(row.check) << '\n';
    ordered = ordered && row.check >= -1e-9 * row.cumulative;
  }
  const double total = s.total();
  const double tail = s.rows.empty() ? 0.0 : s.rows.back().bound;
  const bool pass = ordered && std::isfinite(total) && tail < 1e-3 * total;
  io.report << (pass ? "PASS" : "FAIL") << " sum_bound=" << format_number(total)
            << " tail_increment=" << format_number(tail) << '\n';
  return pass ? kOk : kVerification;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::DomainError:
      return kConfig;
    case ErrorKind::NonPositiveCoefficient:
    case ErrorKind::QuadratureFailure:
    case ErrorKind::OutOfRange:
    case ErrorKind::NonPositiveDenominator:
    case ErrorKind::FiniteTotalIntegral:
    case ErrorKind::NonMonotoneTransform:
    case ErrorKind::ExtrapolationError:
      return kSolver;
    case ErrorKind::SingularOrigin:
    case ErrorKind::NonFiniteState:
      return kSimulation;
    case ErrorKind::DriftOrderViolated:
      return kVerification;
  }
  return kConfig;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_rate(const RunConfig& c, Streams io) {
  require(c.has_model, "model");
  require(c.has_solver, "solver");
  io.out << "t,psi,psi_tilde\n";
  if (c.solver.t_grid.empty()) return kOk;
  const auto rate = rate_table(model_profile(c.model), c.solver.t_grid, c.solver.scale_c,
                               solver_options(c.solver));
  note(io, rate.shift_note());
  const bool radial = model_is_coefficient(c.model);
  const bool intrinsic = radial && c.model.mode == EnergyMode::UnitEnergy;
  std::optional<RadialCoefficient> coeff;
  if (intrinsic) coeff = model_coefficient(c.model);
  for (std::size_t i = 0; i < rate.times().size(); ++i) {
    const double psi = rate.values()[i];
    io.out << format_number(rate.times()[i]) << ',' << format_number(psi) << ',';
    if (intrinsic) {
      double tilde = std::numeric_limits<double>::infinity();
      try {
        tilde = rho_tilde_inverse(*coeff, psi);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OutOfRange) throw;
      }
      io.out << format_number(tilde);
    } else if (radial) {
      io.out << format_number(psi);
    }
    io.out << '\n';
  }
  return kOk;
}

int cmd_conserve(const RunConfig& c, Streams io) {
  require(c.has_model, "model");
  if (!model_is_coefficient(c.model)) {
    fail(ErrorKind::ConfigError, "conserve needs a radial coefficient family");
  }
  const auto r = conservativeness(model_coefficient(c.model), c.model.n);
  io.out << "verdict=" << verdict_name(r.verdict) << " family=" << c.model.family
         << " params=" << params_of(c.model);
  if (r.verdict == Verdict::Inconclusive) io.out << " leaning=" << leaning_name(r.leaning);
  io.out << '\n';
  note(io, r.basis);
  return kOk;
}

int cmd_simulate(const RunConfig& c, Streams io) {
  require(c.has_model, "model");
  require(c.has_simulation, "simulation");
  const Sde1D sde = model_sde(c);
  const bool full = c.simulation.output == "long";
  const auto e = ensemble(sde, ensemble_spec(c.simulation, full));
  if (full) {
    io.out << "path,step,t,x\n";
    for (std::size_t i = 0; i < e.spec.n_paths; ++i) {
      const auto path = e.path(i);
      for (std::size_t k = 0; k < path.size(); ++k) {
        io.out << i << ',' << k << ',' << format_number(e.time(k)) << ','
               << format_number(path[k]) << '\n';
      }
    }
  } else {
    io.out << "path,final,exitTime\n";
    for (std::size_t i = 0; i < e.spec.n_paths; ++i) {
      io.out << i << ',' << format_number(e.finals[i]) << ',';
      if (e.first_exit[i]) io.out << format_number(*e.first_exit[i]);
      io.out << '\n';
    }
  }
  note(io, "floor=" + format_number(sde.floor) +
               " floor_hits=" + std::to_string(e.total_floor_hits()));
  return kOk;
}

int cmd_verify(const RunConfig& c, const std::string& mode, Streams io) {
  if (mode == "envelope") return envelope(c, io);
  if (mode == "compare") return compare(c, io);
  if (mode == "lil") return lil(c, io);
  if (mode == "dyadic") return dyadic(c, io);
  fail(ErrorKind::ConfigError, "unknown verify mode '" + mode + "'");
}

int cmd_catalogue(Streams io) {
  const std::vector<CatalogueCase> cases{
      CatalogueCase::diri1(),       CatalogueCase::diri2(1.0),   CatalogueCase::diri3(0.0),
      CatalogueCase::diri3(1.0),    CatalogueCase::geo1(),       CatalogueCase::geo2(1.0),
      CatalogueCase::geo3(0.5),     CatalogueCase::geo3(1.0),    CatalogueCase::g_alpha(-1.0),
      CatalogueCase::g_alpha(0.0),  CatalogueCase::g_alpha(0.5), CatalogueCase::g_alpha(1.0),
      CatalogueCase::hyperbolic_linear(2, 1.0, 0.0)};
  for (const auto& c : cases) io.out << c.name() << ": " << closed_form_formula(c) << '\n';
  return kOk;
}

}  // namespace escrate::cli
