#include "escrate/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace escrate {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double to_double(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
    fail(ErrorKind::ConfigError, "not a number: '" + t + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size()) {
    fail(ErrorKind::ConfigError, "not an unsigned integer: '" + t + "'");
  }
  return v;
}

std::vector<double> to_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(to_double(item));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

std::map<std::string, Setter> setters() {
  std::map<std::string, Setter> s;
  // [model]
  s["model.family"] = [](RunConfig& c, const std::string& v) { c.model.family = v; };
  s["model.alpha"] = [](RunConfig& c, const std::string& v) { c.model.alpha = to_double(v); };
  s["model.beta"] = [](RunConfig& c, const std::string& v) { c.model.beta = to_double(v); };
  s["model.n"] = [](RunConfig& c, const std::string& v) {
    const auto n = to_u64(v);
    if (n < 1 || n > 1000) fail(ErrorKind::ConfigError, "n must be in [1, 1000]");
    c.model.n = static_cast<int>(n);
  };
  s["model.mode"] = [](RunConfig& c, const std::string& v) {
    if (v == "unit") {
      c.model.mode = EnergyMode::UnitEnergy;
    } else if (v == "coefficient") {
      c.model.mode = EnergyMode::CoefficientEnergy;
    } else {
      fail(ErrorKind::ConfigError, "mode must be 'unit' or 'coefficient'");
    }
  };
  s["model.curvature"] = [](RunConfig& c, const std::string& v) {
    c.model.curvature = to_double(v);
  };
  s["model.radii"] = [](RunConfig& c, const std::string& v) { c.model.radii = to_list(v); };
  s["model.values"] = [](RunConfig& c, const std::string& v) { c.model.values = to_list(v); };
  s["model.drift_constant"] = [](RunConfig& c, const std::string& v) {
    c.model.drift_constant = to_double(v);
  };
  s["model.drift_inverse"] = [](RunConfig& c, const std::string& v) {
    c.model.drift_inverse = to_double(v);
  };
  // [solver]
  s["solver.r_lo"] = [](RunConfig& c, const std::string& v) { c.solver.r_lo = to_double(v); };
  s["solver.tolerance"] = [](RunConfig& c, const std::string& v) {
    c.solver.tolerance = to_double(v);
  };
  s["solver.scale_c"] = [](RunConfig& c, const std::string& v) {
    c.solver.scale_c = to_double(v);
  };
  s["solver.t_grid"] = [](RunConfig& c, const std::string& v) { c.solver.t_grid = parse_grid(v); };
  // [simulation]
  s["simulation.x0"] = [](RunConfig& c, const std::string& v) { c.simulation.x0 = to_double(v); };
  s["simulation.T"] = [](RunConfig& c, const std::string& v) { c.simulation.T = to_double(v); };
  s["simulation.dt"] = [](RunConfig& c, const std::string& v) { c.simulation.dt = to_double(v); };
  s["simulation.n_paths"] = [](RunConfig& c, const std::string& v) {
    c.simulation.n_paths = to_u64(v);
  };
  s["simulation.master_seed"] = [](RunConfig& c, const std::string& v) {
    c.simulation.master_seed = to_u64(v);
  };
  s["simulation.floor"] = [](RunConfig& c, const std::string& v) {
    c.simulation.floor = to_double(v);
  };
  s["simulation.barrier"] = [](RunConfig& c, const std::string& v) {
    c.simulation.barrier = to_double(v);
  };
  s["simulation.sigma"] = [](RunConfig& c, const std::string& v) {
    c.simulation.sigma = to_double(v);
  };
  s["simulation.lipschitz"] = [](RunConfig& c, const std::string& v) {
    c.simulation.lipschitz = to_double(v);
  };
  s["simulation.output"] = [](RunConfig& c, const std::string& v) {
    if (v != "long" && v != "summary") {
      fail(ErrorKind::ConfigError, "output must be 'long' or 'summary'");
    }
    c.simulation.output = v;
  };
  // [verify]
  s["verify.c_grid"] = [](RunConfig& c, const std::string& v) { c.verify.c_grid = parse_grid(v); };
  s["verify.eps_grid"] = [](RunConfig& c, const std::string& v) {
    c.verify.eps_grid = parse_grid(v);
  };
  s["verify.t0"] = [](RunConfig& c, const std::string& v) { c.verify.t0 = to_double(v); };
  s["verify.delta"] = [](RunConfig& c, const std::string& v) { c.verify.delta = to_double(v); };
  s["verify.R"] = [](RunConfig& c, const std::string& v) { c.verify.R = to_double(v); };
  s["verify.rate"] = [](RunConfig& c, const std::string& v) {
    if (v != "solver" && v != "zero" && v != "infinite") {
      fail(ErrorKind::ConfigError, "rate must be 'solver', 'zero' or 'infinite'");
    }
    c.verify.rate = v;
  };
  s["verify.max_fraction"] = [](RunConfig& c, const std::string& v) {
    c.verify.max_fraction = to_double(v);
  };
  s["verify.dominating"] = [](RunConfig& c, const std::string& v) {
    if (v != "same" && v != "hyperbolic_bound" && v != "linear") {
      fail(ErrorKind::ConfigError, "dominating must be 'same', 'hyperbolic_bound' or 'linear'");
    }
    c.verify.dominating = v;
  };
  s["verify.dominating_constant"] = [](RunConfig& c, const std::string& v) {
    c.verify.dominating_constant = to_double(v);
  };
  s["verify.dominating_inverse"] = [](RunConfig& c, const std::string& v) {
    c.verify.dominating_inverse = to_double(v);
  };
  s["verify.violation_sigmas"] = [](RunConfig& c, const std::string& v) {
    c.verify.violation_sigmas = to_double(v);
  };
  s["verify.c"] = [](RunConfig& c, const std::string& v) { c.verify.dyadic_c = to_double(v); };
  s["verify.levels"] = [](RunConfig& c, const std::string& v) {
    const auto n = to_u64(v);
    if (n < 1 || n > 1000) fail(ErrorKind::ConfigError, "levels must be in [1, 1000]");
    c.verify.levels = static_cast<int>(n);
  };
  return s;
}

void check_ranges(const RunConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorKind::ConfigError, what);
  };
  const std::vector<std::string> families{"constant",  "power",      "squared_log",
                                          "tabulated", "euclidean",  "hyperbolic",
                                          "hyperbolic_bound", "linear"};
  require(std::find(families.begin(), families.end(), c.model.family) != families.end(),
          "unknown model family '" + c.model.family + "'");
  require(c.model.radii.size() == c.model.values.size(), "radii and values differ in length");
  require(c.solver.r_lo > 1.0 && std::isfinite(c.solver.r_lo), "r_lo must be a finite value > 1");
  require(c.solver.tolerance > 0.0 && c.solver.tolerance < 1e-2, "tolerance must be in (0, 1e-2)");
  require(c.solver.scale_c > 0.0 && std::isfinite(c.solver.scale_c), "scale_c must be > 0");
  for (std::size_t i = 0; i < c.solver.t_grid.size(); ++i) {
    require(c.solver.t_grid[i] > 0.0 && std::isfinite(c.solver.t_grid[i]),
            "t_grid entries must be finite and > 0");
    require(i == 0 || c.solver.t_grid[i] > c.solver.t_grid[i - 1],
            "t_grid must be strictly increasing");
  }
  const auto& s = c.simulation;
  require(s.dt > 0.0 && std::isfinite(s.dt), "dt must be > 0");
  require(s.T >= s.dt && std::isfinite(s.T), "T must be finite and >= dt");
  require(s.n_paths >= 1, "n_paths must be >= 1");
  require(std::isfinite(s.x0) && s.x0 >= s.floor, "x0 must be finite and >= floor");
  require(s.sigma >= 0.0 && std::isfinite(s.sigma), "sigma must be finite and >= 0");
  require(!s.lipschitz || *s.lipschitz > 0.0, "lipschitz must be > 0");
  require(!(s.floor > 0.0 && std::isinf(s.floor)) && !std::isnan(s.floor), "floor must be < inf");
  const auto& v = c.verify;
  for (double x : v.c_grid) require(x > 0.0 && std::isfinite(x), "c_grid entries must be > 0");
  for (double x : v.eps_grid) require(x >= 0.0, "eps_grid entries must be >= 0");
  require(!v.c_grid.empty() && v.c_grid.size() <= 64, "c_grid needs 1 to 64 values");
  require(!v.eps_grid.empty() && v.eps_grid.size() <= 64, "eps_grid needs 1 to 64 values");
  require(v.t0 >= 0.0 && std::isfinite(v.t0), "t0 must be finite and >= 0");
  require(v.delta > 0.0 && v.delta < v.R, "need 0 < delta < R");
  require(v.max_fraction >= 0.0 && v.max_fraction <= 1.0, "max_fraction must be in [0, 1]");
  require(v.violation_sigmas >= 0.0, "violation_sigmas must be >= 0");
  require(v.dyadic_c > 1.0 && std::isfinite(v.dyadic_c), "c must be > 1");
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("geom(", 0) == 0 && t.back() == ')') {
    const auto args = to_list(t.substr(5, t.size() - 6));
    if (args.size() != 3 || !(args[0] > 0.0) || !(args[1] > args[0]) || !(args[2] >= 2.0) ||
        args[2] != std::floor(args[2])) {
      fail(ErrorKind::ConfigError, "geom(start, stop, count) needs 0 < start < stop, count >= 2");
    }
    const auto count = static_cast<std::size_t>(args[2]);
    std::vector<double> out(count);
    const double ratio = std::log(args[1] / args[0]) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = args[0] * std::exp(ratio * i);
    out.back() = args[1];
    return out;
  }
  return to_list(t);
}

RunConfig parse_config(std::istream& in) {
  static const auto table = setters();
  RunConfig c;
  std::string section;
  std::string line;
  int number = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++number;
    const auto where = "line " + std::to_string(number) + ": ";
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorKind::ConfigError, where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "model") {
        c.has_model = true;
      } else if (section == "solver") {
        c.has_solver = true;
      } else if (section == "simulation") {
        c.has_simulation = true;
      } else if (section == "verify") {
        c.has_verify = true;
      } else {
        fail(ErrorKind::ConfigError, where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ConfigError, where + "expected key = value");
    if (section.empty()) fail(ErrorKind::ConfigError, where + "key outside of a section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const auto it = table.find(key);
    if (it == table.end()) fail(ErrorKind::ConfigError, where + "unknown key '" + key + "'");
    if (seen.count(key)) {
      fail(ErrorKind::ConfigError, where + "duplicate key '" + key + "' (first on line " +
                                       std::to_string(seen[key]) + ")");
    }
    seen[key] = number;
    try {
      it->second(c, trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      fail(ErrorKind::ConfigError, where + key + ": " + e.what());
    }
  }
  check_ranges(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open config '" + path + "'");
  return parse_config(in);
}

bool model_is_coefficient(const ModelConfig& m) {
  return m.family == "constant" || m.family == "power" || m.family == "squared_log" ||
         m.family == "tabulated";
}

RadialCoefficient model_coefficient(const ModelConfig& m) {
  if (m.family == "constant") return RadialCoefficient::constant();
  if (m.family == "power") return RadialCoefficient::power(m.alpha);
  if (m.family == "squared_log") return RadialCoefficient::squared_log(m.beta);
  if (m.family == "tabulated") return RadialCoefficient::tabulated(m.radii, m.values);
  fail(ErrorKind::ConfigError, "model family '" + m.family + "' has no radial coefficient");
}

GrowthProfile model_profile(const ModelConfig& m) {
  if (model_is_coefficient(m)) return profile_from_radial(model_coefficient(m), m.n, m.mode);
  if (m.family == "euclidean") return power_volume_profile(static_cast<double>(m.n));
  fail(ErrorKind::ConfigError, "model family '" + m.family + "' has no volume profile");
}

RealFn model_drift(const ModelConfig& m, double floor) {
  if (model_is_coefficient(m)) return radial_drift(model_coefficient(m), m.n, floor);
  if (m.family == "euclidean") return radial_drift(ManifoldModel::euclidean(m.n), floor);
  if (m.family == "hyperbolic") {
    return radial_drift(ManifoldModel::hyperbolic(m.n, m.curvature), floor);
  }
  if (m.family == "hyperbolic_bound") return radial_drift(HyperbolicBound{m.n, m.curvature}, floor);
  const double c0 = m.drift_constant;
  const double c1 = m.drift_inverse;
  if (c1 == 0.0) return [c0](double) { return c0; };
  return [c0, c1](double x) { return c0 + c1 / x; };
}

Sde1D model_sde(const RunConfig& c) {
  Sde1D s;
  s.floor = c.simulation.floor;
  s.drift = model_drift(c.model, s.floor);
  s.sigma = c.simulation.sigma;
  s.drift_lipschitz = c.simulation.lipschitz;
  return s;
}

}  // namespace escrate
