#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "escrate/cli.hpp"
#include "escrate/rate_solver.hpp"

namespace py = pybind11;
using namespace escrate;

namespace {

CatalogueCase catalogue_case(const std::string& name, double parameter) {
  if (name == "diri1") return CatalogueCase::diri1();
  if (name == "diri2") return CatalogueCase::diri2(parameter);
  if (name == "diri3") return CatalogueCase::diri3(parameter);
  if (name == "geo1") return CatalogueCase::geo1();
  if (name == "geo2") return CatalogueCase::geo2(parameter);
  if (name == "geo3") return CatalogueCase::geo3(parameter);
  if (name == "g_alpha") return CatalogueCase::g_alpha(parameter);
  fail(ErrorKind::DomainError, "unknown catalogue case '" + name + "'");
}

py::tuple run_command(const std::string& config_text, const std::string& command,
                      const std::string& mode) {
  std::istringstream in(config_text);
  const RunConfig config = parse_config(in);
  std::ostringstream out, report, diag;
  int code = 0;
  {
    // The simulation commands run worker threads that never touch Python.
    py::gil_scoped_release release;
    cli::Streams io{out, report, diag, true};
    if (command == "rate") {
      code = cli::cmd_rate(config, io);
    } else if (command == "conserve") {
      code = cli::cmd_conserve(config, io);
    } else if (command == "simulate") {
      code = cli::cmd_simulate(config, io);
    } else if (command == "verify") {
      code = cli::cmd_verify(config, mode, io);
    } else if (command == "catalogue") {
      code = cli::cmd_catalogue(io);
    } else {
      fail(ErrorKind::ConfigError, "unknown command '" + command + "'");
    }
  }
  return py::make_tuple(code, out.str(), report.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rate functions, conservativeness tests and diffusion ensembles";

  static py::exception<Error> error(m, "EscrateError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      instance.attr("kind") = std::string(e.name());
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  py::class_<RadialCoefficient>(m, "RadialCoefficient")
      .def_static("constant", &RadialCoefficient::constant)
      .def_static("power", &RadialCoefficient::power, py::arg("alpha"))
      .def_static("squared_log", &RadialCoefficient::squared_log, py::arg("beta"))
      .def_static("tabulated", &RadialCoefficient::tabulated, py::arg("radii"),
                  py::arg("values"))
      .def("value", &RadialCoefficient::value)
      .def("derivative", &RadialCoefficient::derivative)
      .def("__repr__", &RadialCoefficient::describe);

  py::class_<GrowthProfile>(m, "GrowthProfile")
      .def("log_volume", &GrowthProfile::log_volume)
      .def("energy_bound", &GrowthProfile::energy_bound)
      .def_property_readonly("description", &GrowthProfile::description);

  m.def("rho_tilde", &rho_tilde, py::arg("coeff"), py::arg("s"));
  m.def("rho_tilde_inverse", &rho_tilde_inverse, py::arg("coeff"), py::arg("r"));

  m.def(
      "profile_from_radial",
      [](const RadialCoefficient& c, int n, const std::string& mode) {
        if (mode != "unit" && mode != "coefficient") {
          fail(ErrorKind::DomainError, "mode must be 'unit' or 'coefficient'");
        }
        return profile_from_radial(
            c, n, mode == "unit" ? EnergyMode::UnitEnergy : EnergyMode::CoefficientEnergy);
      },
      py::arg("coeff"), py::arg("n"), py::arg("mode") = "unit");
  m.def("power_volume_profile", &power_volume_profile, py::arg("exponent"));

  m.def(
      "effective_lower_limit",
      [](const GrowthProfile& p) { return effective_lower_limit(p); }, py::arg("profile"));
  m.def(
      "phi", [](const GrowthProfile& p, double R, double r_lo) { return phi(p, R, r_lo); },
      py::arg("profile"), py::arg("R"), py::arg("r_lo") = kNominalLowerLimit);
  m.def(
      "psi", [](const GrowthProfile& p, double t, double r_lo) { return psi(p, t, r_lo); },
      py::arg("profile"), py::arg("t"), py::arg("r_lo") = kNominalLowerLimit);
  m.def(
      "drift_rate",
      [](const std::function<double(double)>& drift, double lower, double t) {
        return drift_rate(drift, lower, t);
      },
      py::arg("drift"), py::arg("lower"), py::arg("t"),
      "g(t) with t = integral of 1/drift from lower to g.");

  m.def(
      "conservativeness",
      [](const RadialCoefficient& c) {
        return std::string(verdict_name(conservativeness(c).verdict));
      },
      py::arg("coeff"));
  m.def(
      "closed_form_rate",
      [](const std::string& name, double t, double parameter) {
        const auto r = closed_form_rate(catalogue_case(name, parameter), t);
        return py::make_tuple(r.psi, r.psi_tilde);
      },
      py::arg("case"), py::arg("t"), py::arg("parameter") = 0.0,
      "(psi, psi_tilde) for diri1..3, geo1..3 or g_alpha.");

  m.def("run_command", &run_command, py::arg("config"), py::arg("command"),
        py::arg("mode") = "",
        "Runs a CLI command on INI text; returns (exit_code, csv, report).");
}
