#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "escrate/cli.hpp"

using namespace escrate;

int main(int argc, char** argv) {
  CLI::App app{"Escape-rate envelopes, conservativeness tests and radial SDE checks"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  app.add_option("--config", config_path, "INI configuration file");
  app.add_option("--out", out_path, "write CSV here instead of stdout");
  app.add_option("--seed", seed, "override [simulation] master_seed");
  app.add_flag("--quiet", quiet, "suppress notes on stderr");

  auto* rate = app.add_subcommand("rate", "tabulate psi and psi_tilde on the solver grid");
  auto* conserve = app.add_subcommand("conserve", "conservativeness verdict for the model");
  auto* simulate = app.add_subcommand("simulate", "simulate the radial SDE ensemble");
  auto* verify = app.add_subcommand("verify", "Monte Carlo and scheme checks");
  std::string mode;
  verify->add_option("mode", mode, "envelope, compare, lil or dyadic")
      ->required()
      ->check(CLI::IsMember({"envelope", "compare", "lil", "dyadic"}));
  auto* catalogue = app.add_subcommand("catalogue", "print the closed-form rates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfig;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "error: ConfigError: cannot write '" << out_path << "'\n";
      return cli::kConfig;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  cli::Streams io{out, std::cout, std::cerr, quiet};

  try {
    if (catalogue->parsed()) return cli::cmd_catalogue(io);
    if (config_path.empty()) fail(ErrorKind::ConfigError, "--config is required");
    RunConfig config = load_config(config_path);
    if (seed) config.simulation.master_seed = *seed;
    int code = cli::kOk;
    if (rate->parsed()) code = cli::cmd_rate(config, io);
    if (conserve->parsed()) code = cli::cmd_conserve(config, io);
    if (simulate->parsed()) code = cli::cmd_simulate(config, io);
    if (verify->parsed()) code = cli::cmd_verify(config, mode, io);
    out.flush();
    return code;
  } catch (const Error& e) {
    out.flush();
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for(e.kind());
  }
}
