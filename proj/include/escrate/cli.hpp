#pragma once

#include <iosfwd>
#include <string>

#include "escrate/config.hpp"
#include "escrate/errors.hpp"

namespace escrate::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kSolver = 3,
  kSimulation = 4,
  kVerification = 5,
};

int exit_code_for(ErrorKind kind);

/// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

struct Streams {
  /// CSV destination.
  std::ostream& out;
  /// Verdict lines of the verify command.
  std::ostream& report;
  /// Notes and warnings; silenced by quiet.
  std::ostream& diag;
  bool quiet = false;
};

int cmd_rate(const RunConfig& config, Streams io);
int cmd_conserve(const RunConfig& config, Streams io);
int cmd_simulate(const RunConfig& config, Streams io);
/// mode is one of envelope, compare, lil, dyadic.
int cmd_verify(const RunConfig& config, const std::string& mode, Streams io);
int cmd_catalogue(Streams io);

}  // namespace escrate::cli
