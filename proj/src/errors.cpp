#include "escrate/errors.hpp"

namespace escrate {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SingularOrigin: return "SingularOrigin";
    case ErrorKind::NonPositiveDenominator: return "NonPositiveDenominator";
    case ErrorKind::FiniteTotalIntegral: return "FiniteTotalIntegral";
    case ErrorKind::NonMonotoneTransform: return "NonMonotoneTransform";
    case ErrorKind::ExtrapolationError: return "ExtrapolationError";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::DriftOrderViolated: return "DriftOrderViolated";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(error_name(kind)) + ": " + what);
}

}  // namespace escrate
