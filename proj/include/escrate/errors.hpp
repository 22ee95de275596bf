#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace escrate {

/// Failure categories surfaced by the library. The CLI maps them onto its
/// exit-code contract, so the set is part of the public interface.
enum class ErrorKind {
  DomainError,
  NonPositiveCoefficient,
  QuadratureFailure,
  OutOfRange,
  SingularOrigin,
  NonPositiveDenominator,
  FiniteTotalIntegral,
  NonMonotoneTransform,
  ExtrapolationError,
  NonFiniteState,
  DriftOrderViolated,
  ConfigError,
};

std::string_view error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace escrate
