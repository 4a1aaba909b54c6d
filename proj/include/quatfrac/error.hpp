#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quatfrac {

enum class ErrorKind {
  NotOrthonormal,
  InvalidExponent,
  NonFinite,
  DomainError,
  InvalidOrder,
  MissingDerivative,
  OutsideDomain,
  SingularPoint,
  OnBoundary,
  SegmentHitsSingularity,
  NestingViolation,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace quatfrac
