#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bootpls {

enum class ErrorKind {
  InvalidArgument,
  NonFiniteInput,
  ZeroVarianceColumn,
  DegenerateDirection,
  TooManyComponents,
  DimensionMismatch,
  TooFewReplicates,
  EmptySupport,
  NoValidEta,
  SeparationDivergence,
  NonBinaryResponse,
  BoundaryNotIntegral,
  SingleClass,
  ParseError,
  MissingColumn,
  IoError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind. Every failure raised by the
/// library is an Error, so callers can map it to an exit code or a JSON record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::InvalidArgument, message);
}

}  // namespace bootpls
