#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace siframes {

enum class ErrorKind {
  OverlapConflict,
  DegenerateInterval,
  LengthMismatch,
  InexactOperand,
  NonpositiveScale,
  LatticeMismatch,
  MissingGenerators,
  UnsupportedSupport,
  UnsupportedGenerator,
  DuplicateElements,
  DegenerateCoefficients,
  WindowTooLarge,
  InvalidArgument,
  ParseError,
  SchemaError,
  UnknownCommand,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace siframes
