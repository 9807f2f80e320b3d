#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace framekit {

enum class ErrorKind {
  NonFinite,
  NotHermitian,
  NotPSD,
  NotPD,
  NotAFrame,
  NotInvertible,
  NotControlled,
  NotContractive,
  NotSemiNormalized,
  NonPositiveInput,
  LengthMismatch,
  DimMismatch,
  ZeroElement,
  NegativeRadicand,
  SpanFailure,
  InvalidLattice,
  MaskTooLarge,
  UnknownKind,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every library failure is reported through this type; kind() lets callers
// (notably the CLI) separate usage problems from mathematical ones.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace framekit
