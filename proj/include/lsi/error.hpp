#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsi {

enum class ErrorKind {
  NonpositiveWeight,
  MassNotNormalized,
  InvalidMeasure,
  ZeroScale,
  QuadratureFailure,
  BracketFailure,
  DomainError,
  SupremumNotLocalized,
  EmptyFamily,
  NonintegrableTestFunction,
  ConfigParseError,
  MeasureParseError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the toolkit; callers switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lsi
