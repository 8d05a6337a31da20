#pragma once

#include <stdexcept>
#include <string>

namespace hslab {

enum class ErrorKind {
  ZeroDifferential,
  RootFindFailure,
  NoZeros,
  ChartMismatch,
  DegenerateChart,
  RegionOutOfBounds,
  SampleOutOfBounds,
  Overflow,
  DomainError,
  ValidationError,
  ConvergenceFailure,
  FitError,
  ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hslab
