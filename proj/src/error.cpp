#include "hslab/error.hpp"

namespace hslab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroDifferential: return "ZeroDifferential";
    case ErrorKind::RootFindFailure: return "RootFindFailure";
    case ErrorKind::NoZeros: return "NoZeros";
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::DegenerateChart: return "DegenerateChart";
    case ErrorKind::RegionOutOfBounds: return "RegionOutOfBounds";
    case ErrorKind::SampleOutOfBounds: return "SampleOutOfBounds";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::FitError: return "FitError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace hslab
