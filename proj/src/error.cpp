#include "nematicflow/error.hpp"

#include <cstdio>

namespace nematicflow {

namespace {
std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}
}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::PoissonNotConverged: return "PoissonNotConverged";
    case ErrorKind::HelmholtzNotConverged: return "HelmholtzNotConverged";
    case ErrorKind::NonpositiveTemperature: return "NonpositiveTemperature";
    case ErrorKind::TemperaturePositivityLost: return "TemperaturePositivityLost";
    case ErrorKind::FieldBlowup: return "FieldBlowup";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::HypothesisViolation:
    case ErrorKind::InvalidArgument:
    case ErrorKind::GridMismatch:
      return 2;
    case ErrorKind::IoError:
      return 4;
    default:
      return 3;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

SolverNotConverged::SolverNotConverged(ErrorKind kind, double residual, int iterations)
    : Error(kind, "residual " + format_double(residual) + " after " +
                      std::to_string(iterations) + " iterations"),
      residual_(residual),
      iterations_(iterations) {}

ParseError::ParseError(int line, const std::string& message)
    : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + message), line_(line) {}

HypothesisViolation::HypothesisViolation(std::string key, std::string bound)
    : Error(ErrorKind::HypothesisViolation, key + " violates " + bound),
      key_(std::move(key)),
      bound_(std::move(bound)) {}

}  // namespace nematicflow
