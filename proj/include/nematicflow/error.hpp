#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nematicflow {

enum class ErrorKind {
  GridMismatch,
  PoissonNotConverged,
  HelmholtzNotConverged,
  NonpositiveTemperature,
  TemperaturePositivityLost,
  FieldBlowup,
  ParseError,
  HypothesisViolation,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Process exit code used by the CLI for a given failure kind.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SolverNotConverged : public Error {
 public:
  SolverNotConverged(ErrorKind kind, double residual, int iterations);
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class HypothesisViolation : public Error {
 public:
  HypothesisViolation(std::string key, std::string bound);
  const std::string& key() const noexcept { return key_; }
  const std::string& bound() const noexcept { return bound_; }

 private:
  std::string key_;
  std::string bound_;
};

}  // namespace nematicflow
