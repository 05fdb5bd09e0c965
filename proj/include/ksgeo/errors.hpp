// ksgeo - error types shared across modules
#pragma once

#include <stdexcept>
#include <string>

namespace ksgeo {

// Input violates a documented precondition (bad parameters, off-shell state,
// radius outside the admissible region).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Adaptive stepper could not meet the requested tolerances.
struct StepFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested eigenstate does not decay at the grid boundary.
struct GridTooSmallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Off-shell input to the Kepler->oscillator map; carries the shell residual.
struct ShellViolationError : PreconditionError {
  ShellViolationError(const std::string& what, double residual_)
      : PreconditionError(what), residual(residual_) {}
  double residual;
};

}  // namespace ksgeo
