#pragma once

#include <stdexcept>
#include <string>

namespace tfi {

enum class ErrorKind {
  InvalidArgument,
  UnsupportedModel,
  DegenerateAmplitude,
  ModelValidation,
  BandCoverage,
  SolverFailure,
  HypothesisViolation,
  NoBifurcation,
  PhaseUndefined,
  ContourThroughZero,
  NotApplicable,
  Domain,
  Precondition,
  OutOfBranch,
  Singularity,
  Inconclusive,
  NonFinite,
};

const char* to_string(ErrorKind kind);

// Solver and quadrature failures, as opposed to bad inputs.
bool is_numerical(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tfi
