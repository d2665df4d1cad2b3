#include "tfi/errors.hpp"

namespace tfi {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::UnsupportedModel: return "unsupported-model";
    case ErrorKind::DegenerateAmplitude: return "degenerate-amplitude";
    case ErrorKind::ModelValidation: return "model-validation";
    case ErrorKind::BandCoverage: return "band-coverage";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::HypothesisViolation: return "hypothesis-violation";
    case ErrorKind::NoBifurcation: return "no-bifurcation";
    case ErrorKind::PhaseUndefined: return "phase-undefined";
    case ErrorKind::ContourThroughZero: return "contour-through-zero";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::OutOfBranch: return "out-of-branch";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Inconclusive: return "inconclusive";
    case ErrorKind::NonFinite: return "non-finite";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SolverFailure:
    case ErrorKind::Inconclusive:
    case ErrorKind::NonFinite:
    case ErrorKind::ContourThroughZero:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace tfi
