#include "bhflow/types.hpp"

namespace bhflow {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Topology: return "topology";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    case ErrorCode::SingularFace: return "singular_face";
    case ErrorCode::DegenerateJacobian: return "degenerate_jacobian";
    case ErrorCode::NotAdmissible: return "not_admissible";
    case ErrorCode::DegenerateTriple: return "degenerate_triple";
    case ErrorCode::InvalidPoints: return "invalid_points";
    case ErrorCode::SolveFailure: return "solve_failure";
    case ErrorCode::OutsideDomain: return "outside_domain";
    case ErrorCode::FoldDetected: return "fold_detected";
    case ErrorCode::StepFailed: return "step_failed";
  }
  return "unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::Topology:
    case ErrorCode::Validation:
    case ErrorCode::Config:
    case ErrorCode::Io:
    case ErrorCode::DegenerateTriple:
    case ErrorCode::InvalidPoints:
      return true;
    default:
      return false;
  }
}

namespace {

template <class T>
T pairwise_impl(std::span<const T> xs) {
  if (xs.size() <= 8) {
    T acc{};
    for (const T& x : xs) acc += x;
    return acc;
  }
  const size_t half = xs.size() / 2;
  return pairwise_impl(xs.first(half)) + pairwise_impl(xs.subspan(half));
}

}  // namespace

cplx pairwise_sum(std::span<const cplx> values) {
  return pairwise_impl(values);
}

double pairwise_sum(std::span<const double> values) {
  return pairwise_impl(values);
}

}  // namespace bhflow
