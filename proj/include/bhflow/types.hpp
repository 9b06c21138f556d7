#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bhflow {

using cplx = std::complex<double>;

/// Per-vertex data, indexed by vertex id. Length checks happen at operation
/// entry, not in the container.
template <class T>
using VertexField = std::vector<T>;

enum class ErrorCode {
  Parse,
  Topology,
  Validation,
  Config,
  Io,
  SingularFace,
  DegenerateJacobian,
  NotAdmissible,
  DegenerateTriple,
  InvalidPoints,
  SolveFailure,
  OutsideDomain,
  FoldDetected,
  StepFailed,
};

const char* error_code_name(ErrorCode code);

/// True for codes caused by bad input (CLI exit 2), false for numerical
/// failures discovered mid-computation (CLI exit 3).
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

/// Deterministic pairwise reduction; the summation tree depends only on the
/// element count, so results are reproducible regardless of threading.
cplx pairwise_sum(std::span<const cplx> values);
double pairwise_sum(std::span<const double> values);

}  // namespace bhflow
