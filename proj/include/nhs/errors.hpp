#pragma once

#include <stdexcept>
#include <string>

namespace nhs {

enum class ErrorKind {
  UnsupportedIndex,
  DegenerateInput,
  NotConverged,
  DimensionMismatch,
  BoundaryViolation,
  NotEigenvalue,
  NotIrreducible,
  Singular,
  PeriodicityViolation,
  IndexOutOfRange,
  SingularS,
  ZeroVector,
  FitRejected,
  OutOfRegime,
  NotQuasiHermitian,
  OrthogonalityViolation,
  ParamViolation,
  NotPositive,
  AnticommutationViolation,
  SingularJ,
  NotInvolution,
  NotUnitary,
  CommutantViolation,
  NotIntertwiner,
  SizeLimit,
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

}  // namespace nhs
