#include "nhs/errors.hpp"

namespace nhs {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnsupportedIndex: return "UnsupportedIndex";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BoundaryViolation: return "BoundaryViolation";
    case ErrorKind::NotEigenvalue: return "NotEigenvalue";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::PeriodicityViolation: return "PeriodicityViolation";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SingularS: return "SingularS";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::FitRejected: return "FitRejected";
    case ErrorKind::OutOfRegime: return "OutOfRegime";
    case ErrorKind::NotQuasiHermitian: return "NotQuasiHermitian";
    case ErrorKind::OrthogonalityViolation: return "OrthogonalityViolation";
    case ErrorKind::ParamViolation: return "ParamViolation";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::AnticommutationViolation: return "AnticommutationViolation";
    case ErrorKind::SingularJ: return "SingularJ";
    case ErrorKind::NotInvolution: return "NotInvolution";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::CommutantViolation: return "CommutantViolation";
    case ErrorKind::NotIntertwiner: return "NotIntertwiner";
    case ErrorKind::SizeLimit: return "SizeLimit";
  }
  return "Unknown";
}

}  // namespace nhs
