#include "symflow/errors.hpp"

namespace symflow {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::ClassificationUnstable: return "ClassificationUnstable";
    case ErrorKind::SpectrumPairingFailure: return "SpectrumPairingFailure";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::DegeneratePairing: return "DegeneratePairing";
    case ErrorKind::NotTotallyReal: return "NotTotallyReal";
    case ErrorKind::NotHalfDimensional: return "NotHalfDimensional";
    case ErrorKind::NotSymplectic: return "NotSymplectic";
    case ErrorKind::NotJCompatible: return "NotJCompatible";
    case ErrorKind::InconsistentSignature: return "InconsistentSignature";
    case ErrorKind::NonSymmetricInput: return "NonSymmetricInput";
    case ErrorKind::FlavorViolation: return "FlavorViolation";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace symflow
