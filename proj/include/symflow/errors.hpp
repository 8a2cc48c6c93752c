#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symflow {

enum class ErrorKind {
  InvalidArgument,
  RankDeficient,
  ClassificationUnstable,
  SpectrumPairingFailure,
  NotApplicable,
  DegeneratePairing,
  NotTotallyReal,
  NotHalfDimensional,
  NotSymplectic,
  NotJCompatible,
  InconsistentSignature,
  NonSymmetricInput,
  FlavorViolation,
  NotCritical,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so front ends can map
/// it onto exit codes or Python exception types.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace symflow
