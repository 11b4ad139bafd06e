#pragma once

#include <stdexcept>
#include <string>

namespace roofkit {

enum class ErrorKind {
  NonHermitianInput,
  NegativeEigenvalue,
  InvalidTrace,
  DomainError,
  NotIsometry,
  InvalidEnsemble,
  OptimizerDiverged,
  RankMismatch,
  DegenerateTrace,
  DegenerateFrame,
  NotSymmetric,
  OutOfRange,
  NoSignChange,
  NotHexagonRegime,
  UnknownTag,
  ParseError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitianInput: return "NonHermitianInput";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::InvalidTrace: return "InvalidTrace";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::InvalidEnsemble: return "InvalidEnsemble";
    case ErrorKind::OptimizerDiverged: return "OptimizerDiverged";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::DegenerateTrace: return "DegenerateTrace";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::NotHexagonRegime: return "NotHexagonRegime";
    case ErrorKind::UnknownTag: return "UnknownTag";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` identifies the violated
/// precondition or invariant.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace roofkit
