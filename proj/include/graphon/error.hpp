#pragma once

#include <stdexcept>
#include <string>

namespace graphon {

enum class Errc {
  NonSymmetric,
  BadWeights,
  RangeViolation,
  WeightMismatch,
  RefinementTooLarge,
  TooLargeForExact,
  ComplexityCap,
  LabelMismatch,
  NoEvenCycle,
  BadCycleLength,
  EmptyPart,
  MassMismatch,
  DomainViolation,
  IterationCapExceeded,
  DivisibilityViolation,
  BoundNotMet,
  TooManyAtoms,
  CannotBridge,
  ConcentrationFailure,
  ParseError,
  ValidationError,
  BadArgument,
};

const char* errc_name(Errc c);

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace graphon
