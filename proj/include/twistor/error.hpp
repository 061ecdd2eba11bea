#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twistor {

enum class ErrorKind {
  InvalidArgument,
  NonSquare,
  NonSimpleSpectrum,
  OutsideOverlap,
  OutsideDomain,
  ZeroT,
  OutsideHalfSpace,
  NotSigmaInvariant,
  NotARealPoint,
  NoLimit,
  SingularGauge,
  DegeneratePencil,
  NotHypercomplexBase,
  TruncationUnstable,
  BranchCut,
  ZeroZeta,
  DegenerateLeading,
  NonSimplePoles,
  NotBased,
  NotCoprime,
  ParseError,
  SchemaError,
  VersionError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI report) can name it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace twistor
