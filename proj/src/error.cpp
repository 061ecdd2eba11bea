#include "twistor/error.hpp"

namespace twistor {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NonSimpleSpectrum: return "NonSimpleSpectrum";
    case ErrorKind::OutsideOverlap: return "OutsideOverlap";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::ZeroT: return "ZeroT";
    case ErrorKind::OutsideHalfSpace: return "OutsideHalfSpace";
    case ErrorKind::NotSigmaInvariant: return "NotSigmaInvariant";
    case ErrorKind::NotARealPoint: return "NotARealPoint";
    case ErrorKind::NoLimit: return "NoLimit";
    case ErrorKind::SingularGauge: return "SingularGauge";
    case ErrorKind::DegeneratePencil: return "DegeneratePencil";
    case ErrorKind::NotHypercomplexBase: return "NotHypercomplexBase";
    case ErrorKind::TruncationUnstable: return "TruncationUnstable";
    case ErrorKind::BranchCut: return "BranchCut";
    case ErrorKind::ZeroZeta: return "ZeroZeta";
    case ErrorKind::DegenerateLeading: return "DegenerateLeading";
    case ErrorKind::NonSimplePoles: return "NonSimplePoles";
    case ErrorKind::NotBased: return "NotBased";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::VersionError: return "VersionError";
  }
  return "Unknown";
}

}  // namespace twistor
