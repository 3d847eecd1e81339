#include "tfdw/error.hpp"

namespace tfdw {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidGridSize: return "invalid-n";
    case ErrorCode::NonpositiveLength: return "nonpositive-length";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::NonzeroMean: return "nonzero-mean";
    case ErrorCode::EmptyMeasure: return "empty-measure";
    case ErrorCode::NegativeDensity: return "negative-density";
    case ErrorCode::ZeroBackground: return "zero-background";
    case ErrorCode::Diverged: return "diverged";
    case ErrorCode::WitnessNotFound: return "witness-not-found";
    case ErrorCode::RhsNonnegative: return "rhs-nonnegative";
    case ErrorCode::RootNotBracketed: return "root-not-bracketed";
    case ErrorCode::InsufficientBins: return "insufficient-bins";
    case ErrorCode::NonpositiveValues: return "nonpositive-values";
    case ErrorCode::Io: return "io";
    case ErrorCode::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace tfdw
