#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tfdw {

enum class ErrorCode {
  InvalidGridSize,
  NonpositiveLength,
  GridMismatch,
  InvalidArgument,
  Pole,
  Domain,
  Overflow,
  NonzeroMean,
  EmptyMeasure,
  NegativeDensity,
  ZeroBackground,
  Diverged,
  WitnessNotFound,
  RhsNonnegative,
  RootNotBracketed,
  InsufficientBins,
  NonpositiveValues,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library error. Every failure mode the public API can report carries a code
/// so callers (and tests) can branch on the kind rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tfdw
