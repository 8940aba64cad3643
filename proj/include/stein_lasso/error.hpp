#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stein {

enum class ErrorCode {
  DimensionMismatch,
  NotPositiveDefinite,
  EmptyMatrix,
  InvalidCorrelation,
  InvalidAlpha,
  MomentDiverges,
  DidNotConverge,
  DegenerateResponse,
  InvalidDimension,
  DivergentShrinkage,
  ZeroResidual,
  NoRootInBracket,
  NoFreeSlot,
  TooManyDegenerate,
  FileNotFound,
  ParseError,
  MissingValues,
  InvalidK,
  SplitTooSmall,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Numeric failures (everything except I/O and parsing) map to CLI exit code 3.
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stein
