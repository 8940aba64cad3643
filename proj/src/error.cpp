#include "stein_lasso/error.hpp"

namespace stein {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::InvalidCorrelation: return "InvalidCorrelation";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::MomentDiverges: return "MomentDiverges";
    case ErrorCode::DidNotConverge: return "DidNotConverge";
    case ErrorCode::DegenerateResponse: return "DegenerateResponse";
    case ErrorCode::InvalidDimension: return "InvalidDimension";
    case ErrorCode::DivergentShrinkage: return "DivergentShrinkage";
    case ErrorCode::ZeroResidual: return "ZeroResidual";
    case ErrorCode::NoRootInBracket: return "NoRootInBracket";
    case ErrorCode::NoFreeSlot: return "NoFreeSlot";
    case ErrorCode::TooManyDegenerate: return "TooManyDegenerate";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingValues: return "MissingValues";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::SplitTooSmall: return "SplitTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound:
    case ErrorCode::ParseError:
    case ErrorCode::MissingValues:
    case ErrorCode::InvalidK:
    case ErrorCode::InvalidArgument:
      return true;
    default:
      return false;
  }
}

}  // namespace stein
