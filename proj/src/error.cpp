#include "stereobench/error.hpp"

namespace stereobench {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OddWidth: return "OddWidth";
    case ErrorCode::ZeroDimension: return "ZeroDimension";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NonPositiveParam: return "NonPositiveParam";
    case ErrorCode::AllOccluded: return "AllOccluded";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::StepOutOfRange: return "StepOutOfRange";
    case ErrorCode::NonMonotoneSteps: return "NonMonotoneSteps";
    case ErrorCode::EmptyDirectory: return "EmptyDirectory";
    case ErrorCode::InsufficientRecords: return "InsufficientRecords";
    case ErrorCode::InsufficientAnnotations: return "InsufficientAnnotations";
    case ErrorCode::MissingCandidate: return "MissingCandidate";
    case ErrorCode::UnknownPairId: return "UnknownPairId";
    case ErrorCode::DuplicatePairId: return "DuplicatePairId";
    case ErrorCode::SourceOverlap: return "SourceOverlap";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace stereobench
