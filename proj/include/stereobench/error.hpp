#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stereobench {

enum class ErrorCode {
  OddWidth,
  ZeroDimension,
  DimensionMismatch,
  OutOfRange,
  EmptyInput,
  InvalidParams,
  TooSmall,
  LengthMismatch,
  DegenerateInput,
  NonPositiveParam,
  AllOccluded,
  InvalidRange,
  ShapeMismatch,
  StepOutOfRange,
  NonMonotoneSteps,
  EmptyDirectory,
  InsufficientRecords,
  InsufficientAnnotations,
  MissingCandidate,
  UnknownPairId,
  DuplicatePairId,
  SourceOverlap,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every library operation. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stereobench
