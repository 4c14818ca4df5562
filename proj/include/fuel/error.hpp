#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fuel {

enum class ErrorCode {
  MissingFile,
  ParseError,
  ShapeMismatch,
  SelfLoop,
  DuplicateEdge,
  IndexOutOfRange,
  InvalidSplit,
  NonFiniteValue,
  NonFiniteGradient,
  NonFiniteLoss,
  LengthMismatch,
  DegenerateInput,
  DegenerateClustering,
  DegenerateLabels,
  EmptyPairSet,
  ComplementEmpty,
  EmptyInput,
  EmptySplit,
  EmptyEdgeSet,
  UnlabeledEndpoint,
  InvalidArgument,
  InvalidRegion,
  InfeasibleDegreeSequence,
  RetriesExhausted,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a code; the message starts with the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised from training loops so callers can report how far training got.
class TrainingError : public Error {
 public:
  TrainingError(ErrorCode code, int epoch, const std::string& detail);

  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

inline void require(bool condition, ErrorCode code, const std::string& detail) {
  if (!condition) fail(code, detail);
}

}  // namespace fuel
