#include "fuel/error.hpp"

namespace fuel {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidSplit: return "InvalidSplit";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::DegenerateClustering: return "DegenerateClustering";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::EmptyPairSet: return "EmptyPairSet";
    case ErrorCode::ComplementEmpty: return "ComplementEmpty";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptySplit: return "EmptySplit";
    case ErrorCode::EmptyEdgeSet: return "EmptyEdgeSet";
    case ErrorCode::UnlabeledEndpoint: return "UnlabeledEndpoint";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidRegion: return "InvalidRegion";
    case ErrorCode::InfeasibleDegreeSequence: return "InfeasibleDegreeSequence";
    case ErrorCode::RetriesExhausted: return "RetriesExhausted";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

TrainingError::TrainingError(ErrorCode code, int epoch, const std::string& detail)
    : Error(code, "epoch " + std::to_string(epoch) + ": " + detail), epoch_(epoch) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace fuel
