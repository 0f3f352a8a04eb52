#include "tnn/error.hpp"

namespace tnn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kBlobMismatch: return "BlobMismatch";
    case ErrorCode::kNonFiniteWeight: return "NonFiniteWeight";
    case ErrorCode::kIncompleteWeights: return "IncompleteWeights";
    case ErrorCode::kNegativeVariance: return "NegativeVariance";
    case ErrorCode::kUnsupportedLayer: return "UnsupportedLayer";
    case ErrorCode::kInvalidIdentifier: return "InvalidIdentifier";
    case ErrorCode::kEmptyStream: return "EmptyStream";
    case ErrorCode::kEmptyScores: return "EmptyScores";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kShortCycle: return "ShortCycle";
    case ErrorCode::kNonPositiveRated: return "NonPositiveRated";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace tnn
