#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tnn {

enum class ErrorCode {
  kShapeMismatch,
  kParseError,
  kBlobMismatch,
  kNonFiniteWeight,
  kIncompleteWeights,
  kNegativeVariance,
  kUnsupportedLayer,
  kInvalidIdentifier,
  kEmptyStream,
  kEmptyScores,
  kLengthMismatch,
  kShortCycle,
  kNonPositiveRated,
  kInvalidArgument,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// All toolchain failures surface as this type; `code()` says which contract
// was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tnn
