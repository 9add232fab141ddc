// Copyright 2026 The iobs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iobs/error.hpp"

namespace iobs {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kSingularSubmatrix: return "SingularSubmatrix";
    case ErrorCode::kNumericallySingularDiagonal: return "NumericallySingularDiagonal";
    case ErrorCode::kKOutOfRange: return "KOutOfRange";
    case ErrorCode::kInvalidMask: return "InvalidMask";
    case ErrorCode::kBatchOutOfRange: return "BatchOutOfRange";
    case ErrorCode::kSearchTooLarge: return "SearchTooLarge";
    case ErrorCode::kUndefinedStepSize: return "UndefinedStepSize";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kImageLoadError: return "ImageLoadError";
    case ErrorCode::kEmptySignal: return "EmptySignal";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnsupported: return "Unsupported";
  }
  return "Unknown";
}

bool is_numeric_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPositiveDefinite:
    case ErrorCode::kSingularSubmatrix:
    case ErrorCode::kNumericallySingularDiagonal:
    case ErrorCode::kUndefinedStepSize:
    case ErrorCode::kNonFiniteLoss:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace iobs
