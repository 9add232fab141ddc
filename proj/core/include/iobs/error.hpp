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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iobs {

enum class ErrorCode {
  kDimensionMismatch,
  kNotSymmetric,
  kNotPositiveDefinite,
  kSingularSubmatrix,
  kNumericallySingularDiagonal,
  kKOutOfRange,
  kInvalidMask,
  kBatchOutOfRange,
  kSearchTooLarge,
  kUndefinedStepSize,
  kNonFiniteLoss,
  kImageLoadError,
  kEmptySignal,
  kParseError,
  kIoError,
  kInvalidArgument,
  kUnsupported,
};

std::string_view error_code_name(ErrorCode code);

/// True for failures caused by the numbers themselves (factorization,
/// singular pivots, divergence) as opposed to bad input or I/O.
bool is_numeric_failure(ErrorCode code);

/// The single exception type thrown by the library. The code is what callers
/// branch on; the message carries the diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iobs
