// Copyright 2026 The sbss Authors
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

#include "sbss/error.hpp"

namespace sbss {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDimension: return "invalid-dimension";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kNumericalFailure: return "numerical-failure";
    case ErrorCode::kDegenerateSpectrum: return "degenerate-spectrum";
    case ErrorCode::kRankDeficiency: return "rank-deficiency";
    case ErrorCode::kSingularQ: return "singular-q";
    case ErrorCode::kSignalTooShort: return "signal-too-short";
    case ErrorCode::kNonCola: return "non-cola";
    case ErrorCode::kEmptySelection: return "empty-selection";
    case ErrorCode::kEmptyFrameSet: return "empty-frame-set";
    case ErrorCode::kUnderdetermined: return "underdetermined";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kDegenerateReference: return "degenerate-reference";
    case ErrorCode::kIo: return "io-error";
    case ErrorCode::kConfig: return "config-error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error::Error(ErrorCode code, const std::string& full_message, Raw)
    : std::runtime_error(full_message), code_(code) {}

Error Error::with_stage(std::string_view stage) const {
  return Error(code_, "[" + std::string(stage) + "] " + what(), Raw{});
}

}  // namespace sbss
