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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbss {

enum class ErrorCode {
  kInvalidDimension,
  kInvalidArgument,
  kShapeMismatch,
  kNumericalFailure,
  kDegenerateSpectrum,
  kRankDeficiency,
  kSingularQ,
  kSignalTooShort,
  kNonCola,
  kEmptySelection,
  kEmptyFrameSet,
  kUnderdetermined,
  kLengthMismatch,
  kDegenerateReference,
  kIo,
  kConfig,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type. The code is stable
// and machine-checkable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

  // Same code, message prefixed with a pipeline stage label.
  Error with_stage(std::string_view stage) const;

 private:
  struct Raw {};
  Error(ErrorCode code, const std::string& full_message, Raw);

  ErrorCode code_;
};

}  // namespace sbss
