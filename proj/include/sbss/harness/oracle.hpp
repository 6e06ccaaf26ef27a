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

#include <vector>

#include "sbss/separation.hpp"
#include "sbss/stft.hpp"

namespace sbss::harness {

// Frame sets chosen from the true per-speaker images.
struct OracleSelection {
  std::vector<std::vector<Index>> sets;  // spectrogram frame indices per speaker
  Eigen::MatrixXd fraction;              // L x J energy fraction at the reference mic
  double gamma = 0.0;
};

// Speaker-j frames are those whose reference-microphone energy fraction
// E_j(l) / sum_i E_i(l) is strictly above gamma. Frames with no energy at
// all belong to nobody. Throws kInvalidArgument unless 0 < gamma < 1.
OracleSelection semi_ideal_sets(const std::vector<Spectrogram>& images, double gamma,
                                int ref_mic = 0);

// Semi-ideal threshold by speaker count: 0.95, 0.9, 0.8 for J = 2, 3, 4;
// 0.95 for J = 1 and 0.8 beyond 4.
double default_gamma(int speakers);

// Full-signal cross/auto-power ratio of each speaker's own image.
RtfEstimate ideal_rtf(const std::vector<Spectrogram>& images, int ref_mic = 0);

}  // namespace sbss::harness
