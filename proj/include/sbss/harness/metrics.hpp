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

#include "sbss/stft.hpp"

namespace sbss::harness {

// Reported in place of +infinity when a distortion term vanishes.
inline constexpr double kMetricCapDb = 200.0;
inline constexpr int kDistortionTaps = 512;

struct MetricsReport {
  std::vector<double> sir_db;       // per reference
  std::vector<double> sdr_db;       // per reference
  std::vector<int> permutation;     // permutation[j] = estimate matched to reference j
  double mean_sir() const;
  double mean_sdr() const;
};

// Projection-based SIR/SDR. Each estimate is split into the part explained
// by time-invariant filters (kDistortionTaps taps) of its reference, the
// part additionally explained by the other references (interference) and a
// residual (artifacts). The estimate/reference matching maximizes total SIR
// over all permutations. Throws kDegenerateReference for an all-zero
// reference, kLengthMismatch for unequal lengths.
MetricsReport sir_sdr(const MultiSignal& estimates, const MultiSignal& references,
                      int taps = kDistortionTaps);

// Per source: energy of its image over the summed energy of the others.
std::vector<double> input_sir_db(const MultiSignal& reference_images);

}  // namespace sbss::harness
