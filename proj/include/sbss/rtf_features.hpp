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

#include <Eigen/Dense>

#include "sbss/stft.hpp"
#include "sbss/types.hpp"

namespace sbss {

struct FeatureConfig {
  double band_lo_hz = 0.0;     // inclusive
  double band_hi_hz = 4500.0;  // exclusive
  int smoothing_frames = 2;    // T, even; averages over T+1 frames
  int ref_mic = 0;
  double energy_gate_db = 40.0;
  bool unit_norm = true;

  static FeatureConfig counting_band() { return FeatureConfig{500.0, 1500.0}; }
  static FeatureConfig separation_band() { return FeatureConfig{0.0, 4500.0}; }
};

// Bin indices k with band_lo <= f_k < band_hi. Throws kInvalidArgument if the
// band is empty or leaves [0, fs/2].
std::vector<int> band_bins(const FeatureConfig& cfg, const StftConfig& stft_cfg);

// Smoothed instantaneous ratios of every non-reference microphone to the
// reference over the band: ratios[i] is L x F for the i-th non-reference
// microphone in ascending order.
struct RtfTensor {
  std::vector<Eigen::MatrixXcd> ratios;
  std::vector<int> mics;  // microphone index of each entry of `ratios`
  std::vector<int> bins;  // spectrogram bin of each column
  Index guarded = 0;      // (l, f) cells whose denominator fell below the floor
};

RtfTensor instantaneous_rtf(const Spectrogram& s, const FeatureConfig& cfg);

// Rows are observation vectors a(l): real parts of all non-reference
// microphones over the band (microphone-major), followed by imaginary parts.
struct RtfObservationSet {
  ObservationSet features;         // L' x D, D = 2 (M-1) F
  std::vector<Index> kept_frames;  // spectrogram frame of each row
  std::vector<int> bins;
  Eigen::VectorXd frame_energy;    // reference-channel band energy of every frame
};

// Drops frames more than energy_gate_db below the loudest one (and all-zero
// rows when unit_norm is set). Throws kEmptySelection when nothing is left.
RtfObservationSet assemble_features(const RtfTensor& r, const Spectrogram& s,
                                    const FeatureConfig& cfg);

// Convenience: instantaneous_rtf followed by assemble_features.
RtfObservationSet extract_features(const Spectrogram& s, const FeatureConfig& cfg);

}  // namespace sbss
