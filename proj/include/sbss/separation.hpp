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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbss/convex_geometry.hpp"
#include "sbss/rtf_features.hpp"
#include "sbss/spectral_simplex.hpp"
#include "sbss/stft.hpp"

namespace sbss {

enum class RtfSource { kProposed, kIdeal, kSemiIdeal };
std::string to_string(RtfSource s);

// Per-speaker relative transfer functions over all K bins.
struct RtfEstimate {
  std::vector<Eigen::MatrixXcd> h;  // h[j] is M x K; the reference row is 1
  int ref_mic = 0;
  RtfSource source = RtfSource::kProposed;
  Index guarded = 0;

  Index speakers() const { return static_cast<Index>(h.size()); }
  Index mics() const { return h.empty() ? 0 : h.front().rows(); }
  Index bins() const { return h.empty() ? 0 : h.front().cols(); }
};

// Cross- over auto-power of the reference, summed over each speaker's frame
// set. `sets[j]` holds spectrogram frame indices. Throws kEmptyFrameSet
// naming the speaker whose set is empty.
RtfEstimate estimate_rtf(const Spectrogram& s, const std::vector<std::vector<Index>>& sets,
                         int ref_mic = 0);

// Per-bin weights b(f) = C (C^H C)^{-1}, C(m, j) = H_j^m(f).
struct UnmixingOperator {
  std::vector<Eigen::MatrixXcd> b;      // b[f] is M x J
  std::vector<bool> ill_conditioned;    // bins that received Tikhonov loading
  Index ill_conditioned_count() const;

  Index bins() const { return static_cast<Index>(b.size()); }
  Index speakers() const { return b.empty() ? 0 : b.front().cols(); }
};

// Reciprocal condition number of C^H C below which a bin is treated as
// ill-conditioned and loaded with lambda = kTikhonovScale * tr(C^H C) / J.
inline constexpr double kIllConditionedFloor = 1e-8;
inline constexpr double kTikhonovScale = 1e-8;

// Throws kUnderdetermined when M < J.
UnmixingOperator build_unmixer(const RtfEstimate& h);

// z_j(l, f) = b(f)^H y(l, f), then one inverse STFT per speaker.
MultiSignal separate(const Spectrogram& s, const UnmixingOperator& b);

// Separated spectra without the inverse transform (one channel per speaker).
Spectrogram unmix_spectra(const Spectrogram& s, const UnmixingOperator& b);

struct PipelineConfig {
  StftConfig stft{};
  FeatureConfig counting = FeatureConfig::counting_band();
  FeatureConfig separation = FeatureConfig::separation_band();
  double alpha = 0.12;
  double beta = 0.95;
  double beta_retry = 0.8;
  std::optional<Index> fixed_sources;  // skip counting when set
};

struct SeparationResult {
  Index estimated_count = 0;
  bool count_saturated = false;
  Eigen::VectorXd counting_spectrum;    // eigenvalues of the counting-band correlation
  Eigen::VectorXd separation_spectrum;  // eigenvalues of the separation-band correlation
  std::vector<Index> kept_frames;       // spectrogram frame of each embedding row
  SimplexEmbedding embedding;
  VertexSet vertices;
  RecoveredProbabilities probabilities;
  DominatedFrameSets dominated;         // embedding-row indices
  std::vector<std::vector<Index>> frame_sets;  // same sets as spectrogram frames
  bool beta_retried = false;
  RtfEstimate rtf;
  Index ill_conditioned_bins = 0;
  MultiSignal separated;                // one signal per speaker
  std::vector<std::string> log;
};

// The whole chain: STFT, counting-band features, correlation and count,
// separation-band features, embedding, vertices, probabilities, dominated
// frames (retried once at beta_retry if a set is empty), RTFs, unmixing.
// Errors carry the stage that raised them.
SeparationResult run_pipeline(const MultiSignal& x, const PipelineConfig& cfg);

// Same chain starting from an existing spectrogram.
SeparationResult run_pipeline(const Spectrogram& s, const PipelineConfig& cfg);

}  // namespace sbss
