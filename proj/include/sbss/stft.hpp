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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sbss/types.hpp"

namespace sbss {

using Signal = std::vector<double>;
using MultiSignal = std::vector<Signal>;  // channel-major

enum class WindowKind { kHann, kRectangular };
enum class PaddingMode { kReflect, kNone };

// Analysis parameters. The constructor validates them: N >= 16, overlap in
// [0,1), N * (1 - overlap) a positive integer, and the window satisfying
// constant overlap-add at that hop (kNonCola otherwise).
class StftConfig {
 public:
  StftConfig(int window_len = 2048, double overlap = 0.75, WindowKind window = WindowKind::kHann,
             double sample_rate = 16000.0, PaddingMode padding = PaddingMode::kReflect);

  int window_len() const { return window_len_; }
  double overlap() const { return overlap_; }
  int hop() const { return hop_; }
  int bins() const { return window_len_ / 2 + 1; }
  WindowKind window_kind() const { return window_kind_; }
  double sample_rate() const { return sample_rate_; }
  PaddingMode padding() const { return padding_; }
  const std::vector<double>& window() const { return window_; }

  // Center frequency of bin k in Hz.
  double bin_frequency(int k) const { return k * sample_rate_ / window_len_; }

  // Samples prepended before framing (N - hop for reflect padding).
  int front_padding() const;
  // Number of frames produced for a signal of `length` samples.
  Index frame_count(Index length) const;

 private:
  int window_len_;
  double overlap_;
  int hop_;
  WindowKind window_kind_;
  double sample_rate_;
  PaddingMode padding_;
  std::vector<double> window_;
};

// Periodic Hann (w[n] = 0.5 - 0.5 cos(2 pi n / N)) or all-ones.
std::vector<double> make_window(WindowKind kind, int n);

// M channels, each an L x K matrix of one-sided spectra (row = frame).
struct Spectrogram {
  std::vector<Eigen::MatrixXcd> channels;
  StftConfig config;
  Index signal_length = 0;

  Index num_channels() const { return static_cast<Index>(channels.size()); }
  Index frames() const { return channels.empty() ? 0 : channels.front().rows(); }
  Index bins() const { return channels.empty() ? 0 : channels.front().cols(); }
};

// Throws kSignalTooShort if a channel is shorter than N, kLengthMismatch if
// channels differ in length.
Spectrogram stft(const MultiSignal& x, const StftConfig& cfg);

// Weighted overlap-add with the analysis window as synthesis window. The
// output has the original signal length; samples no frame covers (only
// possible without padding) are zero.
MultiSignal istft(const Spectrogram& s);

}  // namespace sbss
