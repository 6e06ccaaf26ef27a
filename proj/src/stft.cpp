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

#include "sbss/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "sbss/error.hpp"
#include "sbss/fft.hpp"

namespace sbss {

std::vector<double> make_window(WindowKind kind, int n) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0);
  if (kind == WindowKind::kHann) {
    for (int i = 0; i < n; ++i) {
      w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    }
  }
  return w;
}

StftConfig::StftConfig(int window_len, double overlap, WindowKind window, double sample_rate,
                       PaddingMode padding)
    : window_len_(window_len),
      overlap_(overlap),
      hop_(0),
      window_kind_(window),
      sample_rate_(sample_rate),
      padding_(padding) {
  if (window_len < 16) throw Error(ErrorCode::kInvalidArgument, "window length must be >= 16");
  if (!(overlap >= 0.0 && overlap < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "overlap must lie in [0,1)");
  }
  if (!(sample_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  const double hop = window_len * (1.0 - overlap);
  hop_ = static_cast<int>(std::lround(hop));
  if (hop_ < 1 || std::abs(hop - hop_) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument,
                "N * (1 - overlap) = " + std::to_string(hop) + " is not a positive integer");
  }
  window_ = make_window(window, window_len);

  // Constant overlap-add: sum_k w[n + k hop] independent of n.
  std::vector<double> sums(static_cast<std::size_t>(hop_), 0.0);
  for (int i = 0; i < window_len; ++i) sums[static_cast<std::size_t>(i % hop_)] += window_[static_cast<std::size_t>(i)];
  const auto [lo, hi] = std::minmax_element(sums.begin(), sums.end());
  if (!(*hi > 0.0) || (*hi - *lo) > 1e-10 * *hi) {
    throw Error(ErrorCode::kNonCola, "window is not constant overlap-add at hop " +
                                         std::to_string(hop_));
  }
}

int StftConfig::front_padding() const {
  return padding_ == PaddingMode::kReflect ? window_len_ - hop_ : 0;
}

Index StftConfig::frame_count(Index length) const {
  if (length < window_len_) return 0;
  if (padding_ == PaddingMode::kNone) return 1 + (length - window_len_) / hop_;
  const Index padded = length + 2 * static_cast<Index>(front_padding());
  return 1 + (padded - window_len_ + hop_ - 1) / hop_;
}

namespace {

// Reflect (edge sample not repeated) on the left by `front`, then the same on
// the right, then zeros up to `total`.
Signal pad_channel(const Signal& x, int front, Index total) {
  const Index n = static_cast<Index>(x.size());
  Signal out(static_cast<std::size_t>(total), 0.0);
  for (Index i = 0; i < static_cast<Index>(total); ++i) {
    Index src = i - front;
    if (src < 0) src = -src;
    if (src >= n) {
      const Index mirrored = 2 * (n - 1) - src;
      if (mirrored < 0 || src - (n - 1) > front) continue;
      src = mirrored;
    }
    out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(src)];
  }
  return out;
}

}  // namespace

Spectrogram stft(const MultiSignal& x, const StftConfig& cfg) {
  if (x.empty()) throw Error(ErrorCode::kInvalidDimension, "signal has no channels");
  const Index length = static_cast<Index>(x.front().size());
  for (const auto& ch : x) {
    if (static_cast<Index>(ch.size()) != length) {
      throw Error(ErrorCode::kLengthMismatch, "channels differ in length");
    }
  }
  const int n = cfg.window_len();
  if (length < n) {
    throw Error(ErrorCode::kSignalTooShort, "signal of " + std::to_string(length) +
                                                " samples is shorter than the window (" +
                                                std::to_string(n) + ")");
  }
  const Index frames = cfg.frame_count(length);
  const int hop = cfg.hop();
  const int front = cfg.front_padding();
  const Index total = (frames - 1) * hop + n;

  const RealFft fft(n);
  const auto& w = cfg.window();
  Spectrogram s{{}, cfg, length};
  s.channels.reserve(x.size());
  std::vector<double> frame(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(cfg.bins()));
  for (const auto& ch : x) {
    const Signal padded = front > 0 ? pad_channel(ch, front, total) : ch;
    Eigen::MatrixXcd m(frames, cfg.bins());
    for (Index l = 0; l < frames; ++l) {
      const std::size_t start = static_cast<std::size_t>(l * hop);
      for (int i = 0; i < n; ++i) {
        frame[static_cast<std::size_t>(i)] =
            padded[start + static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
      }
      fft.forward(frame, spec);
      for (int k = 0; k < cfg.bins(); ++k) m(l, k) = spec[static_cast<std::size_t>(k)];
    }
    s.channels.push_back(std::move(m));
  }
  return s;
}

MultiSignal istft(const Spectrogram& s) {
  const StftConfig& cfg = s.config;
  const int n = cfg.window_len();
  const int hop = cfg.hop();
  const Index frames = s.frames();
  if (s.bins() != cfg.bins() && !s.channels.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "spectrogram bins do not match the configuration");
  }
  const Index total = frames > 0 ? (frames - 1) * hop + n : 0;
  const int front = cfg.front_padding();
  const auto& w = cfg.window();

  std::vector<double> norm(static_cast<std::size_t>(total), 0.0);
  for (Index l = 0; l < frames; ++l) {
    for (int i = 0; i < n; ++i) {
      norm[static_cast<std::size_t>(l * hop + i)] += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
    }
  }
  const double norm_floor = 1e-10 * (norm.empty() ? 0.0 : *std::max_element(norm.begin(), norm.end()));

  const RealFft fft(n);
  MultiSignal out;
  out.reserve(s.channels.size());
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(cfg.bins()));
  std::vector<double> frame(static_cast<std::size_t>(n));
  const double scale = 1.0 / n;
  for (const auto& m : s.channels) {
    std::vector<double> acc(static_cast<std::size_t>(total), 0.0);
    for (Index l = 0; l < frames; ++l) {
      for (int k = 0; k < cfg.bins(); ++k) spec[static_cast<std::size_t>(k)] = m(l, k);
      // DC and Nyquist must be real for a real inverse.
      spec.front() = spec.front().real();
      if (n % 2 == 0) spec.back() = spec.back().real();
      fft.inverse(spec, frame);
      for (int i = 0; i < n; ++i) {
        acc[static_cast<std::size_t>(l * hop + i)] +=
            frame[static_cast<std::size_t>(i)] * scale * w[static_cast<std::size_t>(i)];
      }
    }
    Signal y(static_cast<std::size_t>(s.signal_length), 0.0);
    for (Index t = 0; t < s.signal_length; ++t) {
      const Index src = t + front;
      if (src >= total) break;
      const double d = norm[static_cast<std::size_t>(src)];
      if (d > norm_floor) y[static_cast<std::size_t>(t)] = acc[static_cast<std::size_t>(src)] / d;
    }
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace sbss
