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

#include "sbss/rtf_features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbss/error.hpp"

namespace sbss {

namespace {

// Relative floor on power-spectrum denominators.
constexpr double kGuardFloor = 1e-12;

void validate(const FeatureConfig& cfg, const Spectrogram& s) {
  if (cfg.smoothing_frames < 0 || cfg.smoothing_frames % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing frames T must be even and non-negative");
  }
  if (s.num_channels() < 2) {
    throw Error(ErrorCode::kInvalidDimension, "RTF features need at least two microphones");
  }
  if (cfg.ref_mic < 0 || cfg.ref_mic >= s.num_channels()) {
    throw Error(ErrorCode::kInvalidArgument, "reference microphone out of range");
  }
}

}  // namespace

std::vector<int> band_bins(const FeatureConfig& cfg, const StftConfig& stft_cfg) {
  const double nyquist = stft_cfg.sample_rate() / 2.0;
  if (cfg.band_lo_hz < 0.0 || cfg.band_hi_hz > nyquist + 1e-9 || cfg.band_lo_hz >= cfg.band_hi_hz) {
    throw Error(ErrorCode::kInvalidArgument, "band [" + std::to_string(cfg.band_lo_hz) + ", " +
                                                 std::to_string(cfg.band_hi_hz) +
                                                 ") is not inside [0, fs/2]");
  }
  std::vector<int> bins;
  for (int k = 0; k < stft_cfg.bins(); ++k) {
    const double f = stft_cfg.bin_frequency(k);
    if (f >= cfg.band_lo_hz && f < cfg.band_hi_hz) bins.push_back(k);
  }
  if (bins.empty()) throw Error(ErrorCode::kInvalidArgument, "band contains no frequency bins");
  return bins;
}

RtfTensor instantaneous_rtf(const Spectrogram& s, const FeatureConfig& cfg) {
  validate(cfg, s);
  RtfTensor r;
  r.bins = band_bins(cfg, s.config);
  const Index frames = s.frames();
  const Index nbins = static_cast<Index>(r.bins.size());
  const Eigen::MatrixXcd& ref = s.channels[static_cast<std::size_t>(cfg.ref_mic)];
  const Index half = cfg.smoothing_frames / 2;

  // |Y_ref|^2 over the band, and its windowed sums.
  Eigen::MatrixXd ref_power(frames, nbins);
  for (Index f = 0; f < nbins; ++f) ref_power.col(f) = ref.col(r.bins[static_cast<std::size_t>(f)]).cwiseAbs2();
  const double floor = kGuardFloor * ref_power.mean() * static_cast<double>(cfg.smoothing_frames + 1);

  Eigen::MatrixXd denom = Eigen::MatrixXd::Zero(frames, nbins);
  for (Index l = 0; l < frames; ++l) {
    const Index lo = std::max<Index>(0, l - half);
    const Index hi = std::min<Index>(frames - 1, l + half);
    for (Index n = lo; n <= hi; ++n) denom.row(l) += ref_power.row(n);
  }
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> guarded(frames, nbins);
  for (Index l = 0; l < frames; ++l) {
    for (Index f = 0; f < nbins; ++f) {
      guarded(l, f) = !(denom(l, f) > floor);
      if (guarded(l, f)) ++r.guarded;
    }
  }

  for (int m = 0; m < s.num_channels(); ++m) {
    if (m == cfg.ref_mic) continue;
    const Eigen::MatrixXcd& y = s.channels[static_cast<std::size_t>(m)];
    Eigen::MatrixXcd cross(frames, nbins);
    for (Index f = 0; f < nbins; ++f) {
      const int k = r.bins[static_cast<std::size_t>(f)];
      cross.col(f) = y.col(k).cwiseProduct(ref.col(k).conjugate());
    }
    Eigen::MatrixXcd ratio = Eigen::MatrixXcd::Zero(frames, nbins);
    for (Index l = 0; l < frames; ++l) {
      const Index lo = std::max<Index>(0, l - half);
      const Index hi = std::min<Index>(frames - 1, l + half);
      for (Index f = 0; f < nbins; ++f) {
        if (guarded(l, f)) continue;
        std::complex<double> acc = 0.0;
        for (Index n = lo; n <= hi; ++n) acc += cross(n, f);
        ratio(l, f) = acc / denom(l, f);
      }
    }
    r.ratios.push_back(std::move(ratio));
    r.mics.push_back(m);
  }
  return r;
}

RtfObservationSet assemble_features(const RtfTensor& r, const Spectrogram& s,
                                    const FeatureConfig& cfg) {
  validate(cfg, s);
  if (r.bins.empty()) throw Error(ErrorCode::kInvalidArgument, "band contains no frequency bins");
  const Index frames = s.frames();
  const Index nbins = static_cast<Index>(r.bins.size());
  const Index mics = static_cast<Index>(r.ratios.size());
  const Index dim = 2 * mics * nbins;
  const Eigen::MatrixXcd& ref = s.channels[static_cast<std::size_t>(cfg.ref_mic)];

  RtfObservationSet out;
  out.bins = r.bins;
  out.frame_energy = Eigen::VectorXd::Zero(frames);
  for (Index l = 0; l < frames; ++l) {
    for (int k : r.bins) out.frame_energy(l) += std::norm(ref(l, k));
  }
  const double peak = frames > 0 ? out.frame_energy.maxCoeff() : 0.0;
  if (!(peak > 0.0)) throw Error(ErrorCode::kEmptySelection, "every frame is silent in the band");
  const double gate = peak * std::pow(10.0, -cfg.energy_gate_db / 10.0);

  std::vector<Eigen::VectorXd> rows;
  for (Index l = 0; l < frames; ++l) {
    if (out.frame_energy(l) < gate) continue;
    Eigen::VectorXd a(dim);
    for (Index i = 0; i < mics; ++i) {
      const auto& ratio = r.ratios[static_cast<std::size_t>(i)];
      for (Index f = 0; f < nbins; ++f) {
        a(i * nbins + f) = ratio(l, f).real();
        a(mics * nbins + i * nbins + f) = ratio(l, f).imag();
      }
    }
    if (cfg.unit_norm) {
      const double norm = a.norm();
      if (!(norm > 0.0)) continue;
      a /= norm;
    }
    rows.push_back(std::move(a));
    out.kept_frames.push_back(l);
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptySelection, "energy gate removed every frame");

  out.features.unit_norm = cfg.unit_norm;
  out.features.rows.resize(static_cast<Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) out.features.rows.row(static_cast<Index>(i)) = rows[i].transpose();
  return out;
}

RtfObservationSet extract_features(const Spectrogram& s, const FeatureConfig& cfg) {
  return assemble_features(instantaneous_rtf(s, cfg), s, cfg);
}

}  // namespace sbss
