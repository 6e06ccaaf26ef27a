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

#include "sbss/separation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbss/error.hpp"

namespace sbss {

std::string to_string(RtfSource s) {
  switch (s) {
    case RtfSource::kProposed: return "proposed";
    case RtfSource::kIdeal: return "ideal";
    case RtfSource::kSemiIdeal: return "semi-ideal";
  }
  return "unknown";
}

RtfEstimate estimate_rtf(const Spectrogram& s, const std::vector<std::vector<Index>>& sets,
                         int ref_mic) {
  if (ref_mic < 0 || ref_mic >= s.num_channels()) {
    throw Error(ErrorCode::kInvalidArgument, "reference microphone out of range");
  }
  const Index mics = s.num_channels();
  const Index bins = s.bins();
  const Index frames = s.frames();
  const Eigen::MatrixXcd& ref = s.channels[static_cast<std::size_t>(ref_mic)];
  const double mean_power = ref.cwiseAbs2().mean();

  RtfEstimate est;
  est.ref_mic = ref_mic;
  est.source = RtfSource::kProposed;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    const auto& set = sets[j];
    if (set.empty()) {
      throw Error(ErrorCode::kEmptyFrameSet,
                  "speaker " + std::to_string(j) + " has no dominated frames");
    }
    for (Index l : set) {
      if (l < 0 || l >= frames) throw Error(ErrorCode::kInvalidArgument, "frame index out of range");
    }
    const double floor = 1e-12 * mean_power * static_cast<double>(set.size());
    Eigen::VectorXd den = Eigen::VectorXd::Zero(bins);
    for (Index l : set) den += ref.row(l).cwiseAbs2().transpose();

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(mics, bins);
    for (Index m = 0; m < mics; ++m) {
      if (m == ref_mic) {
        h.row(m).setOnes();
        continue;
      }
      const Eigen::MatrixXcd& y = s.channels[static_cast<std::size_t>(m)];
      for (Index k = 0; k < bins; ++k) {
        if (!(den(k) > floor)) {
          ++est.guarded;
          continue;
        }
        std::complex<double> num = 0.0;
        for (Index l : set) num += y(l, k) * std::conj(ref(l, k));
        h(m, k) = num / den(k);
      }
    }
    est.h.push_back(std::move(h));
  }
  return est;
}

Index UnmixingOperator::ill_conditioned_count() const {
  return static_cast<Index>(std::count(ill_conditioned.begin(), ill_conditioned.end(), true));
}

UnmixingOperator build_unmixer(const RtfEstimate& h) {
  const Index speakers = h.speakers();
  const Index mics = h.mics();
  if (speakers < 1) throw Error(ErrorCode::kInvalidDimension, "no RTFs to invert");
  if (mics < speakers) {
    throw Error(ErrorCode::kUnderdetermined, std::to_string(mics) + " microphones cannot unmix " +
                                                 std::to_string(speakers) + " speakers");
  }
  const Index bins = h.bins();
  UnmixingOperator op;
  op.b.resize(static_cast<std::size_t>(bins));
  op.ill_conditioned.assign(static_cast<std::size_t>(bins), false);

  Eigen::MatrixXcd c(mics, speakers);
  for (Index k = 0; k < bins; ++k) {
    for (Index j = 0; j < speakers; ++j) c.col(j) = h.h[static_cast<std::size_t>(j)].col(k);
    Eigen::MatrixXcd gram = c.adjoint() * c;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    const double bottom = es.eigenvalues().minCoeff();
    if (!(top > 0.0) || bottom < kIllConditionedFloor * top) {
      op.ill_conditioned[static_cast<std::size_t>(k)] = true;
      double load = kTikhonovScale * gram.trace().real() / static_cast<double>(speakers);
      if (!(load > 0.0)) load = kTikhonovScale;
      gram.diagonal().array() += load;
    }
    // b = C G^{-1}  <=>  b^H = G^{-1} C^H (G Hermitian).
    op.b[static_cast<std::size_t>(k)] = gram.ldlt().solve(c.adjoint()).adjoint();
  }
  return op;
}

Spectrogram unmix_spectra(const Spectrogram& s, const UnmixingOperator& b) {
  if (b.bins() != s.bins()) {
    throw Error(ErrorCode::kShapeMismatch, "unmixing operator has " + std::to_string(b.bins()) +
                                               " bins, spectrogram has " + std::to_string(s.bins()));
  }
  const Index speakers = b.speakers();
  const Index mics = s.num_channels();
  if (!b.b.empty() && b.b.front().rows() != mics) {
    throw Error(ErrorCode::kShapeMismatch, "unmixing operator microphone count mismatch");
  }
  Spectrogram out{{}, s.config, s.signal_length};
  out.channels.assign(static_cast<std::size_t>(speakers),
                      Eigen::MatrixXcd::Zero(s.frames(), s.bins()));
  for (Index k = 0; k < s.bins(); ++k) {
    const Eigen::MatrixXcd& bk = b.b[static_cast<std::size_t>(k)];
    for (Index m = 0; m < mics; ++m) {
      const auto y = s.channels[static_cast<std::size_t>(m)].col(k);
      for (Index j = 0; j < speakers; ++j) {
        out.channels[static_cast<std::size_t>(j)].col(k) += std::conj(bk(m, j)) * y;
      }
    }
  }
  return out;
}

MultiSignal separate(const Spectrogram& s, const UnmixingOperator& b) {
  return istft(unmix_spectra(s, b));
}

namespace {

template <typename Fn>
auto staged(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.with_stage(stage);
  }
}

}  // namespace

SeparationResult run_pipeline(const MultiSignal& x, const PipelineConfig& cfg) {
  const Spectrogram s = staged("stft", [&] { return stft(x, cfg.stft); });
  return run_pipeline(s, cfg);
}

SeparationResult run_pipeline(const Spectrogram& s, const PipelineConfig& cfg) {
  if (s.num_channels() < 2) {
    throw Error(ErrorCode::kInvalidDimension, "separation needs at least two microphones")
        .with_stage("input");
  }
  SeparationResult res;

  if (cfg.fixed_sources) {
    res.estimated_count = *cfg.fixed_sources;
    res.log.push_back("source count fixed at " + std::to_string(res.estimated_count));
  } else {
    const auto feats = staged("counting-features", [&] { return extract_features(s, cfg.counting); });
    const auto corr = staged("counting-correlation", [&] { return build_correlation(feats.features); });
    const auto count = staged("count", [&] { return count_sources(corr, cfg.alpha); });
    res.estimated_count = count.count;
    res.count_saturated = count.saturated;
    res.counting_spectrum = corr.eigenvalues();
    res.log.push_back("estimated " + std::to_string(count.count) + " sources from " +
                      std::to_string(feats.kept_frames.size()) + " frames");
  }

  const auto feats = staged("separation-features", [&] { return extract_features(s, cfg.separation); });
  const auto corr = staged("separation-correlation", [&] { return build_correlation(feats.features); });
  res.separation_spectrum = corr.eigenvalues();
  res.kept_frames = feats.kept_frames;

  const Index speakers = res.estimated_count;
  res.embedding = staged("embed", [&] { return embed(corr, speakers); });
  res.vertices = staged("vertices", [&] { return find_vertices(res.embedding); });
  res.probabilities =
      staged("probabilities", [&] { return recover_probabilities(res.embedding, res.vertices); });
  res.dominated = staged("dominated-frames", [&] { return dominated_frames(res.probabilities, cfg.beta); });
  if (res.dominated.any_empty()) {
    res.log.push_back("empty dominated set at beta=" + std::to_string(cfg.beta) + "; retrying at " +
                      std::to_string(cfg.beta_retry));
    res.beta_retried = true;
    res.dominated =
        staged("dominated-frames", [&] { return dominated_frames(res.probabilities, cfg.beta_retry); });
    if (res.dominated.any_empty()) {
      for (std::size_t j = 0; j < res.dominated.sets.size(); ++j) {
        if (res.dominated.sets[j].empty()) {
          throw Error(ErrorCode::kEmptyFrameSet,
                      "speaker " + std::to_string(j) + " has no frame above beta=" +
                          std::to_string(cfg.beta_retry))
              .with_stage("dominated-frames");
        }
      }
    }
  }

  res.frame_sets.resize(res.dominated.sets.size());
  for (std::size_t j = 0; j < res.dominated.sets.size(); ++j) {
    for (Index row : res.dominated.sets[j]) {
      res.frame_sets[j].push_back(res.kept_frames[static_cast<std::size_t>(row)]);
    }
  }

  res.rtf = staged("rtf", [&] { return estimate_rtf(s, res.frame_sets, cfg.separation.ref_mic); });
  const auto unmixer = staged("unmix", [&] { return build_unmixer(res.rtf); });
  res.ill_conditioned_bins = unmixer.ill_conditioned_count();
  res.separated = staged("unmix", [&] { return separate(s, unmixer); });
  return res;
}

}  // namespace sbss
