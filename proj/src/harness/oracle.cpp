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

#include "sbss/harness/oracle.hpp"

#include <numeric>
#include <string>

#include "sbss/error.hpp"

namespace sbss::harness {

OracleSelection semi_ideal_sets(const std::vector<Spectrogram>& images, double gamma,
                                int ref_mic) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must lie in (0,1)");
  }
  if (images.empty()) throw Error(ErrorCode::kInvalidDimension, "no speaker images");
  const Index frames = images.front().frames();
  const auto speakers = static_cast<Index>(images.size());
  OracleSelection sel;
  sel.gamma = gamma;
  sel.sets.resize(images.size());
  sel.fraction = Eigen::MatrixXd::Zero(frames, speakers);

  Eigen::MatrixXd energy(frames, speakers);
  for (Index j = 0; j < speakers; ++j) {
    const Spectrogram& img = images[static_cast<std::size_t>(j)];
    if (img.frames() != frames) throw Error(ErrorCode::kShapeMismatch, "images differ in frame count");
    if (ref_mic < 0 || ref_mic >= img.num_channels()) {
      throw Error(ErrorCode::kInvalidArgument, "reference microphone out of range");
    }
    energy.col(j) = img.channels[static_cast<std::size_t>(ref_mic)].cwiseAbs2().rowwise().sum();
  }
  for (Index l = 0; l < frames; ++l) {
    const double total = energy.row(l).sum();
    if (!(total > 0.0)) continue;
    for (Index j = 0; j < speakers; ++j) {
      const double f = energy(l, j) / total;
      sel.fraction(l, j) = f;
      if (f > gamma) sel.sets[static_cast<std::size_t>(j)].push_back(l);
    }
  }
  return sel;
}

double default_gamma(int speakers) {
  switch (speakers) {
    case 0:
    case 1:
    case 2: return 0.95;
    case 3: return 0.9;
    default: return 0.8;
  }
}

RtfEstimate ideal_rtf(const std::vector<Spectrogram>& images, int ref_mic) {
  if (images.empty()) throw Error(ErrorCode::kInvalidDimension, "no speaker images");
  RtfEstimate est;
  est.ref_mic = ref_mic;
  est.source = RtfSource::kIdeal;
  for (const Spectrogram& img : images) {
    std::vector<Index> all(static_cast<std::size_t>(img.frames()));
    std::iota(all.begin(), all.end(), Index{0});
    RtfEstimate one = estimate_rtf(img, {all}, ref_mic);
    est.guarded += one.guarded;
    est.h.push_back(std::move(one.h.front()));
  }
  return est;
}

}  // namespace sbss::harness
