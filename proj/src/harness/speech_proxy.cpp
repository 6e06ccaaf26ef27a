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

#include "sbss/harness/speech_proxy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sbss/error.hpp"

namespace sbss::harness {

Signal speech_like(double duration_s, Seed seed, const SpeechProxyParams& p) {
  const double fs = p.sample_rate;
  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * fs));
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "duration must be positive");
  Rng rng(seed);

  // Envelope: alternating pauses and talk spurts; each spurt is a train of
  // raised-sine syllables.
  Signal env(n, 0.0);
  bool talking = rng.uniform() < 0.5;
  std::size_t t = 0;
  while (t < n) {
    const double mean = talking ? p.mean_talk_s : p.mean_pause_s;
    const double seg = std::max(p.min_segment_s, rng.exponential(mean));
    const std::size_t end = std::min(n, t + static_cast<std::size_t>(seg * fs));
    if (talking) {
      std::size_t s = t;
      while (s < end) {
        const double syl = rng.uniform(p.syllable_min_s, p.syllable_max_s);
        const std::size_t len = std::min(end - s, static_cast<std::size_t>(syl * fs));
        const double gain = rng.uniform(0.4, 1.0);
        for (std::size_t i = 0; i < len; ++i) {
          env[s + i] = gain * std::sin(std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(len));
        }
        s += len;
      }
    }
    t = end;
    talking = !talking;
  }

  // Carrier: harmonic series on a slowly wandering pitch plus lowpassed noise.
  const double base_pitch = rng.uniform(p.pitch_min_hz, p.pitch_max_hz);
  double pitch_state = 0.0;
  double phase = 0.0;
  double noise_lp = 0.0;
  Signal out(n, 0.0);
  const int max_harm = std::max(1, static_cast<int>(p.max_harmonic_hz / p.pitch_min_hz));
  std::vector<double> harm_gain(static_cast<std::size_t>(max_harm));
  for (int k = 0; k < max_harm; ++k) harm_gain[static_cast<std::size_t>(k)] = 1.0 / std::pow(k + 1.0, 0.8);
  const double pitch_pole = std::exp(-1.0 / (0.15 * fs));
  for (std::size_t i = 0; i < n; ++i) {
    pitch_state = pitch_pole * pitch_state + (1.0 - pitch_pole) * rng.normal() * 8.0;
    const double f0 = base_pitch * std::exp2(std::clamp(pitch_state, -1.0, 1.0) * 0.5);
    phase += 2.0 * std::numbers::pi * f0 / fs;
    if (phase > 2.0 * std::numbers::pi) phase -= 2.0 * std::numbers::pi;
    double voiced = 0.0;
    if (p.voiced_mix > 0.0 && env[i] > 0.0) {
      for (int k = 0; k < max_harm && (k + 1) * f0 < p.max_harmonic_hz; ++k) {
        voiced += harm_gain[static_cast<std::size_t>(k)] * std::cos((k + 1) * phase);
      }
      voiced *= 0.35;
    }
    noise_lp = 0.6 * noise_lp + rng.normal();
    out[i] = env[i] * (p.voiced_mix * voiced + (1.0 - p.voiced_mix) * 0.5 * noise_lp);
  }

  double energy = 0.0;
  for (double v : out) energy += v * v;
  const double rms = std::sqrt(energy / static_cast<double>(n));
  if (rms > 0.0) {
    for (double& v : out) v /= rms;
  }
  return out;
}

}  // namespace sbss::harness
