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

#include "sbss/rng.hpp"
#include "sbss/stft.hpp"

namespace sbss::harness {

// Parameters of the speech-like test signal: talk spurts separated by
// pauses, syllable-rate amplitude modulation inside a spurt, and a carrier
// mixing a gliding harmonic tone with noise.
struct SpeechProxyParams {
  double sample_rate = 16000.0;
  double mean_talk_s = 1.2;
  double mean_pause_s = 0.8;
  double min_segment_s = 0.2;
  double syllable_min_s = 0.12;
  double syllable_max_s = 0.3;
  double voiced_mix = 0.7;     // 0 = amplitude-modulated noise only
  double pitch_min_hz = 90.0;  // base pitch drawn per signal
  double pitch_max_hz = 240.0;
  double max_harmonic_hz = 5000.0;
};

// Unit-RMS signal of `duration_s` seconds, reproducible from `seed`.
Signal speech_like(double duration_s, Seed seed, const SpeechProxyParams& p = {});

}  // namespace sbss::harness
