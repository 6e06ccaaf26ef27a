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

#include <string>

#include "sbss/stft.hpp"

namespace sbss::harness {

enum class SampleFormat { kPcm16, kPcm24, kFloat32 };

struct WavData {
  MultiSignal channels;
  double sample_rate = 16000.0;
  SampleFormat format = SampleFormat::kPcm16;
};

// Reads PCM 16/24-bit and IEEE float32 files, including the extensible
// header variant. Samples are scaled to [-1, 1). Throws kIo.
WavData read_wav(const std::string& path);

// PCM output is clipped to [-1, 1] and rounded to nearest. Throws kIo, or
// kLengthMismatch when channels differ in length.
void write_wav(const std::string& path, const MultiSignal& channels, double sample_rate,
               SampleFormat format = SampleFormat::kFloat32);

}  // namespace sbss::harness
