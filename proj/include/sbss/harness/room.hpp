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

#include "sbss/rng.hpp"
#include "sbss/stft.hpp"

namespace sbss::harness {

// Uniform linear array in free space plus a synthetic reverberant tail.
struct RoomGeometry {
  int mics = 8;
  double mic_spacing_m = 0.08;
  double sample_rate = 16000.0;
  double sound_speed = 343.0;
  double decay_s = 0.05;            // amplitude time constant of the tail
  double drr_db = 0.0;              // direct-to-reverberant energy ratio
  double reflections_per_s = 4000.0;
  double tail_length_s = 0.0;       // 0 = 6.9 * decay_s (60 dB)
  std::vector<double> angles_deg;   // one per source, 0 = broadside
  std::vector<double> distances_m;  // one per source
};

// Impulse responses from every source to every microphone.
struct RoomSpec {
  std::vector<std::vector<Signal>> filters;       // [source][mic]
  std::vector<std::vector<double>> direct_delay;  // [source][mic], samples
  std::vector<double> angles_deg;
  std::vector<double> distances_m;
  double decay_s = 0.0;
  double sample_rate = 16000.0;
  Seed seed = 0;

  int sources() const { return static_cast<int>(filters.size()); }
  int mics() const { return filters.empty() ? 0 : static_cast<int>(filters.front().size()); }
};

// Unit-energy fractional-delay direct path (windowed sinc) followed by
// sparse, exponentially decaying random reflections scaled to drr_db.
RoomSpec make_room(const RoomGeometry& g, Seed seed);

// J distinct positions on the -90..90 degree grid in 15 degree steps with at
// least `min_separation_deg` between any two, at 1 m or 2 m.
void draw_positions(int sources, Seed seed, std::vector<double>& angles_deg,
                    std::vector<double>& distances_m, double min_separation_deg = 30.0);

struct Mixture {
  MultiSignal mixture;              // M channels
  std::vector<MultiSignal> images;  // [source] -> M channels
};

// mixture^m = sum_j h_j^m * s_j; images are the per-source terms. Throws
// kLengthMismatch when the clean signals differ in length.
Mixture simulate_mixture(const RoomSpec& room, const std::vector<Signal>& clean);

}  // namespace sbss::harness
