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
#include <vector>

#include "sbss/rng.hpp"
#include "sbss/separation.hpp"

namespace sbss::harness {

// Everything a Monte-Carlo run depends on. One seed drives all randomness.
struct ExperimentConfig {
  // Scenario
  std::vector<int> sources{2};  // trial t uses sources[t % size]
  int mics = 8;
  double mic_spacing_m = 0.08;
  double sample_rate = 16000.0;
  double duration_s = 10.0;
  double decay_s = 0.05;
  double drr_db = 0.0;
  double min_separation_deg = 30.0;

  // Analysis
  int window_len = 2048;
  double overlap = 0.75;
  int smoothing_frames = 2;
  int ref_mic = 0;
  double energy_gate_db = 40.0;
  double counting_lo_hz = 500.0;
  double counting_hi_hz = 1500.0;
  double separation_lo_hz = 0.0;
  double separation_hi_hz = 4500.0;

  // Thresholds
  double alpha = 0.12;
  double alpha_min = 0.09;  // counting sweep, inclusive
  double alpha_max = 0.16;
  double alpha_step = 0.01;
  double beta = 0.95;
  double beta_retry = 0.8;
  double gamma = 0.0;  // 0 = by speaker count (0.95 / 0.9 / 0.8)

  // Run control
  int trials = 20;
  Seed seed = 1;
  int threads = 1;
  bool known_count = true;  // separation runs pin J to the truth
  bool baselines = true;    // also score ideal and semi-ideal unmixing

  // Sweep values alpha_min, alpha_min + step, ... up to alpha_max.
  std::vector<double> alpha_sweep() const;
  PipelineConfig pipeline() const;
  StftConfig stft() const;

  // Throws kConfig on a threshold outside (0,1), trials < 1 or any other
  // unusable value.
  void validate() const;
};

// Flat `key = value` text; `#` starts a comment; lists are comma-separated.
// Unknown keys and malformed values throw kConfig with the line number.
// Keys absent from the text keep their defaults.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Round-trips through parse_config.
std::string to_text(const ExperimentConfig& cfg);

}  // namespace sbss::harness
