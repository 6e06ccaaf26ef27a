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

#include <Eigen/Dense>

#include "sbss/harness/config.hpp"
#include "sbss/harness/room.hpp"

namespace sbss::harness {

// One simulated recording, fully determined by (cfg.seed, trial).
struct Scenario {
  int trial = 0;
  int sources = 0;
  RoomSpec room;
  std::vector<Signal> clean;
  Mixture mix;
};

Scenario make_scenario(const ExperimentConfig& cfg, int trial);

struct CountingTrial {
  int trial = 0;
  int sources = 0;
  std::vector<int> estimates;      // one per swept alpha
  Eigen::VectorXd leading_ratios;  // lambda_k / lambda_1 for the first few k
  std::string error;               // empty on success
};

struct CountingReport {
  std::vector<double> alphas;
  std::vector<double> accuracy;  // failed trials count as wrong
  int trials = 0;
  int failures = 0;
  std::vector<CountingTrial> rows;

  double min_accuracy() const;
  double max_accuracy() const;
};

CountingReport run_counting(const ExperimentConfig& cfg);

struct MethodScore {
  bool ok = false;
  double sir_db = 0.0;  // mean over speakers
  double sdr_db = 0.0;
  std::string error;
};

struct SeparationTrial {
  int trial = 0;
  int sources = 0;
  Index estimated_count = 0;
  double input_sir_db = 0.0;  // mean over speakers, reference microphone
  bool beta_retried = false;
  MethodScore proposed, ideal, semi_ideal;

  bool complete(bool baselines) const;
};

struct Summary {
  int count = 0;
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(count); 0 for one sample
};

// Means are taken over complete trials only (every scored method succeeded),
// so the methods are compared on the same recordings.
struct SeparationReport {
  int trials = 0;
  int failures = 0;
  bool baselines = true;
  Summary input_sir;
  Summary proposed_sir, proposed_sdr;
  Summary ideal_sir, ideal_sdr;
  Summary semi_ideal_sir, semi_ideal_sdr;
  std::vector<SeparationTrial> rows;
};

SeparationReport run_separation(const ExperimentConfig& cfg);

Summary summarize(const std::vector<double>& values);

}  // namespace sbss::harness
