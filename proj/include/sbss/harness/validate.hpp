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

namespace sbss::harness {

struct ValidationOptions {
  Seed seed = 1;
  std::vector<int> dims{100, 400, 1600};
  int redraws = 1000;
  int variance_frames = 12;
  int variance_sources = 3;
  double variance_margin = 1.1;  // allowed multiple of the 3/D bound
  double slope_tolerance = 0.15;
  int perturbation_trials = 20;
  int perturbation_frames = 500;
  int perturbation_sources = 3;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

// Statistical properties of the synthetic correlation model: the
// inner-product variance bound at every dimension, its 1/D scaling, and the
// stability of the leading eigenpairs under the diagonal correction.
ValidationReport run_validation(const ValidationOptions& opt = {});

}  // namespace sbss::harness
