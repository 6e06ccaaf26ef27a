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
#include <json.hpp>

#include "sbss/harness/config.hpp"
#include "sbss/harness/experiment.hpp"
#include "sbss/harness/validate.hpp"
#include "sbss/separation.hpp"

namespace sbss::harness {

// Bumped whenever a field is renamed or removed.
inline constexpr int kSchemaVersion = 1;

// Reports contain no timestamps or timings, so equal inputs give
// byte-identical output.
nlohmann::json counting_json(const CountingReport& r, const ExperimentConfig& cfg);
nlohmann::json separation_json(const SeparationReport& r, const ExperimentConfig& cfg);
nlohmann::json pipeline_json(const SeparationResult& r);
nlohmann::json validation_json(const ValidationReport& r);

// CSV layouts (header line first):
//   spectrum:   index,eigenvalue,ratio            ratio = eigenvalue / largest
//   matrix:     row,<names...>                     one line per matrix row
//   counting:   trial,sources,error,alpha=<a>...   estimated count per alpha
//   separation: trial,sources,estimated,input_sir_db,proposed_sir_db,
//               proposed_sdr_db,ideal_sir_db,ideal_sdr_db,semi_ideal_sir_db,
//               semi_ideal_sdr_db,beta_retried,error
// Failed cells are empty.
std::string spectrum_csv(const Eigen::VectorXd& eigenvalues);
std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& names);
std::string counting_csv(const CountingReport& r);
std::string separation_csv(const SeparationReport& r);

// Shortest round-trip decimal form.
std::string format_number(double x);

// Throws kIo.
void write_text(const std::string& path, const std::string& text);

}  // namespace sbss::harness
