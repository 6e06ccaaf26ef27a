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

#include "sbss/harness/validate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbss/spectral_simplex.hpp"
#include "sbss/synth_mixture.hpp"

namespace sbss::harness {

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport run_validation(const ValidationOptions& opt) {
  ValidationReport report;

  const auto p = generate_probabilities(opt.variance_frames, opt.variance_sources, derive_seed(opt.seed, 0));
  std::vector<double> log_d, log_var;
  for (std::size_t i = 0; i < opt.dims.size(); ++i) {
    const int d = opt.dims[i];
    const auto v = correlation_variance_check(p, d, opt.redraws, derive_seed(opt.seed, 1 + i));
    ValidationCheck c;
    c.name = "variance-bound-D" + std::to_string(d);
    c.value = v.max_ratio;
    c.threshold = opt.variance_margin;
    c.passed = v.max_ratio <= opt.variance_margin;
    c.detail = "max empirical variance / (3/D) over " + std::to_string(v.pairs.size()) + " pairs";
    report.checks.push_back(c);
    log_d.push_back(std::log(static_cast<double>(d)));
    log_var.push_back(std::log(v.mean_variance));
  }

  if (log_d.size() >= 2) {
    // Least-squares slope of log variance against log D.
    const double n = static_cast<double>(log_d.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_d.size(); ++i) {
      sx += log_d[i];
      sy += log_var[i];
      sxx += log_d[i] * log_d[i];
      sxy += log_d[i] * log_var[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    ValidationCheck c;
    c.name = "variance-slope";
    c.value = slope;
    c.threshold = opt.slope_tolerance;
    c.passed = std::abs(slope + 1.0) <= opt.slope_tolerance;
    c.detail = "log-log slope of mean variance against D; expected -1";
    report.checks.push_back(c);
  }

  double worst_shift = 0.0;
  double worst_overlap = 1.0;
  for (int t = 0; t < opt.perturbation_trials; ++t) {
    const auto pt = generate_probabilities(opt.perturbation_frames, opt.perturbation_sources,
                                           derive_seed(opt.seed, 1000 + static_cast<std::uint64_t>(t)));
    const auto r = perturbation_check(pt);
    worst_shift = std::max(worst_shift, r.max_eigenvalue_shift);
    worst_overlap = std::min(worst_overlap, r.min_eigenvector_overlap);
  }
  const std::string trials = std::to_string(opt.perturbation_trials) + " random matrices";
  report.checks.push_back({"perturbation-eigenvalue-shift", worst_shift < 1.0, worst_shift, 1.0,
                           "largest |shift| of the leading eigenvalues over " + trials});
  report.checks.push_back({"perturbation-eigenvector-overlap", worst_overlap > 0.99, worst_overlap, 0.99,
                           "smallest |overlap| of matched leading eigenvectors over " + trials});
  return report;
}

}  // namespace sbss::harness
