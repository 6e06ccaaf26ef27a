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

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sbss/rng.hpp"
#include "sbss/spectral_simplex.hpp"
#include "sbss/types.hpp"

namespace sbss {

// J hidden sources of D coordinates each, one per row.
struct HiddenSourceSet {
  Eigen::MatrixXd sources;  // J x D

  Index count() const { return sources.rows(); }
  Index dim() const { return sources.cols(); }
};

// Winning source of each lottery: winner(l, k) in [0, J).
struct IndicatorTensor {
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> winner;  // L x D
};

// Fourth moment of a unit-variance zero-mean Gaussian.
inline constexpr double kGaussianFourthMoment = 3.0;

HiddenSourceSet generate_hidden_sources(Index num_sources, Index dim, Seed seed);

// Each row is the spacing of J-1 sorted uniforms on [0,1].
ProbabilityMatrix generate_probabilities(Index frames, Index num_sources, Seed seed);

// a_l(k) takes coordinate k of source j with probability p_j(l); lotteries
// are independent across (l, k).
std::pair<ObservationSet, IndicatorTensor> generate_observations(const HiddenSourceSet& h,
                                                                const ProbabilityMatrix& p,
                                                                Seed seed);

// Expected correlation of the model: P P^T off the diagonal, 1 on it.
CorrelationMatrix oracle_correlation(const ProbabilityMatrix& p);

struct PairVariance {
  Index l = 0;
  Index n = 0;
  double expected_mean = 0.0;  // sum_j p_j(l) p_j(n)
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  double ratio = 0.0;  // empirical_variance / bound
};

struct VarianceReport {
  Index dim = 0;
  Index trials = 0;
  double c4 = kGaussianFourthMoment;
  double bound = 0.0;  // c4 / D
  double max_ratio = 0.0;
  double mean_variance = 0.0;  // averaged over pairs
  std::vector<PairVariance> pairs;
};

// Monte-Carlo spread of (1/D) a(l).a(n) over fresh draws of sources and
// lotteries, for every pair l < n of the rows of `p`. Requires trials >= 100.
VarianceReport correlation_variance_check(const ProbabilityMatrix& p, Index dim, Index trials,
                                          Seed seed);

}  // namespace sbss
