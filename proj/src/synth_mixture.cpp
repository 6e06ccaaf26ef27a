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

#include "sbss/synth_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbss/error.hpp"

namespace sbss {

ProbabilityMatrix ProbabilityMatrix::from_matrix(Eigen::MatrixXd p, double tol) {
  if (p.rows() == 0 || p.cols() == 0) {
    throw Error(ErrorCode::kInvalidDimension, "probability matrix is empty");
  }
  for (Index l = 0; l < p.rows(); ++l) {
    for (Index j = 0; j < p.cols(); ++j) {
      const double v = p(l, j);
      if (!(v >= -tol && v <= 1.0 + tol)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "probability (" + std::to_string(l) + ", " + std::to_string(j) +
                        ") = " + std::to_string(v) + " outside [0,1]");
      }
    }
    const double s = p.row(l).sum();
    if (std::abs(s - 1.0) > tol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(l) + " sums to " + std::to_string(s));
    }
  }
  return ProbabilityMatrix(std::move(p));
}

HiddenSourceSet generate_hidden_sources(Index num_sources, Index dim, Seed seed) {
  if (num_sources < 1 || dim < 1) {
    throw Error(ErrorCode::kInvalidDimension, "need J >= 1 and D >= 1");
  }
  Rng rng(seed);
  HiddenSourceSet h;
  h.sources.resize(num_sources, dim);
  for (Index j = 0; j < num_sources; ++j) {
    for (Index k = 0; k < dim; ++k) h.sources(j, k) = rng.normal();
  }
  return h;
}

ProbabilityMatrix generate_probabilities(Index frames, Index num_sources, Seed seed) {
  if (frames < 1 || num_sources < 1) {
    throw Error(ErrorCode::kInvalidDimension, "need L >= 1 and J >= 1");
  }
  Rng rng(seed);
  Eigen::MatrixXd p(frames, num_sources);
  std::vector<double> rho(static_cast<std::size_t>(num_sources - 1));
  for (Index l = 0; l < frames; ++l) {
    for (double& r : rho) r = rng.uniform();
    std::sort(rho.begin(), rho.end());
    double prev = 0.0;
    for (Index j = 0; j + 1 < num_sources; ++j) {
      p(l, j) = rho[static_cast<std::size_t>(j)] - prev;
      prev = rho[static_cast<std::size_t>(j)];
    }
    p(l, num_sources - 1) = 1.0 - prev;
  }
  return ProbabilityMatrix::from_matrix(std::move(p));
}

std::pair<ObservationSet, IndicatorTensor> generate_observations(const HiddenSourceSet& h,
                                                                const ProbabilityMatrix& p,
                                                                Seed seed) {
  const Index num_sources = h.count();
  if (p.sources() != num_sources) {
    throw Error(ErrorCode::kShapeMismatch, "P has " + std::to_string(p.sources()) +
                                               " columns but there are " +
                                               std::to_string(num_sources) + " sources");
  }
  const Index frames = p.frames();
  const Index dim = h.dim();
  Rng rng(seed);

  ObservationSet a;
  a.rows.resize(frames, dim);
  IndicatorTensor ind;
  ind.winner.resize(frames, dim);

  std::vector<double> cdf(static_cast<std::size_t>(num_sources));
  for (Index l = 0; l < frames; ++l) {
    double acc = 0.0;
    for (Index j = 0; j < num_sources; ++j) {
      acc += p.values()(l, j);
      cdf[static_cast<std::size_t>(j)] = acc;
    }
    for (Index k = 0; k < dim; ++k) {
      const double u = rng.uniform();
      // Inverse CDF; the last source absorbs any rounding shortfall.
      Index j = 0;
      while (j + 1 < num_sources && !(u < cdf[static_cast<std::size_t>(j)])) ++j;
      ind.winner(l, k) = static_cast<int>(j);
      a.rows(l, k) = h.sources(j, k);
    }
  }
  return {std::move(a), std::move(ind)};
}

CorrelationMatrix oracle_correlation(const ProbabilityMatrix& p) {
  Eigen::MatrixXd w = p.values() * p.values().transpose();
  w.diagonal().setOnes();
  return CorrelationMatrix::from_matrix(std::move(w));
}

VarianceReport correlation_variance_check(const ProbabilityMatrix& p, Index dim, Index trials,
                                          Seed seed) {
  if (trials < 100) {
    throw Error(ErrorCode::kInvalidArgument, "variance check needs at least 100 trials");
  }
  if (dim < 1) throw Error(ErrorCode::kInvalidDimension, "D must be positive");
  const Index frames = p.frames();
  const Index num_sources = p.sources();

  // Welford accumulators over the strict upper triangle.
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(frames, frames);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(frames, frames);
  for (Index t = 0; t < trials; ++t) {
    const auto h = generate_hidden_sources(num_sources, dim,
                                           derive_seed(seed, 2 * static_cast<std::uint64_t>(t)));
    const auto obs = generate_observations(
        h, p, derive_seed(seed, 2 * static_cast<std::uint64_t>(t) + 1)).first;
    const Eigen::MatrixXd g = obs.rows * obs.rows.transpose() / static_cast<double>(dim);
    const double count = static_cast<double>(t + 1);
    for (Index l = 0; l < frames; ++l) {
      for (Index n = l + 1; n < frames; ++n) {
        const double delta = g(l, n) - mean(l, n);
        mean(l, n) += delta / count;
        m2(l, n) += delta * (g(l, n) - mean(l, n));
      }
    }
  }

  VarianceReport report;
  report.dim = dim;
  report.trials = trials;
  report.bound = report.c4 / static_cast<double>(dim);
  const Eigen::MatrixXd expected = p.values() * p.values().transpose();
  double var_sum = 0.0;
  for (Index l = 0; l < frames; ++l) {
    for (Index n = l + 1; n < frames; ++n) {
      PairVariance pv;
      pv.l = l;
      pv.n = n;
      pv.expected_mean = expected(l, n);
      pv.empirical_mean = mean(l, n);
      pv.empirical_variance = m2(l, n) / static_cast<double>(trials - 1);
      pv.ratio = pv.empirical_variance / report.bound;
      report.max_ratio = std::max(report.max_ratio, pv.ratio);
      var_sum += pv.empirical_variance;
      report.pairs.push_back(pv);
    }
  }
  if (!report.pairs.empty()) report.mean_variance = var_sum / static_cast<double>(report.pairs.size());
  return report;
}

}  // namespace sbss
