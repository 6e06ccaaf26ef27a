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

#include <Eigen/Dense>

#include "sbss/spectral_simplex.hpp"
#include "sbss/types.hpp"

namespace sbss {

// Smallest admissible sigma_min / sigma_max of the recovered vertex matrix.
inline constexpr double kVertexConditionFloor = 1e-6;

struct VertexSet {
  std::vector<Index> frame_indices;  // embedding row attaining each vertex
  Eigen::MatrixXd qhat;              // J x J, column j = vertex j

  Index count() const { return qhat.cols(); }
  Eigen::VectorXd vertex(Index j) const { return qhat.col(j); }
};

// Successive projection: the max-norm point, then the point farthest from
// it, then repeatedly the point with the largest component orthogonal to
// the edges found so far. Ties resolve to the lowest frame index. Throws
// kRankDeficiency when the data do not span J affinely independent
// vertices (usually J was overcounted).
VertexSet find_vertices(const SimplexEmbedding& e);

struct RecoveredProbabilities {
  Eigen::MatrixXd phat;        // L x J, sanitized (nonnegative, rows sum to 1)
  Eigen::MatrixXd raw;         // L x J, Qhat^{-1} nu(l) before sanitizing
  Eigen::VectorXd clip_mass;   // per frame, total negative mass removed

  Index frames() const { return phat.rows(); }
  Index sources() const { return phat.cols(); }
};

RecoveredProbabilities recover_probabilities(const SimplexEmbedding& e, const VertexSet& v);

struct DominatedFrameSets {
  std::vector<std::vector<Index>> sets;  // sets[j] = rows with phat_j > beta
  double beta = 0.0;

  bool any_empty() const;
};

DominatedFrameSets dominated_frames(const RecoveredProbabilities& r, double beta);

}  // namespace sbss
