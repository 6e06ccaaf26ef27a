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

#include "sbss/convex_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbss/error.hpp"

namespace sbss {
namespace {

// Row index maximizing score(l); strict comparison keeps the lowest index.
template <typename Score>
Index argmax_rows(Index rows, Score score, double* best_value = nullptr) {
  Index best = 0;
  double best_score = score(0);
  for (Index l = 1; l < rows; ++l) {
    const double s = score(l);
    if (s > best_score) {
      best_score = s;
      best = l;
    }
  }
  if (best_value != nullptr) *best_value = best_score;
  return best;
}

double condition_ratio(const Eigen::MatrixXd& q) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(q);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !(s(0) > 0.0)) return 0.0;
  return s(s.size() - 1) / s(0);
}

}  // namespace

VertexSet find_vertices(const SimplexEmbedding& e) {
  const Index num_sources = e.sources();
  const Index frames = e.frames();
  if (num_sources < 1) throw Error(ErrorCode::kInvalidDimension, "embedding has no columns");
  if (frames < num_sources) {
    throw Error(ErrorCode::kInvalidDimension,
                "need at least J frames, have " + std::to_string(frames));
  }
  const Eigen::MatrixXd& nu = e.nu;

  VertexSet v;
  v.qhat.resize(num_sources, num_sources);
  double scale = 0.0;
  const Index first = argmax_rows(frames, [&](Index l) { return nu.row(l).squaredNorm(); }, &scale);
  scale = std::sqrt(scale);
  v.frame_indices.push_back(first);
  v.qhat.col(0) = nu.row(first).transpose();
  if (num_sources == 1) return v;

  const Eigen::RowVectorXd origin = nu.row(first);
  const Eigen::MatrixXd centered = nu.rowwise() - origin;
  const double tol = 1e-10 * std::max(scale, 1e-300);

  double reach = 0.0;
  const Index second = argmax_rows(frames, [&](Index l) { return centered.row(l).squaredNorm(); },
                                   &reach);
  if (std::sqrt(reach) <= tol) {
    throw Error(ErrorCode::kRankDeficiency,
                "all frames coincide; fewer sources than J=" + std::to_string(num_sources) +
                    " (rerun counting with a larger alpha)");
  }
  v.frame_indices.push_back(second);
  v.qhat.col(1) = nu.row(second).transpose();

  for (Index r = 2; r < num_sources; ++r) {
    // Edges e*_j - e*_1 found so far, as columns.
    Eigen::MatrixXd edges(num_sources, r - 1);
    for (Index j = 1; j < r; ++j) edges.col(j - 1) = v.qhat.col(j) - v.qhat.col(0);
    const Eigen::MatrixXd gram = edges.transpose() * edges;
    const Eigen::MatrixXd gram_pinv =
        gram.completeOrthogonalDecomposition().pseudoInverse();
    const Eigen::MatrixXd projector =
        Eigen::MatrixXd::Identity(num_sources, num_sources) - edges * gram_pinv * edges.transpose();
    const Eigen::MatrixXd residual = centered * projector;  // projector is symmetric
    double best = 0.0;
    const Index next = argmax_rows(frames, [&](Index l) { return residual.row(l).squaredNorm(); },
                                   &best);
    if (std::sqrt(best) <= tol) {
      throw Error(ErrorCode::kRankDeficiency,
                  "frames span only " + std::to_string(r) + " affinely independent vertices, J=" +
                      std::to_string(num_sources) + " requested (rerun counting with a larger alpha)");
    }
    v.frame_indices.push_back(next);
    v.qhat.col(r) = nu.row(next).transpose();
  }

  if (condition_ratio(v.qhat) < kVertexConditionFloor) {
    throw Error(ErrorCode::kRankDeficiency,
                "recovered vertex matrix is near singular; J=" + std::to_string(num_sources) +
                    " is likely overcounted (rerun counting with a larger alpha)");
  }
  return v;
}

RecoveredProbabilities recover_probabilities(const SimplexEmbedding& e, const VertexSet& v) {
  const Index num_sources = e.sources();
  if (v.count() != num_sources || v.qhat.rows() != num_sources) {
    throw Error(ErrorCode::kShapeMismatch, "vertex set does not match embedding dimension");
  }
  if (condition_ratio(v.qhat) < kVertexConditionFloor) {
    throw Error(ErrorCode::kSingularQ,
                "vertex matrix below condition floor; rerun counting with a larger alpha");
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(v.qhat);

  RecoveredProbabilities r;
  r.raw = lu.solve(e.nu.transpose()).transpose();
  r.phat = r.raw;
  r.clip_mass = Eigen::VectorXd::Zero(e.frames());
  for (Index l = 0; l < e.frames(); ++l) {
    double clipped = 0.0;
    for (Index j = 0; j < num_sources; ++j) {
      if (r.phat(l, j) < 0.0) {
        clipped -= r.phat(l, j);
        r.phat(l, j) = 0.0;
      }
    }
    r.clip_mass(l) = clipped;
    const double total = r.phat.row(l).sum();
    if (total > 0.0) {
      r.phat.row(l) /= total;
    } else {
      r.phat.row(l).setConstant(1.0 / static_cast<double>(num_sources));
    }
  }
  return r;
}

bool DominatedFrameSets::any_empty() const {
  return std::any_of(sets.begin(), sets.end(), [](const auto& s) { return s.empty(); });
}

DominatedFrameSets dominated_frames(const RecoveredProbabilities& r, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "beta must lie in (0,1)");
  }
  DominatedFrameSets out;
  out.beta = beta;
  out.sets.resize(static_cast<std::size_t>(r.sources()));
  for (Index l = 0; l < r.frames(); ++l) {
    for (Index j = 0; j < r.sources(); ++j) {
      if (r.phat(l, j) > beta) out.sets[static_cast<std::size_t>(j)].push_back(l);
    }
  }
  return out;
}

}  // namespace sbss
