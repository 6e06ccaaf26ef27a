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

#include <cstddef>
#include <utility>

#include <Eigen/Dense>

namespace sbss {

using Index = Eigen::Index;

// L x J row-stochastic matrix; entry (l, j) is the activity probability of
// source j in frame/observation l.
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;

  // Validates entries in [0,1] and rows summing to one (within `tol`).
  // Throws kInvalidArgument otherwise, kInvalidDimension on an empty matrix.
  static ProbabilityMatrix from_matrix(Eigen::MatrixXd p, double tol = 1e-12);

  const Eigen::MatrixXd& values() const { return p_; }
  Index frames() const { return p_.rows(); }
  Index sources() const { return p_.cols(); }
  Eigen::RowVectorXd row(Index l) const { return p_.row(l); }

 private:
  explicit ProbabilityMatrix(Eigen::MatrixXd p) : p_(std::move(p)) {}
  Eigen::MatrixXd p_;
};

// L observation vectors in R^D, one per row.
struct ObservationSet {
  Eigen::MatrixXd rows;
  bool unit_norm = false;

  Index count() const { return rows.rows(); }
  Index dim() const { return rows.cols(); }
};

}  // namespace sbss
