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

#include <Eigen/Dense>

#include "sbss/types.hpp"

namespace sbss {

// Symmetric L x L frame-correlation matrix together with its full
// eigendecomposition. Eigenvalues are sorted in descending order and
// eigenvectors() column j pairs with eigenvalues()(j). Immutable once built.
class CorrelationMatrix {
 public:
  // Symmetrizes (W + W^T)/2 and decomposes. Throws kNumericalFailure if the
  // eigensolver does not converge, kInvalidDimension on an empty or
  // non-square input.
  static CorrelationMatrix from_matrix(Eigen::MatrixXd w);

  const Eigen::MatrixXd& matrix() const { return w_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  Index size() const { return w_.rows(); }

 private:
  CorrelationMatrix() = default;

  Eigen::MatrixXd w_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

// W = (1/D) A A^T over the rows of `a`. Requires at least two observations.
CorrelationMatrix build_correlation(const ObservationSet& a);

struct SourceCount {
  Index count = 1;
  // No eigenvalue ratio fell below the threshold; count equals L.
  bool saturated = false;
};

// Number of leading eigenvalues whose ratio to the largest is >= alpha.
// A ratio exactly equal to alpha counts as below the threshold.
SourceCount count_sources(const CorrelationMatrix& c, double alpha);

// Row l holds the coordinates of frame l on the top-J eigenvectors.
struct SimplexEmbedding {
  Eigen::MatrixXd nu;  // L x J

  Index frames() const { return nu.rows(); }
  Index sources() const { return nu.cols(); }
};

SimplexEmbedding embed(const CorrelationMatrix& c, Index num_sources);

// Compares the spectra of P P^T and P P^T + dW, where dW is the diagonal
// completing the model correlation to a unit diagonal.
struct PerturbationReport {
  Index num_sources = 0;
  Eigen::VectorXd base_eigenvalues;       // leading J+2 of P P^T
  Eigen::VectorXd perturbed_eigenvalues;  // leading J+2 of P P^T + dW
  // (i, j) = perturbed u_i . base u_j, i < J, j < J+2.
  Eigen::MatrixXd overlap;
  double max_eigenvalue_shift = 0.0;     // max over j < J
  double min_eigenvector_overlap = 1.0;  // min over j < J of |overlap(j, j)|
};

PerturbationReport perturbation_check(const ProbabilityMatrix& p);

}  // namespace sbss
