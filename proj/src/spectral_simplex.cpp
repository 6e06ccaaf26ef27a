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

#include "sbss/spectral_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbss/error.hpp"

namespace sbss {

CorrelationMatrix CorrelationMatrix::from_matrix(Eigen::MatrixXd w) {
  if (w.rows() == 0 || w.rows() != w.cols()) {
    throw Error(ErrorCode::kInvalidDimension, "correlation matrix must be square and non-empty");
  }
  CorrelationMatrix c;
  c.w_ = 0.5 * (w + w.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c.w_, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNumericalFailure, "symmetric eigensolver did not converge");
  }
  // Eigen returns ascending order.
  c.eigenvalues_ = solver.eigenvalues().reverse();
  c.eigenvectors_ = solver.eigenvectors().rowwise().reverse();
  return c;
}

CorrelationMatrix build_correlation(const ObservationSet& a) {
  if (a.count() < 2) {
    throw Error(ErrorCode::kInvalidDimension, "need at least two observations");
  }
  if (a.dim() < 1) throw Error(ErrorCode::kInvalidDimension, "observations are empty");
  const Index frames = a.count();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(frames, frames);
  w.selfadjointView<Eigen::Lower>().rankUpdate(a.rows, 1.0 / static_cast<double>(a.dim()));
  w.triangularView<Eigen::StrictlyUpper>() = w.transpose();
  return CorrelationMatrix::from_matrix(std::move(w));
}

SourceCount count_sources(const CorrelationMatrix& c, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0,1)");
  }
  const Eigen::VectorXd& lambda = c.eigenvalues();
  const double top = lambda(0);
  if (!(top > 0.0)) {
    throw Error(ErrorCode::kDegenerateSpectrum,
                "largest eigenvalue is " + std::to_string(top) + "; cannot normalize");
  }
  SourceCount out;
  Index j = 0;
  while (j < lambda.size() && !(lambda(j) / top < alpha)) ++j;
  out.count = std::max<Index>(j, 1);
  out.saturated = (j == lambda.size());
  return out;
}

SimplexEmbedding embed(const CorrelationMatrix& c, Index num_sources) {
  if (num_sources < 1 || num_sources > c.size()) {
    throw Error(ErrorCode::kInvalidDimension,
                "embedding dimension " + std::to_string(num_sources) + " outside [1, " +
                    std::to_string(c.size()) + "]");
  }
  return SimplexEmbedding{c.eigenvectors().leftCols(num_sources)};
}

PerturbationReport perturbation_check(const ProbabilityMatrix& p) {
  const Eigen::MatrixXd& pm = p.values();
  const Index num_sources = p.sources();
  const Eigen::MatrixXd base = pm * pm.transpose();
  Eigen::MatrixXd perturbed = base;
  perturbed.diagonal() += (1.0 - pm.rowwise().squaredNorm().array()).matrix();

  const auto kb = CorrelationMatrix::from_matrix(base);
  const auto kp = CorrelationMatrix::from_matrix(perturbed);
  const Index shown = std::min<Index>(num_sources + 2, kb.size());

  PerturbationReport r;
  r.num_sources = num_sources;
  r.base_eigenvalues = kb.eigenvalues().head(shown);
  r.perturbed_eigenvalues = kp.eigenvalues().head(shown);
  const Index used = std::min(num_sources, kb.size());
  r.overlap = kp.eigenvectors().leftCols(used).transpose() * kb.eigenvectors().leftCols(shown);
  r.max_eigenvalue_shift = 0.0;
  r.min_eigenvector_overlap = 1.0;
  for (Index j = 0; j < used; ++j) {
    r.max_eigenvalue_shift =
        std::max(r.max_eigenvalue_shift, std::abs(kp.eigenvalues()(j) - kb.eigenvalues()(j)));
    r.min_eigenvector_overlap = std::min(r.min_eigenvector_overlap, std::abs(r.overlap(j, j)));
  }
  return r;
}

}  // namespace sbss
