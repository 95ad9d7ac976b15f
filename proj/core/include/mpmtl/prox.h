// Copyright 2026 The MP-MTL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact proximal operators of the trace norm and the l2,1 norm, and the
// projection matrices that approximate them from a (perturbed) feature
// covariance W W^T.

#ifndef MPMTL_PROX_H_
#define MPMTL_PROX_H_

#include <Eigen/Dense>

namespace mpmtl {

// Sum of singular values.
double TraceNorm(const Eigen::MatrixXd& W);
// Sum of row l2 norms.
double GroupL1Norm(const Eigen::MatrixXd& W);

// argmin_W 1/2 ||W - C||_F^2 + tau ||W||_*  (singular value soft-threshold).
Eigen::MatrixXd ProxTraceNorm(const Eigen::MatrixXd& C, double tau);
// argmin_W 1/2 ||W - C||_F^2 + tau ||W||_{2,1}  (row-wise shrinkage).
Eigen::MatrixXd ProxGroupL1(const Eigen::MatrixXd& C, double tau);

// Shared-knowledge operator M applied to every task model. Either a dense
// symmetric d x d matrix or a nonnegative diagonal.
class ProjectionMatrix {
 public:
  enum class Kind { kDense, kDiagonal };

  // `spectrum` may be left empty, in which case it is computed from M.
  static ProjectionMatrix Dense(Eigen::MatrixXd M, double threshold,
                                Eigen::VectorXd spectrum = {});
  static ProjectionMatrix Diagonal(Eigen::VectorXd diag, double threshold);

  Kind kind() const { return kind_; }
  double threshold() const { return threshold_; }
  int dim() const;
  // M * W, column by column.
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& W) const;
  Eigen::MatrixXd ToDense() const;
  // Eigenvalues for dense, diagonal entries for diagonal.
  Eigen::VectorXd Spectrum() const;

 private:
  Kind kind_ = Kind::kDiagonal;
  Eigen::MatrixXd dense_;
  Eigen::VectorXd diag_;
  Eigen::VectorXd spectrum_;
  double threshold_ = 0;
};

// Eigendecomposes Sigma = U diag(Lambda) U^T and returns
// M = U diag(max(0, 1 - tau / sqrt(Lambda_ii))) U^T. Non-positive eigenvalues
// give a zero factor. Throws InvalidInputError when Sigma is asymmetric
// beyond 1e-8 (relative to max(1, max |Sigma_ij|)).
ProjectionMatrix NoisyProjectionLowRank(const Eigen::MatrixXd& Sigma,
                                        double tau);

// Reads only diag(Sigma): M_jj = max(0, 1 - tau / sqrt(|Sigma_jj|)), with
// Sigma_jj == 0 giving 0.
ProjectionMatrix NoisyProjectionGroupSparse(const Eigen::MatrixXd& Sigma,
                                            double tau);

// W W^T, exactly symmetric.
Eigen::MatrixXd FeatureCovariance(const Eigen::MatrixXd& W);

}  // namespace mpmtl

#endif  // MPMTL_PROX_H_
