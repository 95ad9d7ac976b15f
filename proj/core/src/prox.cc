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

#include "mpmtl/prox.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mpmtl/error.h"

namespace mpmtl {
namespace {

constexpr double kSymmetryTol = 1e-8;

double ShrinkFactor(double tau, double variance) {
  const double root = std::sqrt(std::max(0.0, variance));
  if (root == 0) return 0.0;
  return std::max(0.0, 1.0 - tau / root);
}

void CheckTau(double tau) {
  if (!(tau >= 0) || !std::isfinite(tau)) {
    throw InvalidInputError("prox threshold must be nonnegative and finite");
  }
}

}  // namespace

double TraceNorm(const Eigen::MatrixXd& W) {
  if (W.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W);
  return svd.singularValues().sum();
}

double GroupL1Norm(const Eigen::MatrixXd& W) {
  return W.rowwise().norm().sum();
}

Eigen::MatrixXd ProxTraceNorm(const Eigen::MatrixXd& C, double tau) {
  CheckTau(tau);
  if (tau == 0 || C.size() == 0) return C;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd shrunk =
      (svd.singularValues().array() - tau).max(0.0).matrix();
  return svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
}

Eigen::MatrixXd ProxGroupL1(const Eigen::MatrixXd& C, double tau) {
  CheckTau(tau);
  Eigen::MatrixXd out = C;
  if (tau == 0) return out;
  for (Eigen::Index j = 0; j < out.rows(); ++j) {
    const double norm = out.row(j).norm();
    out.row(j) *= norm > 0 ? std::max(0.0, 1.0 - tau / norm) : 0.0;
  }
  return out;
}

ProjectionMatrix ProjectionMatrix::Dense(Eigen::MatrixXd M, double threshold,
                                         Eigen::VectorXd spectrum) {
  ProjectionMatrix p;
  p.kind_ = Kind::kDense;
  if (spectrum.size() == 0 && M.size() > 0) {
    spectrum = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                   M, Eigen::EigenvaluesOnly)
                   .eigenvalues();
  }
  p.dense_ = std::move(M);
  p.spectrum_ = std::move(spectrum);
  p.threshold_ = threshold;
  return p;
}

ProjectionMatrix ProjectionMatrix::Diagonal(Eigen::VectorXd diag,
                                            double threshold) {
  ProjectionMatrix p;
  p.kind_ = Kind::kDiagonal;
  p.spectrum_ = diag;
  p.diag_ = std::move(diag);
  p.threshold_ = threshold;
  return p;
}

int ProjectionMatrix::dim() const {
  return static_cast<int>(kind_ == Kind::kDense ? dense_.rows()
                                                : diag_.size());
}

Eigen::MatrixXd ProjectionMatrix::Apply(const Eigen::MatrixXd& W) const {
  if (W.rows() != dim()) {
    throw InvalidInputError("projection dimension does not match models");
  }
  if (kind_ == Kind::kDense) return dense_ * W;
  return diag_.asDiagonal() * W;
}

Eigen::MatrixXd ProjectionMatrix::ToDense() const {
  if (kind_ == Kind::kDense) return dense_;
  return diag_.asDiagonal();
}

Eigen::VectorXd ProjectionMatrix::Spectrum() const { return spectrum_; }

ProjectionMatrix NoisyProjectionLowRank(const Eigen::MatrixXd& Sigma,
                                        double tau) {
  CheckTau(tau);
  if (Sigma.rows() != Sigma.cols()) {
    throw InvalidInputError("covariance must be square");
  }
  const double scale = std::max(1.0, Sigma.cwiseAbs().maxCoeff());
  if ((Sigma - Sigma.transpose()).cwiseAbs().maxCoeff() >
      kSymmetryTol * scale) {
    throw InvalidInputError("covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Sigma);
  if (eig.info() != Eigen::Success) {
    throw InvalidInputError("eigendecomposition of covariance failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  Eigen::VectorXd factors(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    factors[i] = ShrinkFactor(tau, lambda[i]);
  }
  const Eigen::MatrixXd& U = eig.eigenvectors();
  Eigen::MatrixXd M = U * factors.asDiagonal() * U.transpose();
  M = 0.5 * (M + M.transpose()).eval();
  return ProjectionMatrix::Dense(std::move(M), tau, std::move(factors));
}

ProjectionMatrix NoisyProjectionGroupSparse(const Eigen::MatrixXd& Sigma,
                                            double tau) {
  CheckTau(tau);
  if (Sigma.rows() != Sigma.cols()) {
    throw InvalidInputError("covariance must be square");
  }
  Eigen::VectorXd diag(Sigma.rows());
  for (Eigen::Index j = 0; j < Sigma.rows(); ++j) {
    diag[j] = ShrinkFactor(tau, std::abs(Sigma(j, j)));
  }
  return ProjectionMatrix::Diagonal(std::move(diag), tau);
}

Eigen::MatrixXd FeatureCovariance(const Eigen::MatrixXd& W) {
  Eigen::MatrixXd S = W * W.transpose();
  return 0.5 * (S + S.transpose());
}

}  // namespace mpmtl
