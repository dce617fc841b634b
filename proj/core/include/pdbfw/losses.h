// Copyright 2026 The PDBFW Authors
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

#ifndef PDBFW_LOSSES_H_
#define PDBFW_LOSSES_H_

#include <Eigen/Core>

#include "pdbfw/sparse_matrix.h"

namespace pdbfw {

enum class LossKind { kSmoothHinge, kQuadratic };

// Interval on which a per-sample conjugate is finite. Unbounded ends are
// +/- infinity.
struct ConjugateBox {
  double lower;
  double upper;

  bool contains(double y) const { return y >= lower && y <= upper; }
  double clamp(double y) const;
};

// Separable per-sample losses f_i(p).
//
//   smooth hinge:  f_i(p) = h(l_i p),   l_i in {-1, +1}
//                  h(z) = 1/2 - z        z < 0
//                         (1 - z)^2 / 2  0 <= z <= 1
//                         0              z > 1
//                  f_i*(y) = y^2/2 + l_i y on the box l_i y in [-1, 0]
//   quadratic:     f_i(p) = (p - b_i)^2 / 2,  f_i*(y) = y^2/2 + b_i y
//
// Quadratic targets may have several columns (one per output of a matrix
// problem); each column is an independent copy of the scalar loss. Both
// families are 1-smooth and 1-strongly convex on their curved region.
class LossModel {
 public:
  // Throws InvalidArgument unless every label is -1 or +1.
  static LossModel smooth_hinge(const Eigen::VectorXd& labels);
  // Targets are n x 1 for vector problems, n x c for matrix problems.
  static LossModel quadratic(const Eigen::MatrixXd& targets);

  LossKind kind() const { return kind_; }
  Index samples() const { return targets_.rows(); }
  Index outputs() const { return targets_.cols(); }
  const Eigen::MatrixXd& targets() const { return targets_; }

  // beta and alpha.
  double smoothness() const { return 1.0; }
  double strong_convexity() const { return 1.0; }

  double value(double p, Index i, Index col = 0) const;
  double derivative(double p, Index i, Index col = 0) const;
  // +infinity outside box(i).
  double conjugate(double y, Index i, Index col = 0) const;
  ConjugateBox box(Index i) const;

  // argmax_u (1/n) w u - (1/n) f_i*(u) - (u - y)^2 / (2 delta).
  // Throws InvalidArgument if delta <= 0.
  double dual_prox_step(double w, double y, double delta, Index n, Index i,
                        Index col = 0) const;

  // (1/n) sum_i f_i(predictions_i), summed over output columns.
  double mean_loss(const Eigen::Ref<const Eigen::MatrixXd>& predictions) const;
  // (1/n) sum_i f_i*(dual_i); +infinity if any entry leaves its box.
  double mean_conjugate(const Eigen::Ref<const Eigen::MatrixXd>& dual) const;
  // Elementwise f_i'(predictions_i).
  Eigen::MatrixXd derivatives(
      const Eigen::Ref<const Eigen::MatrixXd>& predictions) const;

 private:
  LossModel(LossKind kind, Eigen::MatrixXd targets)
      : kind_(kind), targets_(std::move(targets)) {}

  LossKind kind_;
  Eigen::MatrixXd targets_;
};

// g(x) = (mu/2) ||x||^2, so mu-strongly convex and mu-smooth (L = mu).
class Regularizer {
 public:
  // Throws InvalidArgument unless mu is positive and finite.
  explicit Regularizer(double mu);

  double mu() const { return mu_; }
  double smoothness() const { return mu_; }

  template <typename Derived>
  double value(const Eigen::MatrixBase<Derived>& x) const {
    return 0.5 * mu_ * x.squaredNorm();
  }

 private:
  double mu_;
};

// P(x) = (1/n) sum_i f_i(a_i^T x) + g(x).
double primal_objective(const LossModel& loss, const Regularizer& reg,
                        const SparseDesignMatrix& a, const Eigen::VectorXd& x);
double primal_objective(const LossModel& loss, const Regularizer& reg,
                        const SparseDesignMatrix& a, const Eigen::MatrixXd& x);

}  // namespace pdbfw

#endif  // PDBFW_LOSSES_H_
