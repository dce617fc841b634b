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

#include "pdbfw/losses.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdbfw/errors.h"

namespace pdbfw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hinge(double z) {
  if (z < 0.0) return 0.5 - z;
  if (z <= 1.0) return 0.5 * (1.0 - z) * (1.0 - z);
  return 0.0;
}

double hinge_derivative(double z) {
  if (z < 0.0) return -1.0;
  if (z <= 1.0) return z - 1.0;
  return 0.0;
}

}  // namespace

double ConjugateBox::clamp(double y) const {
  return std::min(std::max(y, lower), upper);
}

LossModel LossModel::smooth_hinge(const Eigen::VectorXd& labels) {
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw InvalidArgument("smooth hinge label " + std::to_string(labels[i]) +
                            " at sample " + std::to_string(i) +
                            " is not -1 or +1");
    }
  }
  return LossModel(LossKind::kSmoothHinge, labels);
}

LossModel LossModel::quadratic(const Eigen::MatrixXd& targets) {
  if (!targets.allFinite()) {
    throw InvalidArgument("quadratic loss targets must be finite");
  }
  return LossModel(LossKind::kQuadratic, targets);
}

double LossModel::value(double p, Index i, Index col) const {
  const double t = targets_(i, col);
  if (kind_ == LossKind::kSmoothHinge) return hinge(p * t);
  return 0.5 * (p - t) * (p - t);
}

double LossModel::derivative(double p, Index i, Index col) const {
  const double t = targets_(i, col);
  if (kind_ == LossKind::kSmoothHinge) return t * hinge_derivative(p * t);
  return p - t;
}

double LossModel::conjugate(double y, Index i, Index col) const {
  const double t = targets_(i, col);
  if (kind_ == LossKind::kSmoothHinge) {
    const double z = y * t;
    if (z < -1.0 || z > 0.0) return kInf;
    return 0.5 * z * z + z;
  }
  return 0.5 * y * y + t * y;
}

ConjugateBox LossModel::box(Index i) const {
  if (kind_ == LossKind::kQuadratic) return {-kInf, kInf};
  return targets_(i, 0) > 0.0 ? ConjugateBox{-1.0, 0.0}
                              : ConjugateBox{0.0, 1.0};
}

double LossModel::dual_prox_step(double w, double y, double delta, Index n,
                                 Index i, Index col) const {
  if (!(delta > 0.0)) {
    throw InvalidArgument("dual_prox_step: delta must be positive");
  }
  // Stationary point of the concave scalar objective. The conjugate is
  // u^2/2 + t u for both families (labels satisfy t^2 = 1), so only the box
  // differs.
  const double ratio = delta / static_cast<double>(n);
  const double t = targets_(i, col);
  const double u = (y + ratio * (w - t)) / (1.0 + ratio);
  if (kind_ == LossKind::kQuadratic) return u;
  return box(i).clamp(u);
}

double LossModel::mean_loss(
    const Eigen::Ref<const Eigen::MatrixXd>& predictions) const {
  if (predictions.rows() != targets_.rows() ||
      predictions.cols() != targets_.cols()) {
    throw InvalidArgument("mean_loss: prediction shape mismatch");
  }
  double total = 0.0;
  for (Index col = 0; col < predictions.cols(); ++col) {
    for (Index i = 0; i < predictions.rows(); ++i) {
      total += value(predictions(i, col), i, col);
    }
  }
  return total / static_cast<double>(samples());
}

double LossModel::mean_conjugate(
    const Eigen::Ref<const Eigen::MatrixXd>& dual) const {
  if (dual.rows() != targets_.rows() || dual.cols() != targets_.cols()) {
    throw InvalidArgument("mean_conjugate: dual shape mismatch");
  }
  double total = 0.0;
  for (Index col = 0; col < dual.cols(); ++col) {
    for (Index i = 0; i < dual.rows(); ++i) {
      const double c = conjugate(dual(i, col), i, col);
      if (c == kInf) return kInf;
      total += c;
    }
  }
  return total / static_cast<double>(samples());
}

Eigen::MatrixXd LossModel::derivatives(
    const Eigen::Ref<const Eigen::MatrixXd>& predictions) const {
  if (predictions.rows() != targets_.rows() ||
      predictions.cols() != targets_.cols()) {
    throw InvalidArgument("derivatives: prediction shape mismatch");
  }
  Eigen::MatrixXd out(predictions.rows(), predictions.cols());
  for (Index col = 0; col < predictions.cols(); ++col) {
    for (Index i = 0; i < predictions.rows(); ++i) {
      out(i, col) = derivative(predictions(i, col), i, col);
    }
  }
  return out;
}

Regularizer::Regularizer(double mu) : mu_(mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidArgument("regularizer strength mu must be positive");
  }
}

double primal_objective(const LossModel& loss, const Regularizer& reg,
                        const SparseDesignMatrix& a, const Eigen::VectorXd& x) {
  if (x.size() != a.cols() || loss.samples() != a.rows() ||
      loss.outputs() != 1) {
    throw InvalidArgument("primal_objective: dimension mismatch");
  }
  return loss.mean_loss(a.multiply(x)) + reg.value(x);
}

double primal_objective(const LossModel& loss, const Regularizer& reg,
                        const SparseDesignMatrix& a, const Eigen::MatrixXd& x) {
  if (x.rows() != a.cols() || loss.samples() != a.rows() ||
      loss.outputs() != x.cols()) {
    throw InvalidArgument("primal_objective: dimension mismatch");
  }
  return loss.mean_loss(a.multiply(x)) + reg.value(x);
}

}  // namespace pdbfw
