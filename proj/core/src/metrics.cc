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

#include "pdbfw/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pdbfw/errors.h"
#include "pdbfw/linalg.h"
#include "pdbfw/lowrank.h"

namespace pdbfw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void ConvergenceTrace::append(const TraceRecord& record) {
  if (!records_.empty() && record.iter <= records_.back().iter) {
    throw InvalidArgument("trace iterations must increase: " +
                          std::to_string(record.iter) + " after " +
                          std::to_string(records_.back().iter));
  }
  records_.push_back(record);
}

double ConvergenceTrace::min_gap() const {
  double best = kInf;
  for (const TraceRecord& r : records_) best = std::min(best, r.gap);
  return best;
}

Eigen::VectorXd l1_inner_minimizer(const Eigen::VectorXd& z, Index n,
                                   const Regularizer& reg, double radius) {
  const Eigen::VectorXd target = -z / (static_cast<double>(n) * reg.mu());
  return project_l1_ball(target, radius);
}

Eigen::MatrixXd nuclear_inner_minimizer(const Eigen::MatrixXd& z, Index n,
                                        const Regularizer& reg, double radius) {
  const Eigen::MatrixXd target = -z / (static_cast<double>(n) * reg.mu());
  return project_nuclear_ball(target, radius);
}

double dual_objective_cached(const LossModel& loss, const Regularizer& reg,
                             double radius, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& z) {
  if (y.size() != loss.samples()) {
    throw InvalidArgument("dual_objective: y length mismatch");
  }
  const double conj = loss.mean_conjugate(y);
  if (conj == kInf) return -kInf;
  const double n = static_cast<double>(y.size());
  const Eigen::VectorXd x = l1_inner_minimizer(z, y.size(), reg, radius);
  return reg.value(x) + z.dot(x) / n - conj;
}

double dual_objective(const SparseDesignMatrix& a, const LossModel& loss,
                      const Regularizer& reg, double radius,
                      const Eigen::VectorXd& y) {
  if (y.size() != a.rows()) {
    throw InvalidArgument("dual_objective: y length mismatch");
  }
  return dual_objective_cached(loss, reg, radius, y, a.transpose_multiply(y));
}

double nuclear_dual_objective_cached(const LossModel& loss,
                                     const Regularizer& reg, double radius,
                                     const Eigen::MatrixXd& y,
                                     const Eigen::MatrixXd& z) {
  if (y.rows() != loss.samples() || y.cols() != loss.outputs()) {
    throw InvalidArgument("nuclear_dual_objective: Y shape mismatch");
  }
  const double conj = loss.mean_conjugate(y);
  if (conj == kInf) return -kInf;
  const double n = static_cast<double>(y.rows());
  const Eigen::MatrixXd x = nuclear_inner_minimizer(z, y.rows(), reg, radius);
  return reg.value(x) + (z.array() * x.array()).sum() / n - conj;
}

double nuclear_dual_objective(const SparseDesignMatrix& a,
                              const LossModel& loss, const Regularizer& reg,
                              double radius, const Eigen::MatrixXd& y) {
  if (y.rows() != a.rows()) {
    throw InvalidArgument("nuclear_dual_objective: Y shape mismatch");
  }
  return nuclear_dual_objective_cached(loss, reg, radius, y,
                                       a.transpose_multiply(y));
}

double lagrangian(const SparseDesignMatrix& a, const LossModel& loss,
                  const Regularizer& reg, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y) {
  const double conj = loss.mean_conjugate(y);
  if (conj == kInf) return -kInf;
  const double n = static_cast<double>(a.rows());
  return reg.value(x) + y.dot(a.multiply(x)) / n - conj;
}

double duality_gap(const SparseDesignMatrix& a, const LossModel& loss,
                   const Regularizer& reg, double radius,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.lpNorm<1>() > radius * (1.0 + 1e-9)) {
    throw InvalidArgument("duality_gap: x lies outside the l1 ball");
  }
  return primal_objective(loss, reg, a, x) -
         dual_objective(a, loss, reg, radius, y);
}

double analysis_gap(const SparseDesignMatrix& a, const LossModel& loss,
                    const Regularizer& reg, double radius,
                    const Eigen::VectorXd& x_next, const Eigen::VectorXd& y,
                    double dual_optimum) {
  const double weight =
      std::max(1.0, loss.smoothness() / loss.strong_convexity() - 1.0);
  const double dual = dual_objective(a, loss, reg, radius, y);
  return weight * (lagrangian(a, loss, reg, x_next, y) - dual) +
         (dual_optimum - dual);
}

std::vector<double> relative_primal_error(const ConvergenceTrace& trace,
                                          double p_star) {
  if (!(p_star > 0.0)) {
    throw InvalidArgument("relative_primal_error: reference objective must be "
                          "positive");
  }
  std::vector<double> out;
  out.reserve(trace.size());
  for (const TraceRecord& r : trace.records()) {
    out.push_back((r.primal - p_star) / p_star);
  }
  return out;
}

}  // namespace pdbfw
