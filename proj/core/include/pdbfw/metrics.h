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

#ifndef PDBFW_METRICS_H_
#define PDBFW_METRICS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "pdbfw/losses.h"
#include "pdbfw/sparse_matrix.h"

namespace pdbfw {

struct TraceRecord {
  long iter = 0;
  double seconds = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  // Cumulative multiply-adds in matrix kernels since the start of the run.
  std::uint64_t flops = 0;
  // Nonzeros of x, or rank of X.
  Index support = 0;
};

// Per-iteration (or per-epoch) history of one solver run. append() rejects
// records whose iter does not increase.
class ConvergenceTrace {
 public:
  void append(const TraceRecord& record);

  const std::vector<TraceRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  const TraceRecord& back() const { return records_.back(); }
  const TraceRecord& operator[](std::size_t i) const { return records_[i]; }

  // Smallest gap across the trace; +infinity when empty.
  double min_gap() const;

 private:
  std::vector<TraceRecord> records_;
};

// Minimizer of g(x) + (1/n) <z, x> over the l1 ball: P_ball(-z / (n mu)).
Eigen::VectorXd l1_inner_minimizer(const Eigen::VectorXd& z, Index n,
                                   const Regularizer& reg, double radius);
// Same over the trace-norm ball.
Eigen::MatrixXd nuclear_inner_minimizer(const Eigen::MatrixXd& z, Index n,
                                        const Regularizer& reg, double radius);

// D(y) = min_{||x||_1 <= radius} {g(x) + (1/n) <y, A x>} - (1/n) sum f_i*(y_i).
// -infinity when y leaves the conjugate domain.
double dual_objective(const SparseDesignMatrix& a, const LossModel& loss,
                      const Regularizer& reg, double radius,
                      const Eigen::VectorXd& y);
// As above with z = A^T y supplied by the caller.
double dual_objective_cached(const LossModel& loss, const Regularizer& reg,
                             double radius, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& z);

// Trace-norm ball analogues; y and z are n x c and d x c.
double nuclear_dual_objective(const SparseDesignMatrix& a,
                              const LossModel& loss, const Regularizer& reg,
                              double radius, const Eigen::MatrixXd& y);
double nuclear_dual_objective_cached(const LossModel& loss,
                                     const Regularizer& reg, double radius,
                                     const Eigen::MatrixXd& y,
                                     const Eigen::MatrixXd& z);

// L(x, y) = g(x) + (1/n) <y, A x> - (1/n) sum f_i*(y_i).
double lagrangian(const SparseDesignMatrix& a, const LossModel& loss,
                  const Regularizer& reg, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& y);

// P(x) - D(y). Throws InvalidArgument if ||x||_1 > radius (1 + 1e-9).
double duality_gap(const SparseDesignMatrix& a, const LossModel& loss,
                   const Regularizer& reg, double radius,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Weighted analysis gap max{1, beta/alpha - 1} (L(x_next, y) - D(y)) +
// (D* - D(y)), given the optimal dual value D* from a reference solve.
double analysis_gap(const SparseDesignMatrix& a, const LossModel& loss,
                    const Regularizer& reg, double radius,
                    const Eigen::VectorXd& x_next, const Eigen::VectorXd& y,
                    double dual_optimum);

// (P_t - P*) / P* for every record. Throws InvalidArgument if p_star <= 0.
std::vector<double> relative_primal_error(const ConvergenceTrace& trace,
                                          double p_star);

}  // namespace pdbfw

#endif  // PDBFW_METRICS_H_
