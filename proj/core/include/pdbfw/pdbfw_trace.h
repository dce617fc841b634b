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

#ifndef PDBFW_PDBFW_TRACE_H_
#define PDBFW_PDBFW_TRACE_H_

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "pdbfw/linalg.h"
#include "pdbfw/losses.h"
#include "pdbfw/lowrank.h"
#include "pdbfw/metrics.h"
#include "pdbfw/sparse_matrix.h"

namespace pdbfw {

// Everything the primal step hands to the low-rank oracle, plus what it got
// back. Passed to TraceSolverConfig::on_lmo after each call.
struct LmoCall {
  long iter = 0;
  const Eigen::MatrixXd* x = nullptr;         // iterate before the step
  const Eigen::MatrixXd* gradient = nullptr;  // Z/n + grad g(X)
  const Eigen::MatrixXd* target = nullptr;    // unconstrained minimizer M
  const LowRankFactor* result = nullptr;
  double curvature = 0.0;                     // L * eta
  double radius = 0.0;
  Index s = 0;
  double gamma = 0.0;
  double eps = 0.0;
};

// Defaults mirror the l1 solver, with k = ceil(n s (1/c + 1/d)),
//   delta = (n/k) (L / (mu n beta) + 5 beta R_k / (2 alpha mu n^2) (1 + 8 L / mu))^-1
// and R_k from max_block_spectral_norm_sq.
struct TraceSolverConfig {
  double lambda = 10.0;
  Index s = 1;
  Index k = 0;
  double eta = 0.0;
  double delta = 0.0;
  long max_iters = 1000;
  double gap_tol = 1e-8;
  // Accuracy target of the approximate oracle; zero means gap_tol.
  double eps_target = 0.0;
  double time_limit = 0.0;
  LowRankOptions lowrank;
  std::function<void(const LmoCall&)> on_lmo;
};

TraceSolverConfig resolve_trace_config(const TraceSolverConfig& cfg,
                                       const SparseDesignMatrix& a,
                                       const LossModel& loss,
                                       const Regularizer& reg);

struct MatrixState {
  Eigen::MatrixXd x;  // d x c
  Eigen::MatrixXd y;  // n x c
  Eigen::MatrixXd w;  // A x
  Eigen::MatrixXd z;  // A^T y
  long iter = 0;
  OpCounter ops;

  static MatrixState zeros(Index n, Index d, Index c);
};

// Moves X toward an approximate rank-s minimizer of the block sub-problem
// and returns that minimizer. W is refreshed through the factors, never by
// forming A X.
LowRankFactor primal_step_trace(MatrixState& state,
                                const TraceSolverConfig& cfg,
                                const SparseDesignMatrix& a,
                                const LossModel& loss, const Regularizer& reg);

// Row-wise dual prox; the k rows that move most (Euclidean norm, lowest
// index on ties) are committed. Returns them sorted.
std::vector<Index> dual_step_trace(MatrixState& state,
                                   const TraceSolverConfig& cfg,
                                   const SparseDesignMatrix& a,
                                   const LossModel& loss);

// Numerical rank: singular values above 1e-10 times the largest.
Index numerical_rank(const Eigen::MatrixXd& m);

struct TraceResult {
  MatrixState state;
  ConvergenceTrace trace;
  TraceSolverConfig config;
  bool converged = false;
};

TraceResult solve_trace(const SparseDesignMatrix& a, const LossModel& loss,
                        const Regularizer& reg, const TraceSolverConfig& cfg);

}  // namespace pdbfw

#endif  // PDBFW_PDBFW_TRACE_H_
