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

#ifndef PDBFW_PDBFW_L1_H_
#define PDBFW_PDBFW_L1_H_

#include <vector>

#include <Eigen/Core>

#include "pdbfw/linalg.h"
#include "pdbfw/losses.h"
#include "pdbfw/metrics.h"
#include "pdbfw/sparse_matrix.h"

namespace pdbfw {

// Parameters of the l1-ball primal-dual block Frank-Wolfe method. Zero in
// k, eta or delta means "derive the default" (see resolve_config).
struct SolverConfig {
  double lambda = 300.0;
  Index s = 1;
  Index k = 0;
  double eta = 0.0;
  double delta = 0.0;
  long max_iters = 1000;
  double gap_tol = 1e-8;
  // Wall-clock cap in seconds; 0 disables it.
  double time_limit = 0.0;
};

// Fills the defaults:
//   k     = ceil(n s / d), clamped to [1, n]
//   eta   = mu / (2 L)
//   delta = (n/k) (L / (mu n beta) + 5 beta R / (2 alpha mu n^2) (1 + 4 L / mu))^-1
// with R = max_i ||a_i||^2, and clamps s to d. Throws ConfigError when the
// result is out of range or delta is not finite.
SolverConfig resolve_config(const SolverConfig& cfg,
                            const SparseDesignMatrix& a, const LossModel& loss,
                            const Regularizer& reg);

// Iterates plus the cached products w = A x and z = A^T y.
struct SolverState {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd w;
  Eigen::VectorXd z;
  long iter = 0;
  OpCounter ops;

  static SolverState zeros(Index n, Index d);
};

// Block Frank-Wolfe step on x with z from the previous iteration:
//   x~ = argmin_{||u||_1 <= lambda, ||u||_0 <= s} <z/n + grad g(x), u>
//                                               + (L eta / 2) ||u - x||^2
//   x  <- (1 - eta) x + eta x~,   w <- (1 - eta) w + eta A x~.
// Returns x~. Expects a resolved config.
SparseUpdate primal_step(SolverState& state, const SolverConfig& cfg,
                         const SparseDesignMatrix& a, const LossModel& loss,
                         const Regularizer& reg);

// Greedy dual step: proximal candidate y~ for every sample, then the k
// coordinates with the largest |y~_i - y_i| are copied into y and z is
// patched from those rows of A. Returns the chosen indices (sorted).
std::vector<Index> dual_step(SolverState& state, const SolverConfig& cfg,
                             const SparseDesignMatrix& a,
                             const LossModel& loss);

struct L1Result {
  SolverState state;
  ConvergenceTrace trace;
  SolverConfig config;
  bool converged = false;
};

// Runs primal_step then dual_step until the duality gap P(x) - D(y) falls to
// gap_tol or a budget runs out. Record 0 is the starting point. Objectives
// are evaluated from the cached w and z; their cost is excluded from
// `seconds` and `flops`. Throws DivergenceError on a non-finite objective.
L1Result solve(const SparseDesignMatrix& a, const LossModel& loss,
               const Regularizer& reg, const SolverConfig& cfg);

}  // namespace pdbfw

#endif  // PDBFW_PDBFW_L1_H_
