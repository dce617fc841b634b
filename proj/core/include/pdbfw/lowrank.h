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

#ifndef PDBFW_LOWRANK_H_
#define PDBFW_LOWRANK_H_

#include <cstdint>

#include <Eigen/Core>

#include "pdbfw/linalg.h"
#include "pdbfw/sparse_matrix.h"

namespace pdbfw {

// left * diag(singular) * right^T with orthonormal factor columns and
// non-increasing positive singular values.
struct LowRankFactor {
  Eigen::MatrixXd left;
  Eigen::VectorXd singular;
  Eigen::MatrixXd right;

  Index rank() const { return singular.size(); }
  Eigen::MatrixXd to_dense() const;
  static LowRankFactor zero(Index rows, Index cols);
};

struct LowRankOptions {
  // Block size is s + oversampling.
  Index oversampling = 4;
  int max_iterations = 100;
  // Stop once every Ritz residual ||M v_i - theta_i u_i|| is below
  // tolerance * theta_1.
  double tolerance = 1e-10;
  // Scale of the sub-problem objective, l(V) = (curvature/2) ||V - M||^2 +
  // const. Only used to turn residuals into an objective error estimate when
  // the iteration cap is hit.
  double curvature = 1.0;
  std::uint64_t seed = 0x5eed;
};

struct LowRankStats {
  int iterations = 0;
  double residual = 0.0;
  bool exact = false;
};

// Rank-s factor minimizing ||V - M||_F^2 over rank(V) <= s,
// ||V||_* <= radius, up to a (gamma, eps) approximation: the top-s singular
// triplets come from block power iteration with Rayleigh-Ritz extraction and
// the singular values are then projected onto the l1 ball. Falls back to a
// dense SVD when the block would cover min(rows, cols).
//
// If the iteration cap is hit, the factor is still returned when the
// objective error estimate curvature * radius * max_residual is at most eps;
// otherwise ApproximationError carries the residual.
LowRankFactor approx_lowrank_prox(const Eigen::MatrixXd& m, double radius,
                                  Index s, double gamma, double eps,
                                  const LowRankOptions& options = {},
                                  OpCounter* counter = nullptr,
                                  LowRankStats* stats = nullptr);

// Exact Euclidean projection onto the trace-norm ball via a full SVD.
Eigen::MatrixXd project_nuclear_ball(const Eigen::MatrixXd& m, double radius);

// ||A||_2^2 by power iteration on A^T A, run to relative change 1e-12.
double spectral_norm_sq(const SparseDesignMatrix& a,
                        std::uint64_t seed = 0x5eed);

// max over row subsets I with |I| <= k of sigma_max(A_I)^2. Enumerated
// exactly when there are at most max_subsets subsets of size k, otherwise
// bounded above by spectral_norm_sq(A).
double max_block_spectral_norm_sq(const SparseDesignMatrix& a, Index k,
                                  long max_subsets = 2000);

}  // namespace pdbfw

#endif  // PDBFW_LOWRANK_H_
