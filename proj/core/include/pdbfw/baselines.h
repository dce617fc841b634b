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

#ifndef PDBFW_BASELINES_H_
#define PDBFW_BASELINES_H_

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "pdbfw/losses.h"
#include "pdbfw/metrics.h"
#include "pdbfw/sparse_matrix.h"

namespace pdbfw {

enum class BaselineKind { kFw, kAccPgd, kSvrg };

std::string baseline_name(BaselineKind kind);

struct BaselineConfig {
  BaselineKind kind = BaselineKind::kAccPgd;
  double lambda = 300.0;
  // Zero picks the default: 1/L for acc_pgd, 1/(10 L) for svrg, with
  // L = beta * max_i ||a_i||^2 + mu. Frank-Wolfe always uses 2/(t+2).
  double step_size = 0.0;
  // SVRG inner steps per epoch; zero means n.
  Index epoch_length = 0;
  // Iterations for fw and acc_pgd, epochs for svrg.
  long max_iters = 1000;
  double gap_tol = 1e-8;
  std::uint64_t seed = 1;
  double time_limit = 0.0;
};

struct BaselineResult {
  Eigen::VectorXd x;
  ConvergenceTrace trace;
  BaselineConfig config;
  bool converged = false;
};

// Smoothness of the full objective used by the default step sizes.
double baseline_smoothness(const SparseDesignMatrix& a, const LossModel& loss,
                           const Regularizer& reg);

// Trace records pair x with y = f'(Ax), which is dual feasible and tends to
// the dual optimum as x converges.
BaselineResult solve_fw(const SparseDesignMatrix& a, const LossModel& loss,
                        const Regularizer& reg, const BaselineConfig& cfg);
// FISTA with a restart whenever the objective would go up; the fallback step
// is a plain projected gradient step, so the objective never increases.
BaselineResult solve_acc_pgd(const SparseDesignMatrix& a,
                             const LossModel& loss, const Regularizer& reg,
                             const BaselineConfig& cfg);
// Projected SVRG; the last inner iterate becomes the next snapshot. Samples
// come from Rng(cfg.seed).uniform_index(n).
BaselineResult solve_svrg(const SparseDesignMatrix& a, const LossModel& loss,
                          const Regularizer& reg, const BaselineConfig& cfg);

BaselineResult solve_baseline(const SparseDesignMatrix& a,
                              const LossModel& loss, const Regularizer& reg,
                              const BaselineConfig& cfg);

}  // namespace pdbfw

#endif  // PDBFW_BASELINES_H_
