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

#include "pdbfw/pdbfw_l1.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "pdbfw/errors.h"

namespace pdbfw {

SolverConfig resolve_config(const SolverConfig& cfg,
                            const SparseDesignMatrix& a, const LossModel& loss,
                            const Regularizer& reg) {
  const Index n = a.rows();
  const Index d = a.cols();
  if (n < 1 || d < 1) throw ConfigError("empty data matrix");
  if (!(cfg.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (cfg.s < 1) throw ConfigError("sparsity budget s must be at least 1");
  if (cfg.k < 0 || cfg.k > n) {
    throw ConfigError("dual block size k=" + std::to_string(cfg.k) +
                      " outside [1, " + std::to_string(n) + "]");
  }
  if (cfg.max_iters < 0) throw ConfigError("max_iters must be non-negative");

  SolverConfig out = cfg;
  out.s = std::min(cfg.s, d);
  if (out.k == 0) {
    const Index wanted = (n * out.s + d - 1) / d;
    out.k = std::clamp<Index>(wanted, 1, n);
  }
  const double mu = reg.mu();
  const double smooth = reg.smoothness();
  if (out.eta == 0.0) out.eta = mu / (2.0 * smooth);
  if (!(out.eta > 0.0 && out.eta <= 1.0)) {
    throw ConfigError("primal step eta must lie in (0, 1]");
  }
  if (out.delta == 0.0) {
    const double beta = loss.smoothness();
    const double alpha = loss.strong_convexity();
    const double r = a.max_row_norm_sq();
    const double nn = static_cast<double>(n);
    const double inv = smooth / (mu * nn * beta) +
                       5.0 * beta * r / (2.0 * alpha * mu * nn * nn) *
                           (1.0 + 4.0 * smooth / mu);
    // The dual prox works with (1/n) f*, so the step is n times the one in
    // the form where f* carries no 1/n; both give the same per-coordinate
    // relative move.
    out.delta = nn / (static_cast<double>(out.k) * inv);
  }
  if (!std::isfinite(out.delta) || !(out.delta > 0.0)) {
    throw ConfigError("dual step delta is not a positive finite number");
  }
  return out;
}

SolverState SolverState::zeros(Index n, Index d) {
  SolverState s;
  s.x = Eigen::VectorXd::Zero(d);
  s.y = Eigen::VectorXd::Zero(n);
  s.w = Eigen::VectorXd::Zero(n);
  s.z = Eigen::VectorXd::Zero(d);
  return s;
}

SparseUpdate primal_step(SolverState& state, const SolverConfig& cfg,
                         const SparseDesignMatrix& a, const LossModel& /*loss*/,
                         const Regularizer& reg) {
  const double n = static_cast<double>(a.rows());
  const double scale = 1.0 / (reg.smoothness() * cfg.eta);
  // Unconstrained minimizer of the block sub-problem.
  const Eigen::VectorXd v =
      state.x - scale * (state.z / n + reg.mu() * state.x);
  SparseUpdate target =
      sparse_l1_prox(v, cfg.lambda, std::min<Index>(cfg.s, v.size()));

  state.x *= 1.0 - cfg.eta;
  for (std::size_t p = 0; p < target.indices.size(); ++p) {
    state.x[target.indices[p]] += cfg.eta * target.values[p];
  }
  scale_add_columns(a, target, 1.0 - cfg.eta, cfg.eta, state.w, &state.ops);
  return target;
}

std::vector<Index> dual_step(SolverState& state, const SolverConfig& cfg,
                             const SparseDesignMatrix& a,
                             const LossModel& loss) {
  const Index n = a.rows();
  Eigen::VectorXd candidate(n);
  for (Index i = 0; i < n; ++i) {
    candidate[i] = loss.dual_prox_step(state.w[i], state.y[i], cfg.delta, n, i);
  }
  const Eigen::VectorXd move = candidate - state.y;
  std::vector<Index> chosen = top_k_by_magnitude(move, cfg.k);
  std::vector<double> increments(chosen.size());
  for (std::size_t p = 0; p < chosen.size(); ++p) {
    increments[p] = move[chosen[p]];
    state.y[chosen[p]] = candidate[chosen[p]];
  }
  add_row_combination(a, chosen, increments, state.z, &state.ops);
  return chosen;
}

namespace {

Index count_nonzeros(const Eigen::VectorXd& x) {
  return static_cast<Index>((x.array() != 0.0).count());
}

TraceRecord make_record(const SolverState& state, const LossModel& loss,
                        const Regularizer& reg, double lambda,
                        double seconds) {
  TraceRecord r;
  r.iter = state.iter;
  r.seconds = seconds;
  r.primal = loss.mean_loss(state.w) + reg.value(state.x);
  r.dual = dual_objective_cached(loss, reg, lambda, state.y, state.z);
  r.gap = r.primal - r.dual;
  r.flops = state.ops.flops;
  r.support = count_nonzeros(state.x);
  return r;
}

}  // namespace

L1Result solve(const SparseDesignMatrix& a, const LossModel& loss,
               const Regularizer& reg, const SolverConfig& cfg) {
  if (loss.samples() != a.rows() || loss.outputs() != 1) {
    throw InvalidArgument("solve: loss has " + std::to_string(loss.samples()) +
                          " samples, matrix has " + std::to_string(a.rows()) +
                          " rows");
  }
  L1Result result;
  result.config = resolve_config(cfg, a, loss, reg);
  const SolverConfig& c = result.config;
  SolverState& state = result.state;
  state = SolverState::zeros(a.rows(), a.cols());

  using Clock = std::chrono::steady_clock;
  double elapsed = 0.0;
  const auto checked = [](const TraceRecord& r) {
    if (!std::isfinite(r.primal) || !std::isfinite(r.dual)) {
      throw DivergenceError("pdbfw", r.iter);
    }
    return r;
  };
  result.trace.append(checked(make_record(state, loss, reg, c.lambda, elapsed)));
  result.converged = result.trace.back().gap <= c.gap_tol;

  while (!result.converged && state.iter < c.max_iters &&
         (c.time_limit <= 0.0 || elapsed < c.time_limit)) {
    const auto start = Clock::now();
    primal_step(state, c, a, loss, reg);
    dual_step(state, c, a, loss);
    ++state.iter;
    elapsed += std::chrono::duration<double>(Clock::now() - start).count();

    const TraceRecord record = make_record(state, loss, reg, c.lambda, elapsed);
    result.trace.append(checked(record));
    result.converged = record.gap <= c.gap_tol;
  }
  return result;
}

}  // namespace pdbfw
