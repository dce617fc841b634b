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

#include "pdbfw/pdbfw_trace.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "pdbfw/errors.h"

namespace pdbfw {

TraceSolverConfig resolve_trace_config(const TraceSolverConfig& cfg,
                                       const SparseDesignMatrix& a,
                                       const LossModel& loss,
                                       const Regularizer& reg) {
  const Index n = a.rows();
  const Index d = a.cols();
  const Index c = loss.outputs();
  if (n < 1 || d < 1 || c < 1) throw ConfigError("empty problem");
  if (!(cfg.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (cfg.s < 1) throw ConfigError("rank budget s must be at least 1");
  if (cfg.k < 0 || cfg.k > n) {
    throw ConfigError("dual block size k=" + std::to_string(cfg.k) +
                      " outside [1, " + std::to_string(n) + "]");
  }
  if (cfg.max_iters < 0) throw ConfigError("max_iters must be non-negative");
  if (cfg.eps_target < 0.0) throw ConfigError("eps_target must be >= 0");

  TraceSolverConfig out = cfg;
  out.s = std::min({cfg.s, d, c});
  if (out.k == 0) {
    // ceil(n s (c + d) / (c d)) in integers.
    const Index num = n * out.s * (c + d);
    const Index den = c * d;
    out.k = std::clamp<Index>((num + den - 1) / den, 1, n);
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
    const double r = max_block_spectral_norm_sq(a, out.k);
    const double nn = static_cast<double>(n);
    const double inv = smooth / (mu * nn * beta) +
                       5.0 * beta * r / (2.0 * alpha * mu * nn * nn) *
                           (1.0 + 8.0 * smooth / mu);
    // The dual prox works with (1/n) f*, so the step is n times the one in
    // the form where f* carries no 1/n; both give the same per-coordinate
    // relative move.
    out.delta = nn / (static_cast<double>(out.k) * inv);
  }
  if (!std::isfinite(out.delta) || !(out.delta > 0.0)) {
    throw ConfigError("dual step delta is not a positive finite number");
  }
  if (out.eps_target == 0.0) out.eps_target = out.gap_tol;
  return out;
}

MatrixState MatrixState::zeros(Index n, Index d, Index c) {
  MatrixState s;
  s.x = Eigen::MatrixXd::Zero(d, c);
  s.y = Eigen::MatrixXd::Zero(n, c);
  s.w = Eigen::MatrixXd::Zero(n, c);
  s.z = Eigen::MatrixXd::Zero(d, c);
  return s;
}

LowRankFactor primal_step_trace(MatrixState& state,
                                const TraceSolverConfig& cfg,
                                const SparseDesignMatrix& a,
                                const LossModel& /*loss*/,
                                const Regularizer& reg) {
  const double n = static_cast<double>(a.rows());
  const double curvature = reg.smoothness() * cfg.eta;
  const Eigen::MatrixXd gradient = state.z / n + reg.mu() * state.x;
  const Eigen::MatrixXd target = state.x - gradient / curvature;

  LowRankOptions options = cfg.lowrank;
  options.curvature = curvature;
  const double gamma = 0.5;
  const double eps = cfg.eps_target / 8.0;
  LowRankFactor step = approx_lowrank_prox(target, cfg.lambda, cfg.s, gamma,
                                           eps, options, &state.ops);
  if (cfg.on_lmo) {
    cfg.on_lmo({state.iter + 1, &state.x, &gradient, &target, &step, curvature,
                cfg.lambda, cfg.s, gamma, eps});
  }

  state.x *= 1.0 - cfg.eta;
  state.w *= 1.0 - cfg.eta;
  if (step.rank() > 0) {
    state.x.noalias() +=
        cfg.eta * (step.left * step.singular.asDiagonal()) *
        step.right.transpose();
    const Eigen::MatrixXd projected = a.multiply(step.left);
    state.w.noalias() += cfg.eta *
                         (projected * step.singular.asDiagonal()) *
                         step.right.transpose();
  }
  const auto r = static_cast<std::uint64_t>(step.rank());
  const auto n_rows = static_cast<std::uint64_t>(a.rows());
  const auto d = static_cast<std::uint64_t>(a.cols());
  const auto c = static_cast<std::uint64_t>(state.x.cols());
  state.ops.add(static_cast<std::uint64_t>(a.nnz()) * r + n_rows * c * r +
                d * c * r + (n_rows + d) * c);
  return step;
}

std::vector<Index> dual_step_trace(MatrixState& state,
                                   const TraceSolverConfig& cfg,
                                   const SparseDesignMatrix& a,
                                   const LossModel& loss) {
  const Index n = a.rows();
  const Index c = state.y.cols();
  Eigen::MatrixXd candidate(n, c);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < c; ++j) {
      candidate(i, j) =
          loss.dual_prox_step(state.w(i, j), state.y(i, j), cfg.delta, n, i, j);
    }
  }
  const Eigen::MatrixXd move = candidate - state.y;
  const Eigen::VectorXd row_moves = move.rowwise().norm();
  std::vector<Index> chosen = top_k_by_magnitude(row_moves, cfg.k);
  std::uint64_t flops = static_cast<std::uint64_t>(n * c);
  for (Index i : chosen) {
    state.y.row(i) = candidate.row(i);
    const SparseDesignMatrix::Slice r = a.row(i);
    for (Index p = 0; p < r.size(); ++p) {
      state.z.row(r.indices[p]) += r.values[p] * move.row(i);
    }
    flops += static_cast<std::uint64_t>(r.size() * c);
  }
  state.ops.add(flops);
  return chosen;
}

Index numerical_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& values = svd.singularValues();
  if (values.size() == 0 || values[0] == 0.0) return 0;
  return static_cast<Index>((values.array() > 1e-10 * values[0]).count());
}

namespace {

TraceRecord make_record(const MatrixState& state, const LossModel& loss,
                        const Regularizer& reg, double lambda,
                        double seconds) {
  TraceRecord r;
  r.iter = state.iter;
  r.seconds = seconds;
  r.primal = loss.mean_loss(state.w) + reg.value(state.x);
  r.dual = nuclear_dual_objective_cached(loss, reg, lambda, state.y, state.z);
  r.gap = r.primal - r.dual;
  r.flops = state.ops.flops;
  r.support = numerical_rank(state.x);
  return r;
}

}  // namespace

TraceResult solve_trace(const SparseDesignMatrix& a, const LossModel& loss,
                        const Regularizer& reg, const TraceSolverConfig& cfg) {
  if (loss.samples() != a.rows()) {
    throw InvalidArgument("solve_trace: loss has " +
                          std::to_string(loss.samples()) +
                          " samples, matrix has " + std::to_string(a.rows()) +
                          " rows");
  }
  TraceResult result;
  result.config = resolve_trace_config(cfg, a, loss, reg);
  const TraceSolverConfig& c = result.config;
  MatrixState& state = result.state;
  state = MatrixState::zeros(a.rows(), a.cols(), loss.outputs());

  using Clock = std::chrono::steady_clock;
  double elapsed = 0.0;
  const auto checked = [](const TraceRecord& r) {
    if (!std::isfinite(r.primal) || !std::isfinite(r.dual)) {
      throw DivergenceError("pdbfw_trace", r.iter);
    }
    return r;
  };
  result.trace.append(checked(make_record(state, loss, reg, c.lambda, elapsed)));
  result.converged = result.trace.back().gap <= c.gap_tol;

  while (!result.converged && state.iter < c.max_iters &&
         (c.time_limit <= 0.0 || elapsed < c.time_limit)) {
    const auto start = Clock::now();
    primal_step_trace(state, c, a, loss, reg);
    dual_step_trace(state, c, a, loss);
    ++state.iter;
    elapsed += std::chrono::duration<double>(Clock::now() - start).count();

    const TraceRecord record = make_record(state, loss, reg, c.lambda, elapsed);
    result.trace.append(checked(record));
    result.converged = record.gap <= c.gap_tol;
  }
  return result;
}

}  // namespace pdbfw
