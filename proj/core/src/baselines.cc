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

#include "pdbfw/baselines.h"

#include <chrono>
#include <cmath>

#include "pdbfw/errors.h"
#include "pdbfw/linalg.h"
#include "pdbfw/random.h"

namespace pdbfw {
namespace {

using Clock = std::chrono::steady_clock;

void validate(const SparseDesignMatrix& a, const LossModel& loss,
              const BaselineConfig& cfg) {
  if (loss.samples() != a.rows() || loss.outputs() != 1) {
    throw InvalidArgument("baseline: loss and matrix disagree on n");
  }
  if (a.rows() < 1 || a.cols() < 1) throw ConfigError("empty data matrix");
  if (!(cfg.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (cfg.step_size < 0.0) throw ConfigError("step size must be >= 0");
  if (cfg.epoch_length < 0) throw ConfigError("epoch length must be >= 0");
  if (cfg.max_iters < 0) throw ConfigError("max_iters must be non-negative");
}

// Tracks records and stopping for one baseline run.
class Recorder {
 public:
  Recorder(const SparseDesignMatrix& a, const LossModel& loss,
           const Regularizer& reg, const BaselineConfig& cfg,
           const char* name, BaselineResult& result)
      : a_(a), loss_(loss), reg_(reg), cfg_(cfg), name_(name),
        result_(result) {}

  void start() { tick_ = Clock::now(); }

  void record(long iter, const Eigen::VectorXd& x, std::uint64_t flops) {
    elapsed_ += std::chrono::duration<double>(Clock::now() - tick_).count();
    const Eigen::VectorXd w = a_.multiply(x);
    const Eigen::VectorXd y = loss_.derivatives(w).col(0);
    TraceRecord r;
    r.iter = iter;
    r.seconds = elapsed_;
    r.primal = primal_objective(loss_, reg_, a_, x);
    r.dual = dual_objective(a_, loss_, reg_, cfg_.lambda, y);
    r.gap = r.primal - r.dual;
    r.flops = flops;
    r.support = static_cast<Index>((x.array() != 0.0).count());
    if (!std::isfinite(r.primal) || !std::isfinite(r.dual)) {
      throw DivergenceError(name_, iter);
    }
    result_.trace.append(r);
    result_.converged = r.gap <= cfg_.gap_tol;
    tick_ = Clock::now();
  }

  bool keep_going(long iter) const {
    return !result_.converged && iter < cfg_.max_iters &&
           (cfg_.time_limit <= 0.0 || elapsed_ < cfg_.time_limit);
  }

 private:
  const SparseDesignMatrix& a_;
  const LossModel& loss_;
  const Regularizer& reg_;
  const BaselineConfig& cfg_;
  const char* name_;
  BaselineResult& result_;
  Clock::time_point tick_;
  double elapsed_ = 0.0;
};

Eigen::VectorXd full_gradient(const SparseDesignMatrix& a,
                              const LossModel& loss, const Regularizer& reg,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& w) {
  const double n = static_cast<double>(a.rows());
  return a.transpose_multiply(Eigen::VectorXd(loss.derivatives(w).col(0))) / n +
         reg.mu() * x;
}

}  // namespace

std::string baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kFw:
      return "fw";
    case BaselineKind::kAccPgd:
      return "acc_pgd";
    case BaselineKind::kSvrg:
      return "svrg";
  }
  return "unknown";
}

double baseline_smoothness(const SparseDesignMatrix& a, const LossModel& loss,
                           const Regularizer& reg) {
  return loss.smoothness() * a.max_row_norm_sq() + reg.smoothness();
}

BaselineResult solve_fw(const SparseDesignMatrix& a, const LossModel& loss,
                        const Regularizer& reg, const BaselineConfig& cfg) {
  validate(a, loss, cfg);
  BaselineResult result;
  result.config = cfg;
  Recorder rec(a, loss, reg, cfg, "fw", result);
  const auto nnz = static_cast<std::uint64_t>(a.nnz());
  OpCounter ops;

  rec.start();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.cols());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(a.rows());
  rec.record(0, x, ops.flops);
  long t = 0;
  while (rec.keep_going(t)) {
    const Eigen::VectorXd g = full_gradient(a, loss, reg, x, w);
    ops.add(nnz + static_cast<std::uint64_t>(a.cols()));
    Index j = 0;
    const double top = g.cwiseAbs().maxCoeff(&j);
    if (top > 0.0) {
      const double eta = 2.0 / (static_cast<double>(t) + 2.0);
      const double vertex = g[j] > 0.0 ? -cfg.lambda : cfg.lambda;
      x *= 1.0 - eta;
      x[j] += eta * vertex;
      SparseUpdate step;
      step.indices = {j};
      step.values = {vertex};
      scale_add_columns(a, step, 1.0 - eta, eta, w, &ops);
    }
    ++t;
    rec.record(t, x, ops.flops);
  }
  result.x = x;
  return result;
}

BaselineResult solve_acc_pgd(const SparseDesignMatrix& a,
                             const LossModel& loss, const Regularizer& reg,
                             const BaselineConfig& cfg) {
  validate(a, loss, cfg);
  BaselineResult result;
  result.config = cfg;
  if (result.config.step_size == 0.0) {
    result.config.step_size = 1.0 / baseline_smoothness(a, loss, reg);
  }
  const double step = result.config.step_size;
  Recorder rec(a, loss, reg, result.config, "acc_pgd", result);
  const auto nnz = static_cast<std::uint64_t>(a.nnz());
  const auto d = static_cast<std::uint64_t>(a.cols());
  OpCounter ops;

  rec.start();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.cols());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(a.rows());
  double objective = loss.mean_loss(w) + reg.value(x);
  Eigen::VectorXd v = x;
  double t = 1.0;
  rec.record(0, x, ops.flops);
  long iter = 0;
  while (rec.keep_going(iter)) {
    const Eigen::VectorXd wv = a.multiply(v);
    Eigen::VectorXd next =
        project_l1_ball(v - step * full_gradient(a, loss, reg, v, wv),
                        cfg.lambda);
    Eigen::VectorXd w_next = a.multiply(next);
    double next_objective = loss.mean_loss(w_next) + reg.value(next);
    ops.add(3 * nnz + 2 * d);
    if (next_objective > objective) {
      // Restart from x with a plain projected gradient step.
      t = 1.0;
      next = project_l1_ball(x - step * full_gradient(a, loss, reg, x, w),
                             cfg.lambda);
      w_next = a.multiply(next);
      next_objective = loss.mean_loss(w_next) + reg.value(next);
      ops.add(2 * nnz + 2 * d);
    }
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    v = next + ((t - 1.0) / t_next) * (next - x);
    x = std::move(next);
    w = std::move(w_next);
    objective = next_objective;
    t = t_next;
    ++iter;
    rec.record(iter, x, ops.flops);
  }
  result.x = x;
  return result;
}

BaselineResult solve_svrg(const SparseDesignMatrix& a, const LossModel& loss,
                          const Regularizer& reg, const BaselineConfig& cfg) {
  validate(a, loss, cfg);
  BaselineResult result;
  result.config = cfg;
  if (result.config.step_size == 0.0) {
    result.config.step_size = 0.1 / baseline_smoothness(a, loss, reg);
  }
  if (result.config.epoch_length == 0) result.config.epoch_length = a.rows();
  const double step = result.config.step_size;
  const Index n = a.rows();
  Recorder rec(a, loss, reg, result.config, "svrg", result);
  const auto nnz = static_cast<std::uint64_t>(a.nnz());
  const auto d = static_cast<std::uint64_t>(a.cols());
  OpCounter ops;
  Rng rng(cfg.seed);

  rec.start();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.cols());
  rec.record(0, x, ops.flops);
  long epoch = 0;
  while (rec.keep_going(epoch)) {
    const Eigen::VectorXd snapshot_w = a.multiply(x);
    const Eigen::VectorXd snapshot_deriv = loss.derivatives(snapshot_w).col(0);
    // Data part of the snapshot gradient; the regularizer is handled exactly.
    const Eigen::VectorXd anchor =
        a.transpose_multiply(snapshot_deriv) / static_cast<double>(n);
    ops.add(2 * nnz);
    for (Index m = 0; m < result.config.epoch_length; ++m) {
      const Index i = rng.uniform_index(n);
      const SparseDesignMatrix::Slice row = a.row(i);
      double pred = 0.0;
      for (Index p = 0; p < row.size(); ++p) {
        pred += row.values[p] * x[row.indices[p]];
      }
      const double correction =
          loss.derivative(pred, i) - snapshot_deriv[i];
      Eigen::VectorXd direction = anchor + reg.mu() * x;
      for (Index p = 0; p < row.size(); ++p) {
        direction[row.indices[p]] += correction * row.values[p];
      }
      x = project_l1_ball(x - step * direction, cfg.lambda);
      ops.add(2 * static_cast<std::uint64_t>(row.size()) + 3 * d);
    }
    ++epoch;
    rec.record(epoch, x, ops.flops);
  }
  result.x = x;
  return result;
}

BaselineResult solve_baseline(const SparseDesignMatrix& a,
                              const LossModel& loss, const Regularizer& reg,
                              const BaselineConfig& cfg) {
  switch (cfg.kind) {
    case BaselineKind::kFw:
      return solve_fw(a, loss, reg, cfg);
    case BaselineKind::kAccPgd:
      return solve_acc_pgd(a, loss, reg, cfg);
    case BaselineKind::kSvrg:
      return solve_svrg(a, loss, reg, cfg);
  }
  throw InvalidArgument("solve_baseline: unknown kind");
}

}  // namespace pdbfw
