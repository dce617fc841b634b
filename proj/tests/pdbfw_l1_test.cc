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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "oracles.h"
#include "pdbfw/data_io.h"
#include "pdbfw/errors.h"
#include "pdbfw/random.h"

namespace pdbfw {
namespace {

LossModel quadratic(const Eigen::VectorXd& b) { return LossModel::quadratic(b); }

SyntheticProblem regression(Index n, Index d, Index sparsity,
                            std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n = n;
  spec.d = d;
  spec.structure = sparsity;
  spec.noise = 0.1;
  spec.seed = seed;
  spec.normalize = true;
  return generate_synthetic(spec);
}

TEST(ResolveConfig, Defaults) {
  const auto a = SparseDesignMatrix::identity(10);
  const LossModel loss = quadratic(Eigen::VectorXd::Ones(10));
  SolverConfig cfg;
  cfg.s = 3;
  const SolverConfig out = resolve_config(cfg, a, loss, Regularizer(0.5));
  EXPECT_EQ(out.k, 3);
  EXPECT_EQ(out.eta, 0.5);
  // beta = alpha = 1, R = 1, L = mu: inv = 1/n + 5/(2 mu n^2) * 5.
  const double inv = 1.0 / 10.0 + 12.5 / (0.5 * 100.0);
  EXPECT_NEAR(out.delta, 10.0 / (3.0 * inv), 1e-12);
}

TEST(ResolveConfig, BlockSizeClampsAndSparsityClamps) {
  const auto a = SparseDesignMatrix::from_dense(Eigen::MatrixXd::Ones(4, 100));
  const LossModel loss = quadratic(Eigen::VectorXd::Zero(4));
  SolverConfig cfg;
  cfg.s = 1;
  EXPECT_EQ(resolve_config(cfg, a, loss, Regularizer(1.0)).k, 1);
  cfg.s = 500;
  const SolverConfig out = resolve_config(cfg, a, loss, Regularizer(1.0));
  EXPECT_EQ(out.s, 100);
  EXPECT_EQ(out.k, 4);
}

TEST(ResolveConfig, RejectsInvalidValues) {
  const auto a = SparseDesignMatrix::identity(3);
  const LossModel loss = quadratic(Eigen::VectorXd::Zero(3));
  const Regularizer reg(1.0);
  SolverConfig cfg;
  cfg.lambda = 0.0;
  EXPECT_THROW(resolve_config(cfg, a, loss, reg), ConfigError);
  cfg = {};
  cfg.s = 0;
  EXPECT_THROW(resolve_config(cfg, a, loss, reg), ConfigError);
  cfg = {};
  cfg.k = 4;
  EXPECT_THROW(resolve_config(cfg, a, loss, reg), ConfigError);
  cfg = {};
  cfg.eta = 1.5;
  EXPECT_THROW(resolve_config(cfg, a, loss, reg), ConfigError);
  cfg = {};
  cfg.delta = -1.0;
  EXPECT_THROW(resolve_config(cfg, a, loss, reg), ConfigError);
}

TEST(ResolveConfig, NonFiniteDefaultStepFailsFast) {
  const auto a = SparseDesignMatrix::from_dense(
      Eigen::MatrixXd::Constant(2, 2, 1e300));
  const LossModel loss = quadratic(Eigen::VectorXd::Zero(2));
  EXPECT_THROW(resolve_config({}, a, loss, Regularizer(1e-300)), ConfigError);
}

TEST(PrimalStep, StationaryAtOrigin) {
  const auto a = SparseDesignMatrix::identity(3);
  const LossModel loss = quadratic(Eigen::VectorXd::Zero(3));
  SolverConfig cfg = resolve_config({.lambda = 1.0, .s = 1}, a, loss,
                                    Regularizer(1.0));
  SolverState state = SolverState::zeros(3, 3);
  const SparseUpdate target = primal_step(state, cfg, a, loss, Regularizer(1.0));
  EXPECT_EQ(state.x.norm(), 0.0);
  EXPECT_EQ(state.w.norm(), 0.0);
  for (double v : target.values) EXPECT_EQ(v, 0.0);
}

TEST(PrimalStep, SingleCoordinateExample) {
  const auto a = SparseDesignMatrix::from_dense(Eigen::RowVector3d(1.0, 2.0, 3.0));
  const LossModel loss = quadratic(Eigen::VectorXd::Zero(1));
  const SolverConfig cfg{.lambda = 1.0, .s = 1, .k = 1, .eta = 0.5, .delta = 1.0};
  SolverState state = SolverState::zeros(1, 3);
  state.z = Eigen::Vector3d(-4.0, 1.0, 0.0);
  const SparseUpdate target = primal_step(state, cfg, a, loss, Regularizer(1.0));
  ASSERT_EQ(target.support_size(), 1);
  EXPECT_EQ(target.indices[0], 0);
  EXPECT_DOUBLE_EQ(target.values[0], 1.0);
  EXPECT_DOUBLE_EQ(state.x[0], 0.5);
  EXPECT_EQ(state.x[1], 0.0);
  EXPECT_DOUBLE_EQ(state.w[0], 0.5);
}

TEST(PrimalStepProperty, BlockSubproblemMatchesEnumeration) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = 2 + rng.uniform_index(8);
    const Index n = 1 + rng.uniform_index(6);
    const Eigen::MatrixXd dense = oracle::random_dense(n, d, rng);
    const auto a = SparseDesignMatrix::from_dense(dense);
    const LossModel loss = quadratic(oracle::random_vector(n, rng));
    const Regularizer reg(0.2 + rng.uniform());
    const Index s = 1 + rng.uniform_index(3);
    const double lambda = 0.2 + 2.0 * rng.uniform();
    const SolverConfig cfg = resolve_config({.lambda = lambda, .s = s}, a,
                                            loss, reg);
    SolverState state = SolverState::zeros(n, d);
    state.x = oracle::l1_projection(oracle::random_vector(d, rng), lambda);
    state.w = dense * state.x;
    state.z = oracle::random_vector(d, rng);
    const Eigen::VectorXd x = state.x;
    const Eigen::VectorXd v =
        x - (state.z / static_cast<double>(n) + reg.mu() * x) /
                (reg.smoothness() * cfg.eta);
    const SparseUpdate target = primal_step(state, cfg, a, loss, reg);
    Eigen::VectorXd xt = Eigen::VectorXd::Zero(d);
    for (std::size_t p = 0; p < target.indices.size(); ++p) {
      xt[target.indices[p]] = target.values[p];
    }
    const oracle::ProxSolution best =
        oracle::sparse_prox_by_enumeration(v, lambda, std::min(s, d));
    ASSERT_LE((xt - v).squaredNorm(), best.objective + 1e-10);
    ASSERT_LT((state.x - ((1.0 - cfg.eta) * x + cfg.eta * xt)).norm(), 1e-12);
  }
}

TEST(DualStep, AllTiesKeepsState) {
  const auto a = SparseDesignMatrix::identity(4);
  // Quadratic with targets equal to w: the prox fixed point is y = 0.
  const LossModel loss = quadratic(Eigen::VectorXd::Zero(4));
  const SolverConfig cfg{.lambda = 1.0, .s = 1, .k = 2, .eta = 0.5, .delta = 1.0};
  SolverState state = SolverState::zeros(4, 4);
  const std::vector<Index> chosen = dual_step(state, cfg, a, loss);
  EXPECT_EQ(chosen, (std::vector<Index>{0, 1}));
  EXPECT_EQ(state.y.norm(), 0.0);
  EXPECT_EQ(state.z.norm(), 0.0);
}

TEST(DualStep, TwoSampleHingeExample) {
  const auto a = SparseDesignMatrix::identity(2);
  const LossModel loss = LossModel::smooth_hinge(Eigen::Vector2d(1.0, 1.0));
  const SolverConfig cfg{.lambda = 1.0, .s = 1, .k = 1, .eta = 0.5, .delta = 1.0};
  SolverState state = SolverState::zeros(2, 2);
  state.w = Eigen::Vector2d(0.0, -10.0);
  const std::vector<Index> chosen = dual_step(state, cfg, a, loss);
  EXPECT_EQ(chosen, (std::vector<Index>{1}));
  EXPECT_EQ(state.y[0], 0.0);
  EXPECT_EQ(state.y[1], -1.0);
  EXPECT_EQ(state.z[1], -1.0);
}

TEST(DualStep, FullBlockMatchesDenseProx) {
  Rng rng(15);
  const Index n = 9;
  const Eigen::MatrixXd dense = oracle::random_dense(n, 5, rng, 0.7);
  const auto a = SparseDesignMatrix::from_dense(dense);
  const LossModel loss = LossModel::smooth_hinge(oracle::random_labels(n, rng));
  const SolverConfig cfg{.lambda = 1.0, .s = 1, .k = n, .eta = 0.5, .delta = 2.5};
  SolverState state = SolverState::zeros(n, 5);
  state.w = oracle::random_vector(n, rng);
  Eigen::VectorXd expected(n);
  for (Index i = 0; i < n; ++i) {
    expected[i] = oracle::dual_prox(loss, state.w[i], 0.0, 2.5, n, i);
  }
  dual_step(state, cfg, a, loss);
  EXPECT_LT((state.y - expected).norm(), 1e-14);
  EXPECT_LT((state.z - dense.transpose() * expected).norm(), 1e-12);
}

// Independent dense implementation of the full-budget iteration.
TEST(SolveProperty, FullBudgetMatchesDenseTrajectory) {
  Rng rng(16);
  const Index n = 12;
  const Index d = 7;
  const Eigen::MatrixXd dense = oracle::random_dense(n, d, rng);
  const auto a = SparseDesignMatrix::from_dense(dense);
  const Eigen::VectorXd labels = oracle::random_labels(n, rng);
  const LossModel loss = LossModel::smooth_hinge(labels);
  const double mu = 0.3;
  const double lambda = 0.8;
  const SolverConfig cfg{.lambda = lambda, .s = d, .k = n, .eta = 0.5,
                         .delta = 3.0, .max_iters = 40, .gap_tol = 0.0};
  const L1Result result = solve(a, loss, Regularizer(mu), cfg);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  const double nn = static_cast<double>(n);
  for (int t = 0; t < 40; ++t) {
    const Eigen::VectorXd grad = dense.transpose() * y / nn + mu * x;
    const Eigen::VectorXd xt = oracle::l1_projection(x - grad / (mu * 0.5),
                                                     lambda);
    x = 0.5 * x + 0.5 * xt;
    const Eigen::VectorXd w = dense * x;
    for (Index i = 0; i < n; ++i) {
      y[i] = oracle::dual_prox(loss, w[i], y[i], 3.0, nn, i);
    }
  }
  EXPECT_LT((result.state.x - x).norm(), 1e-9);
  EXPECT_LT((result.state.y - y).norm(), 1e-9);
}

TEST(Solve, ZeroProblem) {
  Rng rng(17);
  const auto a = SparseDesignMatrix::from_dense(oracle::random_dense(6, 4, rng));
  const LossModel loss = quadratic(Eigen::VectorXd::Zero(6));
  const L1Result result = solve(a, loss, Regularizer(1.0), {.lambda = 3.0});
  EXPECT_TRUE(result.converged);
  EXPECT_EQ(result.state.x.norm(), 0.0);
  EXPECT_EQ(result.state.y.norm(), 0.0);
  EXPECT_EQ(result.trace.back().gap, 0.0);
}

TEST(Solve, DivergenceNamesIteration) {
  const auto a = SparseDesignMatrix::identity(2);
  const LossModel loss = quadratic(Eigen::VectorXd::Constant(2, 1e200));
  try {
    solve(a, loss, Regularizer(1.0), {.lambda = 1.0});
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.iteration(), 0);
  }
}

TEST(Solve, RejectsShapeMismatch) {
  const auto a = SparseDesignMatrix::identity(3);
  const LossModel loss = quadratic(Eigen::VectorXd::Zero(2));
  EXPECT_THROW(solve(a, loss, Regularizer(1.0), {}), InvalidArgument);
}

TEST(SolveProperty, InvariantsAlongTrajectory) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SyntheticProblem p = regression(60, 40, 4, seed);
    const Dataset& ds = p.dataset;
    const bool hinge = seed % 2 == 0;
    const LossModel loss =
        hinge ? LossModel::smooth_hinge(Eigen::VectorXd(
                    (ds.labels().array() >= 0.0).cast<double>() * 2.0 - 1.0))
              : LossModel::quadratic(ds.labels());
    const Regularizer reg(10.0 / 60.0);
    const double lambda = 0.5 * p.x0.lpNorm<1>();
    const Index s = 3;
    const SolverConfig cfg =
        resolve_config({.lambda = lambda, .s = s}, ds.a, loss, reg);
    SolverState state = SolverState::zeros(60, 40);
    for (long t = 1; t <= 60; ++t) {
      const std::uint64_t before = state.ops.flops;
      const SparseUpdate target = primal_step(state, cfg, ds.a, loss, reg);
      const std::vector<Index> rows = dual_step(state, cfg, ds.a, loss);
      state.iter = t;
      std::uint64_t touched = 60 + 40;
      for (Index j : target.indices) touched += ds.a.col(j).indices.size();
      for (Index i : rows) touched += ds.a.row(i).indices.size();
      ASSERT_LE(state.ops.flops - before, 2 * touched);
      ASSERT_LE(state.x.lpNorm<1>(), lambda * (1.0 + 1e-12));
      ASSERT_LE((state.x.array() != 0.0).count(), std::min<long>(40, s * t));
      for (Index i = 0; i < 60; ++i) ASSERT_TRUE(loss.box(i).contains(state.y[i]));
      const double gap = duality_gap(ds.a, loss, reg, lambda, state.x, state.y);
      ASSERT_GE(gap, -1e-9);
    }
  }
}

TEST(SolveProperty, TraceInvariants) {
  const SyntheticProblem p = regression(80, 50, 5, 9);
  const LossModel loss = LossModel::quadratic(p.dataset.labels());
  const L1Result result =
      solve(p.dataset.a, loss, Regularizer(10.0 / 80.0),
            {.lambda = p.x0.lpNorm<1>(), .s = 50, .max_iters = 300});
  long prev = -1;
  for (const TraceRecord& r : result.trace.records()) {
    EXPECT_GT(r.iter, prev);
    prev = r.iter;
    EXPECT_NEAR(r.gap, r.primal - r.dual, 1e-12);
    EXPECT_GE(r.gap, -1e-9);
  }
  EXPECT_TRUE(result.converged);
}

// gap(200) <= 1e-4 gap(10) with a negative log-gap slope on a
// well-conditioned instance whose optimum is within the sparsity budget.
TEST(SolveProperty, LinearConvergence) {
  const SyntheticProblem p = regression(200, 100, 8, 3);
  const LossModel loss = LossModel::quadratic(p.dataset.labels());
  const L1Result result =
      solve(p.dataset.a, loss, Regularizer(10.0 / 200.0),
            {.lambda = p.x0.lpNorm<1>(), .s = 100, .max_iters = 200,
             .gap_tol = 0.0});
  const auto& recs = result.trace.records();
  ASSERT_GT(recs.size(), 10u);
  const double gap10 = recs[10].gap;
  const double gap200 = recs.back().gap;
  EXPECT_LE(gap200, 1e-4 * gap10);
  std::vector<double> gaps;
  for (std::size_t i = 10; i < recs.size(); ++i) {
    if (recs[i].gap > 0.0) gaps.push_back(recs[i].gap);
  }
  EXPECT_LT(oracle::log_slope(gaps), 0.0);
}

// Binary classification stand-in for a small LIBSVM subset, with the
// experimental protocol lambda = 300, mu = 10/n and smooth hinge.
TEST(SolveProperty, ClassificationGapDecreasesGeometrically) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kSparseClassification;
  spec.n = 120;
  spec.d = 300;
  spec.structure = 10;
  spec.noise = 0.1;
  spec.seed = 4;
  spec.normalize = true;
  const SyntheticProblem p = generate_synthetic(spec);
  const LossModel loss = LossModel::smooth_hinge(p.dataset.labels());
  const L1Result result =
      solve(p.dataset.a, loss, Regularizer(10.0 / 120.0),
            {.lambda = 300.0, .s = 300, .max_iters = 150, .gap_tol = 1e-10});
  std::vector<double> gaps;
  for (const TraceRecord& r : result.trace.records()) {
    if (r.gap > 0.0) gaps.push_back(r.gap);
  }
  EXPECT_LT(oracle::log_slope(gaps), 0.0);
  EXPECT_LT(result.trace.back().gap, 1e-3 * result.trace[0].gap);
}

}  // namespace
}  // namespace pdbfw
