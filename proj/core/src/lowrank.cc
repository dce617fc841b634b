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

#include "pdbfw/lowrank.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "pdbfw/errors.h"
#include "pdbfw/random.h"

namespace pdbfw {
namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

// Projects the leading singular values onto the l1 ball and drops the ones
// that vanish.
LowRankFactor assemble(const Eigen::MatrixXd& left,
                       const Eigen::VectorXd& values,
                       const Eigen::MatrixXd& right, double radius) {
  const Eigen::VectorXd projected = project_l1_ball(values, radius);
  Index keep = 0;
  while (keep < projected.size() && projected[keep] > 0.0) ++keep;
  LowRankFactor out;
  out.left = left.leftCols(keep);
  out.singular = projected.head(keep);
  out.right = right.leftCols(keep);
  return out;
}

long binomial_capped(Index n, Index k, long cap) {
  k = std::min(k, n - k);
  double value = 1.0;
  for (Index i = 1; i <= k; ++i) {
    value = value * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (value > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<long>(std::llround(value));
}

}  // namespace

Eigen::MatrixXd LowRankFactor::to_dense() const {
  return left * singular.asDiagonal() * right.transpose();
}

LowRankFactor LowRankFactor::zero(Index rows, Index cols) {
  return {Eigen::MatrixXd(rows, 0), Eigen::VectorXd(0),
          Eigen::MatrixXd(cols, 0)};
}

LowRankFactor approx_lowrank_prox(const Eigen::MatrixXd& m, double radius,
                                  Index s, double gamma, double eps,
                                  const LowRankOptions& options,
                                  OpCounter* counter, LowRankStats* stats) {
  if (s < 1) throw InvalidArgument("approx_lowrank_prox: rank budget s < 1");
  if (!(radius > 0.0)) {
    throw InvalidArgument("approx_lowrank_prox: radius must be positive");
  }
  if (!(gamma >= 0.0 && gamma < 1.0) || !(eps >= 0.0)) {
    throw InvalidArgument("approx_lowrank_prox: need 0 <= gamma < 1, eps >= 0");
  }
  if (!m.allFinite()) {
    throw InvalidArgument("approx_lowrank_prox: non-finite input");
  }
  const Index rows = m.rows();
  const Index cols = m.cols();
  const Index rank_cap = std::min({s, rows, cols});
  LowRankStats local;
  LowRankStats& st = stats != nullptr ? *stats : local;
  st = LowRankStats{};

  if (rank_cap == 0 || m.squaredNorm() == 0.0) {
    st.exact = true;
    return LowRankFactor::zero(rows, cols);
  }

  const Index block = s + options.oversampling;
  if (block >= std::min(rows, cols)) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (counter != nullptr) {
      counter->add(static_cast<std::uint64_t>(rows * cols * std::min(rows, cols)));
    }
    st.exact = true;
    return assemble(svd.matrixU().leftCols(rank_cap),
                    svd.singularValues().head(rank_cap),
                    svd.matrixV().leftCols(rank_cap), radius);
  }

  const auto block_flops = static_cast<std::uint64_t>(rows * cols * block);
  Rng rng(options.seed);
  Eigen::MatrixXd start(cols, block);
  for (Index j = 0; j < block; ++j) {
    for (Index i = 0; i < cols; ++i) start(i, j) = rng.normal();
  }
  Eigen::MatrixXd basis = orthonormal_basis(m * start);
  std::uint64_t flops = block_flops;

  Eigen::MatrixXd left;
  Eigen::VectorXd values;
  Eigen::MatrixXd right;
  double residual = 0.0;
  double residual_abs = 0.0;
  bool converged = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::MatrixXd row_basis = orthonormal_basis(m.transpose() * basis);
    basis = orthonormal_basis(m * row_basis);
    // Rayleigh-Ritz on the current left subspace.
    const Eigen::MatrixXd projected = basis.transpose() * m;
    Eigen::JacobiSVD<Eigen::MatrixXd> small(
        projected, Eigen::ComputeThinU | Eigen::ComputeThinV);
    left = basis * small.matrixU().leftCols(rank_cap);
    values = small.singularValues().head(rank_cap);
    right = small.matrixV().leftCols(rank_cap);
    flops += 3 * block_flops +
             static_cast<std::uint64_t>(rows * cols * rank_cap);

    const Eigen::MatrixXd resid = m * right - left * values.asDiagonal();
    residual_abs = resid.colwise().norm().maxCoeff();
    residual = values[0] > 0.0 ? residual_abs / values[0] : 0.0;
    st.iterations = it;
    if (residual <= options.tolerance) {
      converged = true;
      break;
    }
  }
  st.residual = residual;
  if (counter != nullptr) counter->add(flops);
  if (!converged && options.curvature * radius * residual_abs > eps) {
    throw ApproximationError(
        "approx_lowrank_prox: block power iteration stalled after " +
            std::to_string(options.max_iterations) +
            " iterations with relative residual " + std::to_string(residual),
        residual);
  }
  return assemble(left, values, right, radius);
}

Eigen::MatrixXd project_nuclear_ball(const Eigen::MatrixXd& m, double radius) {
  if (!(radius > 0.0)) {
    throw InvalidArgument("project_nuclear_ball: radius must be positive");
  }
  if (m.size() == 0) return m;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd values = project_l1_ball(svd.singularValues(), radius);
  return svd.matrixU() * values.asDiagonal() * svd.matrixV().transpose();
}

double spectral_norm_sq(const SparseDesignMatrix& a, std::uint64_t seed) {
  if (a.nnz() == 0) return 0.0;
  Rng rng(seed);
  Eigen::VectorXd v(a.cols());
  for (Index j = 0; j < v.size(); ++j) v[j] = rng.normal();
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd next = a.transpose_multiply(a.multiply(v));
    const double value = v.dot(next);
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    v = next / norm;
    if (std::abs(value - estimate) <= 1e-12 * value) return value;
    estimate = value;
  }
  return estimate;
}

double max_block_spectral_norm_sq(const SparseDesignMatrix& a, Index k,
                                  long max_subsets) {
  const Index n = a.rows();
  if (k < 1) throw InvalidArgument("max_block_spectral_norm_sq: k < 1");
  k = std::min(k, n);
  if (n == 0) return 0.0;
  if (k == 1) return a.max_row_norm_sq();
  if (k == n || binomial_capped(n, k, max_subsets) > max_subsets) {
    return spectral_norm_sq(a);
  }

  const Eigen::MatrixXd dense = a.to_dense_from_rows();
  std::vector<Index> pick(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) pick[i] = i;
  double best = 0.0;
  while (true) {
    Eigen::MatrixXd sub(k, dense.cols());
    for (Index i = 0; i < k; ++i) sub.row(i) = dense.row(pick[i]);
    const Eigen::MatrixXd gram = sub * sub.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram,
                                                       Eigen::EigenvaluesOnly);
    best = std::max(best, eig.eigenvalues().maxCoeff());
    // Advance to the next k-combination in lexicographic order.
    Index pos = k - 1;
    while (pos >= 0 && pick[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++pick[pos];
    for (Index i = pos + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
  }
  return best;
}

}  // namespace pdbfw
