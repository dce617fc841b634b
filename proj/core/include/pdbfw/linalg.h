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

#ifndef PDBFW_LINALG_H_
#define PDBFW_LINALG_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pdbfw/sparse_matrix.h"

namespace pdbfw {

// Multiply-add pairs performed by matrix kernels. Selection, projection and
// other bookkeeping are not counted.
struct OpCounter {
  std::uint64_t flops = 0;
  void add(std::uint64_t n) { flops += n; }
};

// Sparse vector given as sorted, unique (index, value) pairs.
struct SparseUpdate {
  std::vector<Index> indices;
  std::vector<double> values;

  Index support_size() const { return static_cast<Index>(indices.size()); }
  Eigen::VectorXd to_dense(Index length) const;
};

// Euclidean projection onto {u : ||u||_1 <= radius}. Sort-based threshold
// search, O(m log m). Returns v itself when it is already feasible.
Eigen::VectorXd project_l1_ball(const Eigen::Ref<const Eigen::VectorXd>& v,
                                double radius);

// Exact minimizer of ||x - v||^2 over ||x||_1 <= radius, ||x||_0 <= s:
// keep the s largest |v_i| (lowest index wins ties) and project that
// subvector onto the l1 ball. Zero entries are left out of the result.
SparseUpdate sparse_l1_prox(const Eigen::Ref<const Eigen::VectorXd>& v,
                            double radius, Index s);

// Indices of the k largest |v_i|, ties to the lowest index, returned in
// increasing order. Uses nth_element, so expected linear time.
std::vector<Index> top_k_by_magnitude(const Eigen::Ref<const Eigen::VectorXd>& v,
                                      Index k);

// w <- scale_old * w + scale_new * A[:, dx.indices] * dx.values.
// Reads only the columns in dx's support.
void scale_add_columns(const SparseDesignMatrix& a, const SparseUpdate& dx,
                       double scale_old, double scale_new, Eigen::VectorXd& w,
                       OpCounter* counter = nullptr);

Eigen::VectorXd apply_sparse_col_product(const SparseDesignMatrix& a,
                                         const SparseUpdate& dx,
                                         const Eigen::VectorXd& w,
                                         double scale_old, double scale_new,
                                         OpCounter* counter = nullptr);

// z <- z + sum_p dy[p] * a_{rows[p]}. Reads only the listed rows.
void add_row_combination(const SparseDesignMatrix& a,
                         std::span<const Index> rows,
                         std::span<const double> dy, Eigen::VectorXd& z,
                         OpCounter* counter = nullptr);

Eigen::VectorXd apply_row_slice_transpose(const SparseDesignMatrix& a,
                                          std::span<const Index> rows,
                                          std::span<const double> dy,
                                          const Eigen::VectorXd& z,
                                          OpCounter* counter = nullptr);

}  // namespace pdbfw

#endif  // PDBFW_LINALG_H_
