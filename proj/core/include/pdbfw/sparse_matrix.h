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

#ifndef PDBFW_SPARSE_MATRIX_H_
#define PDBFW_SPARSE_MATRIX_H_

#include <span>
#include <vector>

#include <Eigen/Core>

namespace pdbfw {

using Index = Eigen::Index;

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Immutable n x d data matrix kept in both compressed-row and
// compressed-column form. Row slices feed A^T y maintenance, column slices
// feed A x maintenance; each costs time proportional to the nonzeros of the
// slice it touches.
//
// Invariants established at construction:
//   * both layouts hold the same entries;
//   * indices inside each row/column are strictly increasing;
//   * row_norms_sq()[i] is the squared norm of row i.
class SparseDesignMatrix {
 public:
  struct Slice {
    std::span<const Index> indices;
    std::span<const double> values;
    Index size() const { return static_cast<Index>(indices.size()); }
  };

  SparseDesignMatrix() = default;

  // Throws InvalidArgument on out-of-range or duplicate (row, col) pairs and
  // on non-finite values. Explicit zeros are dropped.
  static SparseDesignMatrix from_triplets(Index rows, Index cols,
                                          std::vector<Triplet> entries);
  static SparseDesignMatrix from_dense(const Eigen::MatrixXd& dense);
  static SparseDesignMatrix identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(row_values_.size()); }

  Slice row(Index i) const;
  Slice col(Index j) const;
  Index row_nnz(Index i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  Index col_nnz(Index j) const { return col_ptr_[j + 1] - col_ptr_[j]; }

  std::span<const double> row_norms_sq() const { return row_norms_sq_; }
  double max_row_norm_sq() const;

  // Dense reconstructions of each layout, used by tests and oracles.
  Eigen::MatrixXd to_dense_from_rows() const;
  Eigen::MatrixXd to_dense_from_cols() const;

  // Full products. The solvers only call these for baselines and for
  // verification; the block methods use the slice kernels in linalg.h.
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd transpose_multiply(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd transpose_multiply(const Eigen::MatrixXd& y) const;

  // Returns diag(factors) * A.
  SparseDesignMatrix scale_rows(std::span<const double> factors) const;

  std::vector<Triplet> triplets() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> row_cols_;
  std::vector<double> row_values_;
  std::vector<Index> col_ptr_{0};
  std::vector<Index> col_rows_;
  std::vector<double> col_values_;
  std::vector<double> row_norms_sq_;
};

}  // namespace pdbfw

#endif  // PDBFW_SPARSE_MATRIX_H_
