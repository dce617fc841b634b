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

#include "pdbfw/sparse_matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdbfw/errors.h"

namespace pdbfw {

SparseDesignMatrix SparseDesignMatrix::from_triplets(
    Index rows, Index cols, std::vector<Triplet> entries) {
  if (rows < 0 || cols < 0) {
    throw InvalidArgument("matrix dimensions must be non-negative");
  }
  std::erase_if(entries, [](const Triplet& t) { return t.value == 0.0; });
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InvalidArgument("entry (" + std::to_string(t.row) + ", " +
                            std::to_string(t.col) + ") outside " +
                            std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!std::isfinite(t.value)) {
      throw InvalidArgument("non-finite matrix entry");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t e = 1; e < entries.size(); ++e) {
    if (entries[e].row == entries[e - 1].row &&
        entries[e].col == entries[e - 1].col) {
      throw InvalidArgument("duplicate entry (" +
                            std::to_string(entries[e].row) + ", " +
                            std::to_string(entries[e].col) + ")");
    }
  }

  SparseDesignMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  const std::size_t nnz = entries.size();

  m.row_ptr_.assign(rows + 1, 0);
  m.row_cols_.resize(nnz);
  m.row_values_.resize(nnz);
  m.row_norms_sq_.assign(rows, 0.0);
  for (std::size_t e = 0; e < nnz; ++e) {
    ++m.row_ptr_[entries[e].row + 1];
    m.row_cols_[e] = entries[e].col;
    m.row_values_[e] = entries[e].value;
    m.row_norms_sq_[entries[e].row] += entries[e].value * entries[e].value;
  }
  for (Index i = 0; i < rows; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];

  // Counting sort into the column layout; rows stay increasing within each
  // column because entries are already row-sorted.
  m.col_ptr_.assign(cols + 1, 0);
  for (const Triplet& t : entries) ++m.col_ptr_[t.col + 1];
  for (Index j = 0; j < cols; ++j) m.col_ptr_[j + 1] += m.col_ptr_[j];
  m.col_rows_.resize(nnz);
  m.col_values_.resize(nnz);
  std::vector<Index> next(m.col_ptr_.begin(), m.col_ptr_.end() - 1);
  for (const Triplet& t : entries) {
    const Index slot = next[t.col]++;
    m.col_rows_[slot] = t.row;
    m.col_values_[slot] = t.value;
  }
  return m;
}

SparseDesignMatrix SparseDesignMatrix::from_dense(const Eigen::MatrixXd& dense) {
  std::vector<Triplet> entries;
  for (Index i = 0; i < dense.rows(); ++i) {
    for (Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) entries.push_back({i, j, dense(i, j)});
    }
  }
  return from_triplets(dense.rows(), dense.cols(), std::move(entries));
}

SparseDesignMatrix SparseDesignMatrix::identity(Index n) {
  std::vector<Triplet> entries;
  entries.reserve(n);
  for (Index i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(entries));
}

SparseDesignMatrix::Slice SparseDesignMatrix::row(Index i) const {
  const auto begin = static_cast<std::size_t>(row_ptr_[i]);
  const auto count = static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i]);
  return {std::span<const Index>(row_cols_).subspan(begin, count),
          std::span<const double>(row_values_).subspan(begin, count)};
}

SparseDesignMatrix::Slice SparseDesignMatrix::col(Index j) const {
  const auto begin = static_cast<std::size_t>(col_ptr_[j]);
  const auto count = static_cast<std::size_t>(col_ptr_[j + 1] - col_ptr_[j]);
  return {std::span<const Index>(col_rows_).subspan(begin, count),
          std::span<const double>(col_values_).subspan(begin, count)};
}

double SparseDesignMatrix::max_row_norm_sq() const {
  if (row_norms_sq_.empty()) return 0.0;
  return *std::max_element(row_norms_sq_.begin(), row_norms_sq_.end());
}

Eigen::MatrixXd SparseDesignMatrix::to_dense_from_rows() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    const Slice r = row(i);
    for (Index p = 0; p < r.size(); ++p) dense(i, r.indices[p]) = r.values[p];
  }
  return dense;
}

Eigen::MatrixXd SparseDesignMatrix::to_dense_from_cols() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows_, cols_);
  for (Index j = 0; j < cols_; ++j) {
    const Slice c = col(j);
    for (Index p = 0; p < c.size(); ++p) dense(c.indices[p], j) = c.values[p];
  }
  return dense;
}

Eigen::VectorXd SparseDesignMatrix::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != cols_) throw InvalidArgument("multiply: length mismatch");
  Eigen::VectorXd out(rows_);
  for (Index i = 0; i < rows_; ++i) {
    const Slice r = row(i);
    double acc = 0.0;
    for (Index p = 0; p < r.size(); ++p) acc += r.values[p] * x[r.indices[p]];
    out[i] = acc;
  }
  return out;
}

Eigen::VectorXd SparseDesignMatrix::transpose_multiply(
    const Eigen::VectorXd& y) const {
  if (y.size() != rows_) {
    throw InvalidArgument("transpose_multiply: length mismatch");
  }
  Eigen::VectorXd out(cols_);
  for (Index j = 0; j < cols_; ++j) {
    const Slice c = col(j);
    double acc = 0.0;
    for (Index p = 0; p < c.size(); ++p) acc += c.values[p] * y[c.indices[p]];
    out[j] = acc;
  }
  return out;
}

Eigen::MatrixXd SparseDesignMatrix::multiply(const Eigen::MatrixXd& x) const {
  if (x.rows() != cols_) throw InvalidArgument("multiply: shape mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows_, x.cols());
  for (Index i = 0; i < rows_; ++i) {
    const Slice r = row(i);
    for (Index p = 0; p < r.size(); ++p) {
      out.row(i) += r.values[p] * x.row(r.indices[p]);
    }
  }
  return out;
}

Eigen::MatrixXd SparseDesignMatrix::transpose_multiply(
    const Eigen::MatrixXd& y) const {
  if (y.rows() != rows_) {
    throw InvalidArgument("transpose_multiply: shape mismatch");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(cols_, y.cols());
  for (Index i = 0; i < rows_; ++i) {
    const Slice r = row(i);
    for (Index p = 0; p < r.size(); ++p) {
      out.row(r.indices[p]) += r.values[p] * y.row(i);
    }
  }
  return out;
}

SparseDesignMatrix SparseDesignMatrix::scale_rows(
    std::span<const double> factors) const {
  if (static_cast<Index>(factors.size()) != rows_) {
    throw InvalidArgument("scale_rows: one factor per row required");
  }
  std::vector<Triplet> entries = triplets();
  for (Triplet& t : entries) t.value *= factors[t.row];
  return from_triplets(rows_, cols_, std::move(entries));
}

std::vector<Triplet> SparseDesignMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(row_values_.size());
  for (Index i = 0; i < rows_; ++i) {
    const Slice r = row(i);
    for (Index p = 0; p < r.size(); ++p) {
      out.push_back({i, r.indices[p], r.values[p]});
    }
  }
  return out;
}

}  // namespace pdbfw
