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

#ifndef PDBFW_DATA_IO_H_
#define PDBFW_DATA_IO_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pdbfw/sparse_matrix.h"

namespace pdbfw {

struct DatasetMeta {
  std::string name;
  Index n = 0;
  Index d = 0;
  Index nnz = 0;
};

// Design matrix plus per-sample targets. targets is n x 1 for labels and
// scalar regression, n x c for matrix-valued outputs.
struct Dataset {
  SparseDesignMatrix a;
  Eigen::MatrixXd targets;
  DatasetMeta meta;
  // Non-fatal remarks from ingestion (skipped lines, label remapping).
  std::vector<std::string> notices;

  Eigen::VectorXd labels() const { return targets.col(0); }
};

struct LibsvmOptions {
  // Column count to use; 0 means the largest index seen. Indices above a
  // pinned count are a parse error.
  Index n_cols = 0;
  std::string source_name = "<stream>";
};

// Reads "label idx:val idx:val ..." records with 1-based, strictly
// increasing indices. Blank lines and '#' comments are skipped with a notice.
// Binary labels {0, 1} or {1, 2} are remapped to {-1, +1}. Throws
// ParseError naming the line on any malformed record, and on input without
// records.
Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options = {});
Dataset parse_libsvm_file(const std::filesystem::path& path,
                          Index n_cols = 0);

// Inverse of parse_libsvm for single-column targets. Values are written in
// shortest round-trip form, so parsing the output reproduces the matrix
// exactly.
std::string serialize_libsvm(const Dataset& dataset);

// Scales every nonzero row of A to unit norm; zero rows are left alone. With
// scale_targets the targets of each row get the same factor, which keeps
// b = A x0 relations intact for regression data.
Dataset normalize_rows(const Dataset& dataset, bool scale_targets = false);

enum class SyntheticKind {
  kSparseRegression,
  kSparseClassification,
  kTraceSensing,
};

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kSparseRegression;
  Index n = 100;
  Index d = 100;
  // Output columns; trace sensing only.
  Index c = 1;
  // Support size of x0, or rank of X0.
  Index structure = 10;
  double noise = 0.0;
  std::uint64_t seed = 1;
  // Normalize rows after generation (targets scaled along for regression
  // and sensing, so the ground truth still reproduces them).
  bool normalize = false;
};

struct SyntheticProblem {
  Dataset dataset;
  Eigen::VectorXd x0;         // sparse kinds
  Eigen::MatrixXd x0_matrix;  // trace sensing
};

// Draw order, all from one Rng(seed):
//   A           n x d standard normals, row by row
//   sparse:     support = first `structure` slots of a partial Fisher-Yates
//               shuffle of [0, d), sorted; one normal per support index;
//               then one normal noise draw per sample
//   sensing:    U (d x r) then V (c x r) row by row, X0 = U V^T,
//               B = A X0, then n x c noise row by row
// Classification labels are sign(a_i^T x0 + noise), with sign(0) = +1.
SyntheticProblem generate_synthetic(const SyntheticSpec& spec);

}  // namespace pdbfw

#endif  // PDBFW_DATA_IO_H_
