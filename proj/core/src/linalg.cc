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

#include "pdbfw/linalg.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "pdbfw/errors.h"

namespace pdbfw {

Eigen::VectorXd SparseUpdate::to_dense(Index length) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(length);
  for (std::size_t p = 0; p < indices.size(); ++p) {
    out[indices[p]] = values[p];
  }
  return out;
}

Eigen::VectorXd project_l1_ball(const Eigen::Ref<const Eigen::VectorXd>& v,
                                double radius) {
  if (!(radius > 0.0)) {
    throw InvalidArgument("project_l1_ball: radius must be positive");
  }
  if (!v.allFinite()) {
    throw InvalidArgument("project_l1_ball: non-finite input");
  }
  if (v.lpNorm<1>() <= radius) return v;

  std::vector<double> mags(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());

  // theta is the soft threshold that brings the l1 norm down to radius.
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < mags.size(); ++j) {
    cumulative += mags[j];
    const double candidate = (cumulative - radius) / static_cast<double>(j + 1);
    if (mags[j] - candidate > 0.0) {
      theta = candidate;
    } else {
      break;
    }
  }

  Eigen::VectorXd out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double shrunk = std::max(std::abs(v[i]) - theta, 0.0);
    out[i] = std::copysign(shrunk, v[i]);
  }
  // Rounding in the cumulative sum can leave the result a few ulps outside.
  const double norm = out.lpNorm<1>();
  if (norm > radius) out *= radius / norm;
  return out;
}

std::vector<Index> top_k_by_magnitude(const Eigen::Ref<const Eigen::VectorXd>& v,
                                      Index k) {
  if (k < 1 || k > v.size()) {
    throw InvalidArgument("top_k_by_magnitude: k=" + std::to_string(k) +
                          " outside [1, " + std::to_string(v.size()) + "]");
  }
  std::vector<Index> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), Index{0});
  const auto before = [&v](Index a, Index b) {
    const double ma = std::abs(v[a]);
    const double mb = std::abs(v[b]);
    return ma != mb ? ma > mb : a < b;
  };
  if (k < v.size()) {
    std::nth_element(order.begin(), order.begin() + (k - 1), order.end(),
                     before);
  }
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

SparseUpdate sparse_l1_prox(const Eigen::Ref<const Eigen::VectorXd>& v,
                            double radius, Index s) {
  if (s < 1 || s > v.size()) {
    throw InvalidArgument("sparse_l1_prox: budget s=" + std::to_string(s) +
                          " outside [1, " + std::to_string(v.size()) + "]");
  }
  if (!(radius > 0.0)) {
    throw InvalidArgument("sparse_l1_prox: radius must be positive");
  }
  const std::vector<Index> support = top_k_by_magnitude(v, s);
  Eigen::VectorXd restricted(s);
  for (Index p = 0; p < s; ++p) restricted[p] = v[support[p]];
  const Eigen::VectorXd projected = project_l1_ball(restricted, radius);

  SparseUpdate out;
  out.indices.reserve(support.size());
  out.values.reserve(support.size());
  for (Index p = 0; p < s; ++p) {
    if (projected[p] != 0.0) {
      out.indices.push_back(support[p]);
      out.values.push_back(projected[p]);
    }
  }
  return out;
}

void scale_add_columns(const SparseDesignMatrix& a, const SparseUpdate& dx,
                       double scale_old, double scale_new, Eigen::VectorXd& w,
                       OpCounter* counter) {
  if (w.size() != a.rows()) {
    throw InvalidArgument("scale_add_columns: w has length " +
                          std::to_string(w.size()) + ", expected " +
                          std::to_string(a.rows()));
  }
  if (dx.indices.size() != dx.values.size()) {
    throw InvalidArgument("scale_add_columns: malformed sparse update");
  }
  for (Index j : dx.indices) {
    if (j < 0 || j >= a.cols()) {
      throw InvalidArgument("scale_add_columns: column index out of range");
    }
  }
  std::uint64_t flops = 0;
  if (scale_old != 1.0) {
    w *= scale_old;
    flops += static_cast<std::uint64_t>(w.size());
  }
  for (std::size_t p = 0; p < dx.indices.size(); ++p) {
    const SparseDesignMatrix::Slice c = a.col(dx.indices[p]);
    const double coeff = scale_new * dx.values[p];
    for (Index q = 0; q < c.size(); ++q) w[c.indices[q]] += coeff * c.values[q];
    flops += static_cast<std::uint64_t>(c.size());
  }
  if (counter != nullptr) counter->add(flops);
}

Eigen::VectorXd apply_sparse_col_product(const SparseDesignMatrix& a,
                                         const SparseUpdate& dx,
                                         const Eigen::VectorXd& w,
                                         double scale_old, double scale_new,
                                         OpCounter* counter) {
  Eigen::VectorXd out = w;
  scale_add_columns(a, dx, scale_old, scale_new, out, counter);
  return out;
}

void add_row_combination(const SparseDesignMatrix& a,
                         std::span<const Index> rows,
                         std::span<const double> dy, Eigen::VectorXd& z,
                         OpCounter* counter) {
  if (z.size() != a.cols()) {
    throw InvalidArgument("add_row_combination: z has length " +
                          std::to_string(z.size()) + ", expected " +
                          std::to_string(a.cols()));
  }
  if (rows.size() != dy.size()) {
    throw InvalidArgument("add_row_combination: one increment per row required");
  }
  std::uint64_t flops = 0;
  for (std::size_t p = 0; p < rows.size(); ++p) {
    if (rows[p] < 0 || rows[p] >= a.rows()) {
      throw InvalidArgument("add_row_combination: row index out of range");
    }
    const SparseDesignMatrix::Slice r = a.row(rows[p]);
    for (Index q = 0; q < r.size(); ++q) z[r.indices[q]] += dy[p] * r.values[q];
    flops += static_cast<std::uint64_t>(r.size());
  }
  if (counter != nullptr) counter->add(flops);
}

Eigen::VectorXd apply_row_slice_transpose(const SparseDesignMatrix& a,
                                          std::span<const Index> rows,
                                          std::span<const double> dy,
                                          const Eigen::VectorXd& z,
                                          OpCounter* counter) {
  Eigen::VectorXd out = z;
  add_row_combination(a, rows, dy, out, counter);
  return out;
}

}  // namespace pdbfw
