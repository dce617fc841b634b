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

#include "pdbfw/data_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

#include "pdbfw/errors.h"
#include "pdbfw/random.h"

namespace pdbfw {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\v\f");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\v\f");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_index(std::string_view token, long long& out) {
  if (token.empty()) return false;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void remap_binary_labels(Dataset& ds) {
  std::set<double> distinct(ds.targets.data(),
                            ds.targets.data() + ds.targets.size());
  const auto subset_of = [&distinct](std::initializer_list<double> allowed) {
    return std::all_of(distinct.begin(), distinct.end(), [&](double v) {
      return std::find(allowed.begin(), allowed.end(), v) != allowed.end();
    });
  };
  double negative = 0.0;
  if (subset_of({-1.0, 1.0})) return;
  if (subset_of({0.0, 1.0}) && distinct.count(0.0) > 0) {
    negative = 0.0;
  } else if (subset_of({1.0, 2.0}) && distinct.count(2.0) > 0) {
    negative = 1.0;
  } else {
    return;
  }
  for (Index i = 0; i < ds.targets.rows(); ++i) {
    ds.targets(i, 0) = ds.targets(i, 0) == negative ? -1.0 : 1.0;
  }
  ds.notices.push_back("labels {" + format_double(negative) + ", " +
                       format_double(negative + 1.0) +
                       "} remapped to {-1, +1}");
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options) {
  const std::string& src = options.source_name;
  if (options.n_cols < 0) {
    throw InvalidArgument("parse_libsvm: negative column count");
  }
  std::vector<Triplet> entries;
  std::vector<double> labels;
  std::vector<std::string> notices;
  Index max_col = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) {
      notices.push_back(src + ":" + std::to_string(line_no) +
                        ": empty line skipped");
      continue;
    }

    std::istringstream tokens{std::string(body)};
    std::string token;
    tokens >> token;
    double label = 0.0;
    if (!parse_double(token, label)) {
      throw ParseError(src, line_no, "label '" + token + "' is not a number");
    }
    const auto row = static_cast<Index>(labels.size());
    long long previous = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw ParseError(src, line_no, "expected idx:val, got '" + token + "'");
      }
      long long index = 0;
      double value = 0.0;
      if (!parse_index(std::string_view(token).substr(0, colon), index)) {
        throw ParseError(src, line_no,
                         "index in '" + token + "' is not an integer");
      }
      if (!parse_double(std::string_view(token).substr(colon + 1), value)) {
        throw ParseError(src, line_no,
                         "value in '" + token + "' is not a finite number");
      }
      if (index < 1) {
        throw ParseError(src, line_no, "indices are 1-based, got " +
                                           std::to_string(index));
      }
      if (index <= previous) {
        throw ParseError(src, line_no,
                         "index " + std::to_string(index) +
                             " does not increase past " +
                             std::to_string(previous));
      }
      if (options.n_cols > 0 && index > options.n_cols) {
        throw ParseError(src, line_no,
                         "index " + std::to_string(index) +
                             " exceeds pinned column count " +
                             std::to_string(options.n_cols));
      }
      previous = index;
      max_col = std::max<Index>(max_col, static_cast<Index>(index));
      entries.push_back({row, static_cast<Index>(index - 1), value});
    }
    labels.push_back(label);
  }
  if (labels.empty()) throw ParseError(src, 0, "no records");

  Dataset ds;
  const auto n = static_cast<Index>(labels.size());
  const Index d = options.n_cols > 0 ? options.n_cols : max_col;
  ds.a = SparseDesignMatrix::from_triplets(n, d, std::move(entries));
  ds.targets = Eigen::Map<const Eigen::VectorXd>(labels.data(), n);
  ds.notices = std::move(notices);
  ds.meta = {src, n, d, ds.a.nnz()};
  remap_binary_labels(ds);
  return ds;
}

Dataset parse_libsvm_file(const std::filesystem::path& path, Index n_cols) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_libsvm(in, {n_cols, path.string()});
}

std::string serialize_libsvm(const Dataset& dataset) {
  if (dataset.targets.cols() != 1 ||
      dataset.targets.rows() != dataset.a.rows()) {
    throw InvalidArgument("serialize_libsvm: need one target per row");
  }
  std::string out;
  for (Index i = 0; i < dataset.a.rows(); ++i) {
    out += format_double(dataset.targets(i, 0));
    const SparseDesignMatrix::Slice r = dataset.a.row(i);
    for (Index p = 0; p < r.size(); ++p) {
      out += ' ';
      out += std::to_string(r.indices[p] + 1);
      out += ':';
      out += format_double(r.values[p]);
    }
    out += '\n';
  }
  return out;
}

Dataset normalize_rows(const Dataset& dataset, bool scale_targets) {
  std::vector<double> factors(static_cast<std::size_t>(dataset.a.rows()), 1.0);
  const std::span<const double> norms = dataset.a.row_norms_sq();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (norms[i] > 0.0) factors[i] = 1.0 / std::sqrt(norms[i]);
  }
  Dataset out = dataset;
  out.a = dataset.a.scale_rows(factors);
  if (scale_targets) {
    for (Index i = 0; i < out.targets.rows(); ++i) {
      out.targets.row(i) *= factors[i];
    }
  }
  return out;
}

SyntheticProblem generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.d < 1 || spec.c < 1) {
    throw InvalidArgument("generate_synthetic: dimensions must be positive");
  }
  if (!(spec.noise >= 0.0)) {
    throw InvalidArgument("generate_synthetic: noise must be non-negative");
  }
  const bool sensing = spec.kind == SyntheticKind::kTraceSensing;
  const Index limit = sensing ? std::min(spec.d, spec.c) : spec.d;
  if (spec.structure < 1 || spec.structure > limit) {
    throw InvalidArgument("generate_synthetic: structure " +
                          std::to_string(spec.structure) + " outside [1, " +
                          std::to_string(limit) + "]");
  }

  Rng rng(spec.seed);
  Eigen::MatrixXd a(spec.n, spec.d);
  for (Index i = 0; i < spec.n; ++i) {
    for (Index j = 0; j < spec.d; ++j) a(i, j) = rng.normal();
  }

  SyntheticProblem out;
  Dataset& ds = out.dataset;
  ds.a = SparseDesignMatrix::from_dense(a);
  if (sensing) {
    const Index r = spec.structure;
    Eigen::MatrixXd u(spec.d, r);
    Eigen::MatrixXd v(spec.c, r);
    for (Index i = 0; i < spec.d; ++i) {
      for (Index j = 0; j < r; ++j) u(i, j) = rng.normal();
    }
    for (Index i = 0; i < spec.c; ++i) {
      for (Index j = 0; j < r; ++j) v(i, j) = rng.normal();
    }
    out.x0_matrix = u * v.transpose();
    ds.targets = a * out.x0_matrix;
    for (Index i = 0; i < spec.n; ++i) {
      for (Index j = 0; j < spec.c; ++j) {
        ds.targets(i, j) += spec.noise * rng.normal();
      }
    }
    ds.meta.name = "synthetic:trace_sensing";
  } else {
    std::vector<Index> slots(static_cast<std::size_t>(spec.d));
    std::iota(slots.begin(), slots.end(), Index{0});
    for (Index p = 0; p < spec.structure; ++p) {
      const Index pick = p + rng.uniform_index(spec.d - p);
      std::swap(slots[p], slots[pick]);
    }
    slots.resize(static_cast<std::size_t>(spec.structure));
    std::sort(slots.begin(), slots.end());
    out.x0 = Eigen::VectorXd::Zero(spec.d);
    for (Index j : slots) out.x0[j] = rng.normal();

    Eigen::VectorXd response = a * out.x0;
    for (Index i = 0; i < spec.n; ++i) response[i] += spec.noise * rng.normal();
    if (spec.kind == SyntheticKind::kSparseClassification) {
      response = response.unaryExpr([](double t) { return t >= 0.0 ? 1.0 : -1.0; });
      ds.meta.name = "synthetic:sparse_classification";
    } else {
      ds.meta.name = "synthetic:sparse_regression";
    }
    ds.targets = response;
  }
  ds.meta.n = spec.n;
  ds.meta.d = spec.d;
  ds.meta.nnz = ds.a.nnz();
  if (spec.normalize) {
    out.dataset = normalize_rows(
        ds, spec.kind != SyntheticKind::kSparseClassification);
  }
  return out;
}

}  // namespace pdbfw
