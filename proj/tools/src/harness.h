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

#ifndef PDBFW_TOOLS_HARNESS_H_
#define PDBFW_TOOLS_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdbfw/data_io.h"
#include "pdbfw/losses.h"
#include "pdbfw/metrics.h"

namespace pdbfw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ConstraintKind { kL1, kTrace };

struct RunSpec {
  // Exactly one of data_path and synthetic.
  std::string data_path;
  Index n_cols = 0;
  std::optional<SyntheticSpec> synthetic;
  // Scale rows to unit norm before solving.
  bool normalize = true;

  ConstraintKind constraint = ConstraintKind::kL1;
  double lambda = 300.0;
  // Unset: smooth hinge for +-1 labels, quadratic otherwise.
  std::optional<LossKind> loss;
  // Zero means 10 / n.
  double mu = 0.0;
  std::vector<std::string> solvers;
  // Zero means the full budget (d for l1, min(d, c) for trace).
  Index s = 0;
  Index k = 0;
  long max_iters = 1000;
  double time_limit = 0.0;
  double gap_tol = 1e-8;
  std::filesystem::path output_dir = "pdbfw_out";
  std::uint64_t seed = 1;
  // Write measured seconds into the trace CSVs. Off by default so repeated
  // runs produce identical files.
  bool wall_time = false;
};

const std::vector<std::string>& solver_names(ConstraintKind constraint);

// Throws UsageError for unknown solvers and conflicting settings.
void validate(const RunSpec& spec);

// Runs every solver in order, writing <solver>.csv and summary.tsv into
// output_dir. Returns kExitOk, kExitSolverFailure when any solver diverged or
// an output could not be written, or kExitUsage.
int run(const RunSpec& spec, std::ostream& log);

inline constexpr const char* kTraceHeader =
    "iter,seconds,primal,dual,gap,flops,support";

std::string format_trace_csv(const ConvergenceTrace& trace, bool wall_time);
// Throws ParseError naming `source` on malformed input.
ConvergenceTrace parse_trace_csv(std::istream& in, const std::string& source);

// Prints per-solver time-to-gap at 1e-2, 1e-4, 1e-6 for every trace CSV in
// `dir`, and final relative primal error against the best final objective.
// Time is in seconds when every trace carries timings, otherwise in
// cumulative flops.
int compare(const std::filesystem::path& dir, std::ostream& out,
            std::ostream& err);

}  // namespace pdbfw::cli

#endif  // PDBFW_TOOLS_HARNESS_H_
