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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "harness.h"

namespace {

using pdbfw::cli::ConstraintKind;

const std::map<std::string, pdbfw::SyntheticKind> kSynthetic = {
    {"sparse_regression", pdbfw::SyntheticKind::kSparseRegression},
    {"sparse_classification", pdbfw::SyntheticKind::kSparseClassification},
    {"trace_sensing", pdbfw::SyntheticKind::kTraceSensing},
};
const std::map<std::string, ConstraintKind> kConstraint = {
    {"l1", ConstraintKind::kL1},
    {"trace", ConstraintKind::kTrace},
};
const std::map<std::string, pdbfw::LossKind> kLoss = {
    {"smooth_hinge", pdbfw::LossKind::kSmoothHinge},
    {"quadratic", pdbfw::LossKind::kQuadratic},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual block Frank-Wolfe benchmark harness"};
  app.require_subcommand(1);

  pdbfw::cli::RunSpec spec;
  pdbfw::SyntheticSpec synth;
  std::string synthetic_kind;
  std::string constraint = "l1";
  std::string loss;
  bool raw = false;

  CLI::App* run = app.add_subcommand("run", "solve one instance with a set of solvers");
  run->add_option("--data", spec.data_path, "LIBSVM file");
  run->add_option("--n-cols", spec.n_cols, "pin the column count of --data");
  run->add_option("--synthetic", synthetic_kind, "generator kind")
      ->check(CLI::IsMember(kSynthetic));
  run->add_option("--n", synth.n, "synthetic samples");
  run->add_option("--d", synth.d, "synthetic features");
  run->add_option("--c", synth.c, "synthetic outputs (trace_sensing)");
  run->add_option("--sparsity,--rank", synth.structure,
                  "support size of x0 or rank of X0");
  run->add_option("--noise", synth.noise, "target noise level");
  run->add_flag("--raw", raw, "skip row normalization");
  run->add_option("--constraint", constraint, "l1 or trace")
      ->check(CLI::IsMember(kConstraint));
  run->add_option("--lambda", spec.lambda, "constraint radius")
      ->capture_default_str();
  run->add_option("--loss", loss, "smooth_hinge or quadratic")
      ->check(CLI::IsMember(kLoss));
  run->add_option("--mu", spec.mu, "l2 strength (default 10/n)");
  run->add_option("--solvers", spec.solvers, "comma-separated solver list")
      ->delimiter(',')
      ->required();
  run->add_option("--s", spec.s, "sparsity or rank budget (default: full)");
  run->add_option("--k", spec.k, "dual block size (default: derived)");
  run->add_option("--max-iters", spec.max_iters)->capture_default_str();
  run->add_option("--time-limit", spec.time_limit, "seconds per solver");
  run->add_option("--gap-tol", spec.gap_tol)->capture_default_str();
  run->add_option("--out", spec.output_dir, "output directory")
      ->capture_default_str();
  run->add_option("--seed", spec.seed)->capture_default_str();
  run->add_flag("--wall-time", spec.wall_time,
                "record measured seconds in the trace CSVs");

  std::string compare_dir;
  CLI::App* compare =
      app.add_subcommand("compare", "tabulate the traces in a run directory");
  compare->add_option("dir", compare_dir, "output directory of a run")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pdbfw::cli::kExitUsage;
  }

  if (compare->parsed()) {
    return pdbfw::cli::compare(compare_dir, std::cout, std::cerr);
  }

  if (!synthetic_kind.empty()) {
    synth.kind = kSynthetic.at(synthetic_kind);
    spec.synthetic = synth;
  }
  spec.constraint = kConstraint.at(constraint);
  if (!loss.empty()) spec.loss = kLoss.at(loss);
  spec.normalize = !raw;
  return pdbfw::cli::run(spec, std::cerr);
}
