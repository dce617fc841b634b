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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Thresholds are fixed constants.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "harness.h"
#include "oracles.h"
#include "pdbfw/baselines.h"
#include "pdbfw/data_io.h"
#include "pdbfw/linalg.h"
#include "pdbfw/losses.h"
#include "pdbfw/pdbfw_l1.h"
#include "pdbfw/pdbfw_trace.h"
#include "pdbfw/random.h"

namespace pdbfw {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Smallest gap seen in any solver trace produced here.
double g_min_gap = std::numeric_limits<double>::infinity();
long g_traces = 0;
long g_records = 0;

void observe(const ConvergenceTrace& trace) {
  ++g_traces;
  for (const TraceRecord& r : trace.records()) {
    ++g_records;
    g_min_gap = std::min(g_min_gap, r.gap);
  }
}

// 1. sparse_l1_prox against support enumeration.
Outcome sparse_prox_exactness() {
  constexpr double kTol = 1e-10;
  constexpr double kBudget = 10.0;
  const auto start = Clock::now();
  Rng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index d = 1 + rng.uniform_index(10);
    const Index s = 1 + rng.uniform_index(std::min<Index>(3, d));
    Eigen::VectorXd v(d);
    for (Index j = 0; j < d; ++j) v[j] = 3.0 * rng.normal();
    const double radius = 0.05 + 5.0 * rng.uniform();
    const SparseUpdate u = sparse_l1_prox(v, radius, s);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    for (std::size_t p = 0; p < u.indices.size(); ++p) {
      x[u.indices[p]] = u.values[p];
    }
    const double got = (x - v).squaredNorm();
    const double want = oracle::sparse_prox_by_enumeration(v, radius, s).objective;
    worst = std::max(worst, std::abs(got - want));
  }
  const double t = seconds_since(start);
  return {worst <= kTol && t < kBudget,
          "500 instances, max objective diff " + fmt("%.3e", worst) +
              " (<= 1e-10), " + fmt("%.2f", t) + " s (< 10 s)"};
}

// 2. dual_prox_step against grid + golden section.
Outcome dual_prox_exactness() {
  constexpr double kTol = 1e-8;
  constexpr double kBudget = 5.0;
  const auto start = Clock::now();
  Rng rng(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool hinge = trial % 2 == 0;
    const double label = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double target = hinge ? label : 3.0 * rng.normal();
    const LossModel m =
        hinge ? LossModel::smooth_hinge(Eigen::VectorXd::Constant(1, label))
              : LossModel::quadratic(Eigen::VectorXd::Constant(1, target));
    const ConjugateBox box = m.box(0);
    const double w = 4.0 * rng.normal();
    const double y = hinge ? box.lower + rng.uniform() : 2.0 * rng.normal();
    const double delta = 0.05 + 5.0 * rng.uniform();
    const auto n = static_cast<Index>(1 + rng.uniform_index(20));
    const long double nn = static_cast<long double>(n);
    const long double t = target;
    const auto objective = [&](long double u) {
      return (w * u - (0.5L * u * u + t * u)) / nn -
             (u - y) * (u - y) / (2.0L * delta);
    };
    const double lo = hinge ? box.lower : y - 50.0;
    const double hi = hinge ? box.upper : y + 50.0;
    const double want = oracle::maximize_concave(objective, lo, hi);
    worst = std::max(worst, std::abs(m.dual_prox_step(w, y, delta, n, 0) - want));
  }
  const double t = seconds_since(start);
  return {worst <= kTol && t < kBudget,
          "1000 tuples, max diff " + fmt("%.3e", worst) + " (<= 1e-8), " +
              fmt("%.2f", t) + " s (< 5 s)"};
}

// 3. Fenchel-Young equality and the closed-form smooth hinge values.
Outcome conjugate_correctness() {
  constexpr double kTol = 1e-10;
  const LossModel models[] = {
      LossModel::smooth_hinge(Eigen::VectorXd::Ones(1)),
      LossModel::smooth_hinge(-Eigen::VectorXd::Ones(1)),
      LossModel::quadratic(Eigen::VectorXd::Constant(1, 0.3))};
  double worst = 0.0;
  for (const LossModel& m : models) {
    for (int i = 0; i < 1000; ++i) {
      const double p = -3.0 + 6.0 * i / 999.0;
      const double y = m.derivative(p, 0);
      worst = std::max(worst,
                       std::abs(m.value(p, 0) + m.conjugate(y, 0) - p * y));
    }
  }
  const LossModel& h = models[0];
  const bool exact = h.value(0.0, 0) == 0.5 && h.conjugate(-1.0, 0) == -0.5 &&
                     h.conjugate(0.0, 0) == 0.0;
  return {worst <= kTol && exact,
          "Fenchel-Young max residual " + fmt("%.3e", worst) +
              " (<= 1e-10); h(0)=0.5, h*(-1)=-0.5, h*(0)=0 " +
              (exact ? "exact" : "MISMATCH")};
}

// 4. Linear convergence of the l1 solver.
Outcome linear_convergence() {
  constexpr double kRatio = 1e-4;
  constexpr double kBudget = 30.0;
  const auto start = Clock::now();
  SyntheticSpec spec;
  spec.n = 500;
  spec.d = 1000;
  spec.structure = 10;
  spec.noise = 0.1;
  spec.seed = 2024;
  spec.normalize = true;
  const SyntheticProblem p = generate_synthetic(spec);
  const LossModel loss = LossModel::quadratic(p.dataset.labels());
  const double mu = 10.0 / 500.0;
  const double lambda = p.x0.lpNorm<1>();
  // The rate needs s at least the support of the optimum; take it from an
  // independent dense reference solve.
  const Eigen::VectorXd ref = oracle::l1_reference_solve(
      p.dataset.a.to_dense_from_rows(), loss, mu, lambda, 1500);
  const auto s = static_cast<Index>((ref.array() != 0.0).count());
  const L1Result r = solve(p.dataset.a, loss, Regularizer(mu),
                           {.lambda = lambda, .s = s, .max_iters = 200,
                            .gap_tol = 0.0});
  observe(r.trace);
  const auto& recs = r.trace.records();
  const double gap10 = recs.at(10).gap;
  const double gap200 = recs.back().gap;
  std::vector<double> positive;
  for (std::size_t i = 10; i < recs.size(); ++i) {
    if (recs[i].gap > 0.0) positive.push_back(recs[i].gap);
  }
  const double slope = oracle::log_slope(positive);
  // Near machine precision the gap can round to a tiny negative value.
  const double ratio = std::abs(gap200) / gap10;
  const double t = seconds_since(start);
  return {ratio <= kRatio && slope < 0.0 && t < kBudget,
          "s=" + std::to_string(s) + ", |gap(200)|/gap(10) = " +
              fmt("%.3e", ratio) + " (<= 1e-4), log-gap slope " +
              fmt("%.3f", slope) + " (< 0), " + fmt("%.2f", t) +
              " s (< 30 s)"};
}

// 5. Per-iteration flops affine in s.
Outcome cost_scaling() {
  constexpr double kR2 = 0.99;
  SyntheticSpec spec;
  spec.n = 200;
  spec.d = 200;
  spec.structure = 10;
  spec.noise = 0.1;
  spec.seed = 5;
  spec.normalize = true;
  const SyntheticProblem p = generate_synthetic(spec);
  const LossModel loss = LossModel::quadratic(p.dataset.labels());
  std::vector<double> xs;
  std::vector<double> ys;
  std::string series;
  for (Index s : {1, 2, 4, 8, 16}) {
    const L1Result r = solve(p.dataset.a, loss, Regularizer(10.0 / 200.0),
                             {.lambda = 300.0, .s = s, .max_iters = 51,
                              .gap_tol = 0.0});
    observe(r.trace);
    const auto& recs = r.trace.records();
    const double per_iter =
        static_cast<double>(recs.at(51).flops - recs.at(1).flops) / 50.0;
    xs.push_back(static_cast<double>(s));
    ys.push_back(per_iter);
    series += (series.empty() ? "" : ", ") + fmt("%.0f", per_iter);
  }
  const double r2 = oracle::r_squared(xs, ys);
  return {r2 >= kR2, "flops/iter over s=1,2,4,8,16: " + series + "; R^2 = " +
                         fmt("%.5f", r2) + " (>= 0.99)"};
}

// 6. Cross-solver agreement on strongly convex instances.
Outcome solver_agreement() {
  constexpr double kTol = 1e-6;
  constexpr long kBudget = 1000;
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const bool hinge = i % 2 == 1;
    SyntheticSpec spec;
    spec.kind = hinge ? SyntheticKind::kSparseClassification
                      : SyntheticKind::kSparseRegression;
    spec.n = 80;
    spec.d = 30;
    spec.structure = 5;
    spec.noise = 0.1;
    spec.seed = 100 + static_cast<std::uint64_t>(i);
    spec.normalize = true;
    const SyntheticProblem p = generate_synthetic(spec);
    const LossModel loss = hinge ? LossModel::smooth_hinge(p.dataset.labels())
                                 : LossModel::quadratic(p.dataset.labels());
    const double mu = 10.0 / 80.0;
    const Regularizer reg(mu);
    // Half the l1 norm of the unconstrained optimum keeps the ball active.
    const Eigen::VectorXd free = oracle::l1_reference_solve(
        p.dataset.a.to_dense_from_rows(), loss, mu, 1e6, 2000);
    const double lambda = 0.5 * free.lpNorm<1>();
    std::vector<double> finals;
    const L1Result pd = solve(p.dataset.a, loss, reg,
                              {.lambda = lambda, .s = 30,
                               .max_iters = kBudget, .gap_tol = 1e-13});
    observe(pd.trace);
    finals.push_back(pd.trace.back().primal);
    for (BaselineKind kind :
         {BaselineKind::kFw, BaselineKind::kAccPgd, BaselineKind::kSvrg}) {
      const long iters = kind == BaselineKind::kFw ? 10 * kBudget : kBudget;
      const BaselineResult b = solve_baseline(
          p.dataset.a, loss, reg,
          {.kind = kind, .lambda = lambda, .max_iters = iters,
           .gap_tol = 1e-13});
      observe(b.trace);
      finals.push_back(b.trace.back().primal);
    }
    const double lo = *std::min_element(finals.begin(), finals.end());
    const double hi = *std::max_element(finals.begin(), finals.end());
    worst = std::max(worst, (hi - lo) / lo);
  }
  return {worst <= kTol, "10 instances, max relative spread of final "
                         "objectives " + fmt("%.3e", worst) + " (<= 1e-6)"};
}

// 7. Cached products against dense recomputation after 100 iterations.
Outcome maintenance_invariants() {
  constexpr double kTolL1 = 1e-9;
  constexpr double kTolTrace = 1e-8;
  SyntheticSpec spec;
  spec.kind = SyntheticKind::kSparseClassification;
  spec.n = 300;
  spec.d = 400;
  spec.structure = 10;
  spec.noise = 0.1;
  spec.seed = 7;
  const SyntheticProblem p = generate_synthetic(spec);
  const LossModel loss = LossModel::smooth_hinge(p.dataset.labels());
  const Regularizer reg(10.0 / 300.0);
  const SolverConfig cfg =
      resolve_config({.lambda = 300.0, .s = 20}, p.dataset.a, loss, reg);
  SolverState st = SolverState::zeros(300, 400);
  for (long t = 1; t <= 100; ++t) {
    primal_step(st, cfg, p.dataset.a, loss, reg);
    dual_step(st, cfg, p.dataset.a, loss);
    st.iter = t;
  }
  const Eigen::MatrixXd dense = p.dataset.a.to_dense_from_rows();
  const Eigen::VectorXd w = dense * st.x;
  const Eigen::VectorXd z = dense.transpose() * st.y;
  const double err_l1 = std::max((st.w - w).norm() / w.norm(),
                                 (st.z - z).norm() / z.norm());

  SyntheticSpec tspec;
  tspec.kind = SyntheticKind::kTraceSensing;
  tspec.n = 100;
  tspec.d = 80;
  tspec.c = 60;
  tspec.structure = 5;
  tspec.seed = 8;
  const SyntheticProblem q = generate_synthetic(tspec);
  const LossModel qloss = LossModel::quadratic(q.dataset.targets);
  const Regularizer qreg(10.0 / 100.0);
  const TraceSolverConfig tcfg = resolve_trace_config(
      {.lambda = oracle::nuclear_norm(q.x0_matrix), .s = 5}, q.dataset.a,
      qloss, qreg);
  MatrixState ms = MatrixState::zeros(100, 80, 60);
  for (long t = 1; t <= 100; ++t) {
    primal_step_trace(ms, tcfg, q.dataset.a, qloss, qreg);
    dual_step_trace(ms, tcfg, q.dataset.a, qloss);
    ms.iter = t;
  }
  const Eigen::MatrixXd qa = q.dataset.a.to_dense_from_rows();
  const Eigen::MatrixXd qw = qa * ms.x;
  const Eigen::MatrixXd qz = qa.transpose() * ms.y;
  const double err_trace = std::max((ms.w - qw).norm() / qw.norm(),
                                    (ms.z - qz).norm() / qz.norm());
  return {err_l1 <= kTolL1 && err_trace <= kTolTrace,
          "l1 w/z relative error " + fmt("%.3e", err_l1) +
              " (<= 1e-9), trace W/Z relative error " + fmt("%.3e", err_trace) +
              " (<= 1e-8)"};
}

// 8. Trace-norm recovery with the oracle contract checked at every call.
Outcome trace_recovery() {
  constexpr double kRel = 1e-3;
  constexpr long kIters = 500;
  constexpr double kBudget = 60.0;
  const auto start = Clock::now();
  bool pass = true;
  std::string detail;
  long calls = 0;
  long violations = 0;
  long positive_optimum = 0;
  for (Index rank : {2, 5}) {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::kTraceSensing;
    spec.n = 100;
    spec.d = 80;
    spec.c = 60;
    spec.structure = rank;
    spec.seed = 50 + static_cast<std::uint64_t>(rank);
    spec.normalize = true;
    const SyntheticProblem p = generate_synthetic(spec);
    const Eigen::MatrixXd dense = p.dataset.a.to_dense_from_rows();
    const Eigen::MatrixXd& b = p.dataset.targets;
    const double mu = 10.0 / 100.0;
    const double lambda = oracle::nuclear_norm(p.x0_matrix);
    const auto objective = [&](const Eigen::MatrixXd& x) {
      return (dense * x - b).squaredNorm() / 200.0 + 0.5 * mu * x.squaredNorm();
    };
    TraceSolverConfig cfg{.lambda = lambda, .s = rank, .max_iters = kIters};
    cfg.on_lmo = [&](const LmoCall& call) {
      ++calls;
      if (oracle::lmo_optimum(call) > 0.0) ++positive_optimum;
      if (oracle::lmo_contract_excess(call) > 0.0) ++violations;
    };
    const TraceResult r =
        solve_trace(p.dataset.a, LossModel::quadratic(b), Regularizer(mu), cfg);
    observe(r.trace);
    const Eigen::MatrixXd ref =
        oracle::nuclear_reference_solve(dense, b, mu, lambda, 1500);
    double p_star = objective(ref);
    for (const TraceRecord& rec : r.trace.records()) {
      p_star = std::min(p_star, rec.primal);
    }
    double first_below = -1.0;
    for (const TraceRecord& rec : r.trace.records()) {
      if ((rec.primal - p_star) / p_star < kRel) {
        first_below = static_cast<double>(rec.iter);
        break;
      }
    }
    const double final_rel = (r.trace.back().primal - p_star) / p_star;
    pass = pass && first_below >= 0.0 && first_below <= kIters;
    detail += "rank " + std::to_string(rank) + ": rel < 1e-3 at iter " +
              fmt("%.0f", first_below) + ", final rel " +
              fmt("%.2e", final_rel) + "; ";
  }
  const double t = seconds_since(start);
  pass = pass && violations == 0 && t < kBudget;
  return {pass, detail + std::to_string(calls) + " oracle calls, " +
                    std::to_string(violations) + " contract violations (" +
                    std::to_string(positive_optimum) + " with l* > 0), " +
                    fmt("%.2f", t) + " s (< 60 s)"};
}

// 9. Weak duality over every trace recorded above.
Outcome weak_duality() {
  constexpr double kFloor = -1e-9;
  return {g_min_gap >= kFloor,
          std::to_string(g_traces) + " traces, " + std::to_string(g_records) +
              " records, min gap " + fmt("%.3e", g_min_gap) + " (>= -1e-9)"};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// 10. Byte-identical trace CSVs for repeated harness runs.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "pdbfw_acceptance";
  fs::remove_all(root);
  std::vector<cli::RunSpec> specs;
  {
    cli::RunSpec spec;
    SyntheticSpec synth;
    synth.kind = SyntheticKind::kSparseClassification;
    synth.n = 150;
    synth.d = 300;
    synth.noise = 0.1;
    spec.synthetic = synth;
    spec.solvers = {"pdbfw", "fw", "acc_pgd", "svrg"};
    spec.max_iters = 200;
    spec.seed = 17;
    specs.push_back(spec);
    cli::RunSpec trace;
    SyntheticSpec sensing;
    sensing.kind = SyntheticKind::kTraceSensing;
    sensing.n = 60;
    sensing.d = 40;
    sensing.c = 30;
    sensing.structure = 3;
    trace.synthetic = sensing;
    trace.constraint = cli::ConstraintKind::kTrace;
    trace.lambda = 10.0;
    trace.s = 3;
    trace.solvers = {"pdbfw"};
    trace.max_iters = 200;
    trace.seed = 18;
    specs.push_back(trace);
  }
  long files = 0;
  long mismatches = 0;
  std::ostringstream log;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (const char* copy : {"a", "b"}) {
      cli::RunSpec spec = specs[i];
      spec.output_dir = root / std::to_string(i) / copy;
      if (cli::run(spec, log) != cli::kExitOk) {
        return {false, "harness run failed: " + log.str()};
      }
    }
    for (const std::string& name : specs[i].solvers) {
      const fs::path dir = root / std::to_string(i);
      ++files;
      const std::string a = read_file(dir / "a" / (name + ".csv"));
      const std::string b = read_file(dir / "b" / (name + ".csv"));
      if (a.empty() || a != b) ++mismatches;
    }
  }
  fs::remove_all(root);
  return {mismatches == 0, std::to_string(files) + " trace CSVs compared, " +
                               std::to_string(mismatches) + " differ"};
}

}  // namespace
}  // namespace pdbfw

int main() {
  using pdbfw::Outcome;
  const std::vector<std::function<Outcome()>> criteria = {
      pdbfw::sparse_prox_exactness, pdbfw::dual_prox_exactness,
      pdbfw::conjugate_correctness, pdbfw::linear_convergence,
      pdbfw::cost_scaling,          pdbfw::solver_agreement,
      pdbfw::maintenance_invariants, pdbfw::trace_recovery,
      pdbfw::weak_duality,          pdbfw::determinism,
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu: %s %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
