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

#include "harness.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>

#include "pdbfw/baselines.h"
#include "pdbfw/errors.h"
#include "pdbfw/pdbfw_l1.h"
#include "pdbfw/pdbfw_trace.h"

namespace pdbfw::cli {
namespace {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

Dataset load_dataset(const RunSpec& spec) {
  if (spec.synthetic) {
    SyntheticSpec synth = *spec.synthetic;
    synth.seed = spec.seed;
    synth.normalize = spec.normalize;
    return generate_synthetic(synth).dataset;
  }
  std::error_code ec;
  if (!fs::is_regular_file(spec.data_path, ec) ||
      !std::ifstream(spec.data_path)) {
    throw UsageError("cannot read data file '" + spec.data_path + "'");
  }
  Dataset ds = parse_libsvm_file(spec.data_path, spec.n_cols);
  if (spec.normalize) ds = normalize_rows(ds);
  return ds;
}

bool plus_minus_one(const Eigen::MatrixXd& targets) {
  return targets.cols() == 1 &&
         (targets.array().abs() == 1.0).all();
}

LossModel make_loss(const RunSpec& spec, const Dataset& ds) {
  LossKind kind = LossKind::kQuadratic;
  if (spec.loss) {
    kind = *spec.loss;
  } else if (spec.constraint == ConstraintKind::kL1 &&
             plus_minus_one(ds.targets)) {
    kind = LossKind::kSmoothHinge;
  }
  if (kind == LossKind::kQuadratic) return LossModel::quadratic(ds.targets);
  if (ds.targets.cols() != 1) {
    throw UsageError("smooth_hinge needs one label per sample");
  }
  try {
    return LossModel::smooth_hinge(ds.labels());
  } catch (const InvalidArgument& e) {
    throw UsageError(std::string("smooth_hinge: ") + e.what());
  }
}

struct Outcome {
  ConvergenceTrace trace;
  bool converged = false;
};

Outcome run_solver(const std::string& name, const RunSpec& spec,
                   const Dataset& ds, const LossModel& loss,
                   const Regularizer& reg) {
  const SparseDesignMatrix& a = ds.a;
  if (spec.constraint == ConstraintKind::kTrace) {
    TraceSolverConfig cfg;
    cfg.lambda = spec.lambda;
    cfg.s = spec.s > 0 ? spec.s : std::min(a.cols(), loss.outputs());
    cfg.k = spec.k;
    cfg.max_iters = spec.max_iters;
    cfg.gap_tol = spec.gap_tol;
    cfg.time_limit = spec.time_limit;
    TraceResult r = solve_trace(a, loss, reg, cfg);
    return {std::move(r.trace), r.converged};
  }
  if (name == "pdbfw") {
    SolverConfig cfg;
    cfg.lambda = spec.lambda;
    cfg.s = spec.s > 0 ? spec.s : a.cols();
    cfg.k = spec.k;
    cfg.max_iters = spec.max_iters;
    cfg.gap_tol = spec.gap_tol;
    cfg.time_limit = spec.time_limit;
    L1Result r = solve(a, loss, reg, cfg);
    return {std::move(r.trace), r.converged};
  }
  BaselineConfig cfg;
  cfg.kind = name == "fw"        ? BaselineKind::kFw
             : name == "acc_pgd" ? BaselineKind::kAccPgd
                                 : BaselineKind::kSvrg;
  cfg.lambda = spec.lambda;
  cfg.max_iters = spec.max_iters;
  cfg.gap_tol = spec.gap_tol;
  cfg.seed = spec.seed;
  cfg.time_limit = spec.time_limit;
  BaselineResult r = solve_baseline(a, loss, reg, cfg);
  return {std::move(r.trace), r.converged};
}

bool write_file(const fs::path& path, const std::string& contents,
                std::ostream& log) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) {
    log << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& token, T& out) {
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return !token.empty() && ec == std::errc() && ptr == end;
}

}  // namespace

const std::vector<std::string>& solver_names(ConstraintKind constraint) {
  static const std::vector<std::string> l1 = {"pdbfw", "fw", "acc_pgd",
                                              "svrg"};
  static const std::vector<std::string> trace = {"pdbfw"};
  return constraint == ConstraintKind::kL1 ? l1 : trace;
}

void validate(const RunSpec& spec) {
  if (spec.data_path.empty() == !spec.synthetic.has_value()) {
    throw UsageError("give exactly one of --data and --synthetic");
  }
  if (spec.solvers.empty()) throw UsageError("no solvers given");
  const auto& valid = solver_names(spec.constraint);
  std::vector<std::string> seen;
  for (const std::string& name : spec.solvers) {
    if (std::find(valid.begin(), valid.end(), name) == valid.end()) {
      throw UsageError("unknown solver '" + name + "'; valid solvers: " +
                       join(valid));
    }
    if (std::find(seen.begin(), seen.end(), name) != seen.end()) {
      throw UsageError("solver '" + name + "' listed twice");
    }
    seen.push_back(name);
  }
  if (!(spec.lambda > 0.0)) throw UsageError("--lambda must be positive");
  if (spec.mu < 0.0) throw UsageError("--mu must be positive");
  if (spec.s < 0 || spec.k < 0) throw UsageError("--s and --k must be >= 0");
  if (spec.max_iters < 0) throw UsageError("--max-iters must be >= 0");
  if (!(spec.gap_tol >= 0.0) || !(spec.time_limit >= 0.0)) {
    throw UsageError("--gap-tol and --time-limit must be >= 0");
  }
  if (spec.constraint == ConstraintKind::kTrace && spec.loss &&
      *spec.loss == LossKind::kSmoothHinge) {
    throw UsageError("--constraint trace supports only --loss quadratic");
  }
  if (spec.synthetic) {
    const SyntheticSpec& synth = *spec.synthetic;
    const bool sensing = synth.kind == SyntheticKind::kTraceSensing;
    if (sensing && spec.constraint == ConstraintKind::kL1) {
      throw UsageError("--synthetic trace_sensing needs --constraint trace");
    }
    if (!sensing && synth.c != 1) {
      throw UsageError("--c applies only to trace_sensing");
    }
  }
}

std::string format_trace_csv(const ConvergenceTrace& trace, bool wall_time) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRecord& r : trace.records()) {
    out += std::to_string(r.iter);
    out += ',';
    out += format_double(wall_time ? r.seconds : 0.0);
    out += ',';
    out += format_double(r.primal);
    out += ',';
    out += format_double(r.dual);
    out += ',';
    out += format_double(r.gap);
    out += ',';
    out += std::to_string(r.flops);
    out += ',';
    out += std::to_string(r.support);
    out += '\n';
  }
  return out;
}

ConvergenceTrace parse_trace_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(source, 0, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) {
    throw ParseError(source, line_no,
                     "expected header '" + std::string(kTraceHeader) + "'");
  }
  ConvergenceTrace trace;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 7) {
      throw ParseError(source, line_no,
                       "expected 7 fields, got " +
                           std::to_string(fields.size()));
    }
    TraceRecord r;
    long long support = 0;
    if (!parse_number(fields[0], r.iter) ||
        !parse_number(fields[1], r.seconds) ||
        !parse_number(fields[2], r.primal) ||
        !parse_number(fields[3], r.dual) || !parse_number(fields[4], r.gap) ||
        !parse_number(fields[5], r.flops) ||
        !parse_number(fields[6], support)) {
      throw ParseError(source, line_no, "malformed number");
    }
    r.support = static_cast<Index>(support);
    try {
      trace.append(r);
    } catch (const InvalidArgument&) {
      throw ParseError(source, line_no, "iteration numbers must increase");
    }
  }
  if (trace.empty()) throw ParseError(source, line_no, "no records");
  return trace;
}

int run(const RunSpec& spec, std::ostream& log) {
  Dataset ds;
  try {
    validate(spec);
    ds = load_dataset(spec);
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    log << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const InvalidArgument& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const double mu =
      spec.mu > 0.0 ? spec.mu : 10.0 / static_cast<double>(ds.a.rows());
  std::optional<LossModel> loss;
  try {
    loss.emplace(make_loss(spec, ds));
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  const Regularizer reg(mu);
  for (const std::string& notice : ds.notices) log << "note: " << notice << "\n";

  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec) {
    log << "error: cannot create " << spec.output_dir.string() << ": "
        << ec.message() << "\n";
    return kExitSolverFailure;
  }

  bool failed = false;
  std::string summary =
      "solver\tstatus\titerations\tprimal\tdual\tgap\tseconds\n";
  for (const std::string& name : spec.solvers) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    std::string status;
    try {
      outcome = run_solver(name, spec, ds, *loss, reg);
      status = outcome.converged ? "converged" : "budget";
    } catch (const ConfigError& e) {
      log << name << ": configuration error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      log << name << ": failed: " << e.what() << "\n";
      failed = true;
      summary += name + "\tfailed\t-\t-\t-\t-\t-\n";
      continue;
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    const TraceRecord& last = outcome.trace.back();
    if (!write_file(spec.output_dir / (name + ".csv"),
                    format_trace_csv(outcome.trace, spec.wall_time), log)) {
      return kExitSolverFailure;
    }
    summary += name + "\t" + status + "\t" + std::to_string(last.iter) + "\t" +
               format_double(last.primal) + "\t" + format_double(last.dual) +
               "\t" + format_double(last.gap) + "\t" + format_double(seconds) +
               "\n";
    log << name << ": " << last.iter << " iterations, gap "
        << format_double(last.gap) << " (" << status << ")\n";
  }
  if (!write_file(spec.output_dir / "summary.tsv", summary, log)) {
    return kExitSolverFailure;
  }
  return failed ? kExitSolverFailure : kExitOk;
}

int compare(const fs::path& dir, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    err << "error: " << dir.string() << " is not a directory\n";
    return kExitUsage;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << "error: no trace CSVs in " << dir.string() << "\n";
    return kExitUsage;
  }

  std::vector<std::pair<std::string, ConvergenceTrace>> traces;
  try {
    for (const fs::path& file : files) {
      std::ifstream in(file);
      if (!in) throw ParseError(file.string(), 0, "cannot open file");
      traces.emplace_back(file.stem().string(),
                          parse_trace_csv(in, file.string()));
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  }

  bool timed = true;
  double p_star = std::numeric_limits<double>::infinity();
  for (const auto& [name, trace] : traces) {
    timed = timed && std::any_of(trace.records().begin(),
                                 trace.records().end(),
                                 [](const TraceRecord& r) {
                                   return r.seconds > 0.0;
                                 });
    p_star = std::min(p_star, trace.back().primal);
  }

  const double thresholds[] = {1e-2, 1e-4, 1e-6};
  out << "P* = " << format_double(p_star)
      << " (best final primal objective)\n";
  out << "time to gap in " << (timed ? "seconds" : "flops") << "\n";
  out << std::left << std::setw(10) << "solver" << std::right
      << std::setw(8) << "iters" << std::setw(16) << "final_primal"
      << std::setw(14) << "final_gap" << std::setw(14) << "rel_error"
      << std::setw(14) << "gap<=1e-2" << std::setw(14) << "gap<=1e-4"
      << std::setw(14) << "gap<=1e-6" << "\n";
  for (const auto& [name, trace] : traces) {
    const TraceRecord& last = trace.back();
    char buf[64];
    std::string rel = "—";
    if (p_star > 0.0) {
      std::snprintf(buf, sizeof(buf), "%.3e", (last.primal - p_star) / p_star);
      rel = buf;
    }
    std::snprintf(buf, sizeof(buf), "%.10g", last.primal);
    const std::string primal = buf;
    std::snprintf(buf, sizeof(buf), "%.3e", last.gap);
    out << std::left << std::setw(10) << name << std::right << std::setw(8)
        << last.iter << std::setw(16) << primal << std::setw(14) << buf;
    // setw counts bytes, and the placeholder is three bytes wide.
    const auto cell = [&out](const std::string& text) {
      const bool dash = text == "—";
      out << std::setw(dash ? 16 : 14) << text;
    };
    cell(rel);
    for (double threshold : thresholds) {
      std::string value = "—";
      for (const TraceRecord& r : trace.records()) {
        if (r.gap <= threshold) {
          if (timed) {
            std::snprintf(buf, sizeof(buf), "%.4g", r.seconds);
            value = buf;
          } else {
            value = std::to_string(r.flops);
          }
          break;
        }
      }
      cell(value);
    }
    out << "\n";
  }
  return kExitOk;
}

}  // namespace pdbfw::cli
