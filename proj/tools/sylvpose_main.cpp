// Copyright 2026 The sylvpose Authors.
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

// sylvpose command-line tool.
//
// Exit codes: 0 success, 1 usage, 2 parse error, 3 solver error, 4 I/O
// error, 5 verification failure.

#include "correspondence_io.hpp"

#include "sylvpose/sylvpose.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace sylvpose;
using nlohmann::json;

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitSolver = 3,
  kExitIo = 4,
  kExitVerify = 5,
};

struct SolveArgs {
  std::string input;
  std::string method = "deg7";
  std::string split = "pivoted";
  std::string dump_dir;
  bool polish = false;
  bool json = false;
  bool diagnostics = false;
};

struct BenchArgs {
  std::string sweep = "noise";
  int trials = 100;
  std::vector<std::string> methods = {"deg7", "deg8", "deg9"};
  std::string out;
  std::string summary;
  std::uint64_t seed = 1;
  std::vector<double> sigmas;
  std::vector<int> counts;
  int threads = 0;
  bool omit_timing = false;
  bool polish = false;
};

struct VerifyArgs {
  int trials = 10;
  std::uint64_t seed = 1;
  std::string fault = "none";
};

struct GenArgs {
  std::string kind = "3d3d";
  int count = 100;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

json pose_json(const PoseSolution& s) {
  json R = json::array();
  for (int i = 0; i < 3; ++i) R.push_back({s.R(i, 0), s.R(i, 1), s.R(i, 2)});
  const StageTimings& t = s.timings;
  return {{"method", to_string(s.method)},
          {"q", {s.q[0], s.q[1], s.q[2], s.q[3]}},
          {"R", R},
          {"t", {s.t[0], s.t[1], s.t[2]}},
          {"cost", s.cost},
          {"lambda", s.lambda},
          {"candidates", s.candidates.size()},
          {"timings_us",
           {{"reduction", t.reduction_us},
            {"polysys", t.polysys_us},
            {"sylvester", t.sylvester_us},
            {"elimination", t.elimination_us},
            {"eigensolve", t.eigensolve_us},
            {"extraction", t.extraction_us},
            {"selection", t.selection_us},
            {"step2", t.step2_us()}}}};
}

void dump_matrices(const CorrespondenceSet& corrs, const SolverConfig& cfg, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io::IoError("cannot create " + dir.string());
  const CoeffMatrixC C = build_C(build_canonical(corrs));
  const ElimSystem sys = build_elim_system(C.scaled(1.0 / C.norm()), cfg.method, cfg.tol.collapse_tol);
  const std::pair<const char*, const Eigen::MatrixXd*> mats[] = {{"E0", &sys.E0}, {"E1", &sys.E1}, {"F", &sys.F}};
  for (const auto& [name, m] : mats) {
    const auto path = dir / (std::string(name) + ".csv");
    std::ofstream out(path);
    if (!out) throw io::IoError("cannot open " + path.string() + " for writing");
    write_matrix_csv(out, *m, name);
    if (!out) throw io::IoError("cannot write " + path.string());
  }
}

int cmd_solve(const SolveArgs& a) {
  io::CorrespondenceFile file;
  try {
    file = io::load(a.input);
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << a.input << ": " << e.what() << '\n';
    return kExitParse;
  } catch (const io::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }

  SolverConfig cfg;
  cfg.method = *parse_method(a.method);
  cfg.polish = a.polish;
  cfg.split = a.split == "trailing" ? ColumnSplit::kTrailing : ColumnSplit::kPivoted;
  cfg.emit_diagnostics = a.diagnostics;

  SolveResult res;
  try {
    if (!a.dump_dir.empty()) dump_matrices(file.records, cfg, a.dump_dir);
    res = solve_detailed(file.records, cfg);
  } catch (const SolverError& e) {
    if (a.json) {
      std::cout << json{{"status", "error"},
                        {"code", to_string(e.code())},
                        {"stage", to_string(e.stage())},
                        {"message", e.what()}}
                       .dump(2)
                << '\n';
    } else {
      std::cerr << "solver error [" << to_string(e.stage()) << "]: " << e.what() << '\n';
    }
    return kExitSolver;
  } catch (const io::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }

  const PoseSolution& s = res.pose;
  std::optional<std::pair<double, double>> err;
  if (file.ground_truth)
    err = {rotation_error(s.R, file.ground_truth->R), translation_error(s.t, file.ground_truth->t)};

  if (a.json) {
    json j = pose_json(s);
    j["status"] = "ok";
    if (err) j["ground_truth_error"] = {{"delta_r_deg", err->first}, {"delta_t_m", err->second}};
    if (res.diagnostics) {
      const Diagnostics& d = *res.diagnostics;
      j["diagnostics"] = {{"degree", d.degree},
                          {"e_rows", d.e_rows},
                          {"columns", d.columns},
                          {"f_rows", d.f_rows},
                          {"f_rank", d.f_rank},
                          {"sylvester_rows", d.sylvester_rows},
                          {"finite_eigenvalues", d.finite_eigenvalues},
                          {"real_eigenvalues", d.real_eigenvalues},
                          {"split_fallback", d.split_fallback}};
    }
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }

  std::ostringstream os;
  os << std::setprecision(10);
  os << "method       " << to_string(s.method) << '\n';
  os << "quaternion   " << s.q[0] << ' ' << s.q[1] << ' ' << s.q[2] << ' ' << s.q[3] << '\n';
  for (int i = 0; i < 3; ++i)
    os << (i == 0 ? "rotation     " : "             ") << s.R(i, 0) << ' ' << s.R(i, 1) << ' ' << s.R(i, 2) << '\n';
  os << "translation  " << s.t[0] << ' ' << s.t[1] << ' ' << s.t[2] << '\n';
  os << "cost         " << s.cost << '\n';
  os << "candidates   " << s.candidates.size() << '\n';
  os << "step2 time   " << std::setprecision(4) << s.timings.step2_us() / 1000.0 << " ms\n";
  if (err) os << std::setprecision(6) << "error        " << err->first << " deg, " << err->second << " m\n";
  if (res.diagnostics) {
    const Diagnostics& d = *res.diagnostics;
    os << "E            " << d.e_rows << " x " << d.columns << " (" << d.sylvester_rows << " Sylvester rows)\n";
    os << "F            " << d.f_rows << " x " << d.columns << ", rank " << d.f_rank << '\n';
    os << "eigenvalues  " << d.finite_eigenvalues << " finite, " << d.real_eigenvalues << " real\n";
  }
  std::cout << os.str();
  return kExitOk;
}

void print_table(std::ostream& os, const std::vector<CellSummary>& cells, bool pixels) {
  os << std::left << std::setw(6) << "method" << std::right << std::setw(7) << "N" << std::setw(8)
     << (pixels ? "sigma_px" : "sigma_m") << std::setw(7) << "ok" << std::setw(14) << "mean_dr_deg" << std::setw(14)
     << "mean_dt_m" << std::setw(14) << "median_ms" << '\n';
  os << std::setprecision(4);
  for (const CellSummary& c : cells) {
    os << std::left << std::setw(6) << to_string(c.method) << std::right << std::setw(7) << c.N << std::setw(8)
       << c.sigma << std::setw(7) << (c.trials - c.failures) << std::setw(14) << c.delta_r_deg.mean << std::setw(14)
       << c.delta_t_m.mean << std::setw(14) << c.solve_time_us.median / 1000.0 << '\n';
  }
}

json summary_json(const SweepSpec& spec, const std::vector<CellSummary>& cells, bool omit_timing) {
  auto stats = [](const Stats& s) { return json{{"mean", s.mean}, {"std", s.stddev}, {"median", s.median}}; };
  json arr = json::array();
  for (const CellSummary& c : cells) {
    json cell = {{"method", to_string(c.method)},
                 {"N", c.N},
                 {"sigma", c.sigma},
                 {"trials", c.trials},
                 {"failures", c.failures},
                 {"delta_r_deg", stats(c.delta_r_deg)},
                 {"delta_t_m", stats(c.delta_t_m)}};
    cell["solve_time_us"] = omit_timing ? stats(Stats{}) : stats(c.solve_time_us);
    arr.push_back(cell);
  }
  return {{"sweep", to_string(spec.kind)}, {"seed", spec.master_seed}, {"trials", spec.trials}, {"cells", arr}};
}

int cmd_bench(const BenchArgs& a) {
  SweepKind kind = SweepKind::kNoise;
  if (a.sweep == "count") kind = SweepKind::kCount;
  if (a.sweep == "pnp") kind = SweepKind::kPnP;
  SweepSpec spec = default_sweep(kind);
  spec.trials = a.trials;
  spec.master_seed = a.seed;
  spec.threads = a.threads;
  spec.polish = a.polish;
  spec.methods.clear();
  for (const std::string& m : a.methods) spec.methods.push_back(*parse_method(m));
  if (!a.sigmas.empty()) spec.sigma_grid = a.sigmas;
  if (!a.counts.empty()) spec.N_grid = a.counts;

  const std::vector<TrialRecord> records = run_benchmark(spec);
  const std::vector<CellSummary> cells = summarize(records);

  try {
    if (a.out.empty()) {
      write_csv(std::cout, records, a.omit_timing);
      print_table(std::cerr, cells, kind == SweepKind::kPnP);
    } else {
      std::ofstream out(a.out, std::ios::binary);
      if (!out) throw io::IoError("cannot open " + a.out + " for writing");
      write_csv(out, records, a.omit_timing);
      out.close();
      if (!out) throw io::IoError("cannot write " + a.out);
      print_table(std::cout, cells, kind == SweepKind::kPnP);
    }
    if (!a.summary.empty()) {
      std::ofstream out(a.summary, std::ios::binary);
      if (!out) throw io::IoError("cannot open " + a.summary + " for writing");
      out << summary_json(spec, cells, a.omit_timing).dump(2) << '\n';
      out.close();
      if (!out) throw io::IoError("cannot write " + a.summary);
    }
  } catch (const io::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions opts;
  opts.trials = a.trials;
  opts.seed = a.seed;
  opts.fault = a.fault == "zero-sylvester-row" ? Fault::kZeroSylvesterRow : Fault::kNone;
  const VerifyReport report = run_verify(opts);
  for (const PropertyResult& p : report.properties) {
    std::cout << (p.passed() ? "PASS  " : "FAIL  ") << p.name << "  [" << (p.checked - p.failed) << '/' << p.checked
              << ']';
    if (!p.passed() && p.failing_seed) std::cout << "  seed " << *p.failing_seed << ": " << p.detail;
    std::cout << '\n';
  }
  return report.all_passed() ? kExitOk : kExitVerify;
}

int cmd_gen(const GenArgs& a) {
  Scene s;
  try {
    s = a.kind == "pnp" ? gen_scene_pnp(a.count, a.seed) : gen_scene_mixed(a.count, a.seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  s = add_noise(s, a.sigma);
  try {
    const std::string text = io::serialize(io::from_scene(s));
    if (a.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(a.out, std::ios::binary);
      if (!out) throw io::IoError("cannot open " + a.out + " for writing");
      out << text;
      out.close();
      if (!out) throw io::IoError("cannot write " + a.out);
    }
  } catch (const io::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form pose estimation from point, line and plane correspondences"};
  app.require_subcommand(1);
  const std::vector<std::string> method_names = {"deg7", "deg8", "deg9"};

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Estimate the pose from a correspondence file");
  solve_cmd->add_option("input", solve_args.input, "Correspondence file")->required();
  solve_cmd->add_option("--method", solve_args.method, "Solver degree")
      ->check(CLI::IsMember(method_names))
      ->capture_default_str();
  solve_cmd->add_flag("--polish", solve_args.polish, "Refine candidates with Newton steps");
  solve_cmd->add_flag("--json", solve_args.json, "Print a JSON report");
  solve_cmd->add_flag("--diagnostics", solve_args.diagnostics, "Report matrix sizes, ranks and eigenvalue counts");
  solve_cmd->add_option("--split", solve_args.split, "Column split for the elimination")
      ->check(CLI::IsMember({"pivoted", "trailing"}))
      ->capture_default_str();
  solve_cmd->add_option("--dump-dir", solve_args.dump_dir, "Write E0, E1 and F as CSV into this directory");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep on synthetic scenes");
  bench_cmd->add_option("--sweep", bench_args.sweep, "Sweep kind")
      ->check(CLI::IsMember({"noise", "count", "pnp"}))
      ->capture_default_str();
  bench_cmd->add_option("--trials", bench_args.trials, "Trials per grid cell")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  bench_cmd->add_option("--methods", bench_args.methods, "Methods to run")
      ->delimiter(',')
      ->check(CLI::IsMember(method_names));
  bench_cmd->add_option("--out", bench_args.out, "CSV output path (default: stdout)");
  bench_cmd->add_option("--summary", bench_args.summary, "JSON summary output path");
  bench_cmd->add_option("--seed", bench_args.seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("--sigmas", bench_args.sigmas, "Override the noise grid")->delimiter(',');
  bench_cmd->add_option("--counts", bench_args.counts, "Override the correspondence-count grid")->delimiter(',');
  bench_cmd->add_option("--threads", bench_args.threads, "Worker threads (0: SYLVPOSE_THREADS or all cores)");
  bench_cmd->add_flag("--omit-timing", bench_args.omit_timing, "Write zero timings for byte-stable output");
  bench_cmd->add_flag("--polish", bench_args.polish, "Refine candidates with Newton steps");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Check the algebraic properties on random instances");
  verify_cmd->add_option("--trials", verify_args.trials, "Random instances")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_args.seed, "Master seed")->capture_default_str();
  verify_cmd->add_option("--inject-fault", verify_args.fault, "Corrupt the system to exercise the checks")
      ->check(CLI::IsMember({"none", "zero-sylvester-row"}))
      ->group("");

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic correspondence file with ground truth");
  gen_cmd->add_option("--kind", gen_args.kind, "Problem kind")
      ->check(CLI::IsMember({"3d3d", "pnp"}))
      ->capture_default_str();
  gen_cmd->add_option("-N,--count", gen_args.count, "Correspondence count (mixed points, lines and planes; or PnP points)")
      ->capture_default_str();
  gen_cmd->add_option("--sigma", gen_args.sigma, "Noise level (m, or px for pnp)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_args.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_args.out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*solve_cmd) return cmd_solve(solve_args);
  if (*bench_cmd) return cmd_bench(bench_args);
  if (*verify_cmd) return cmd_verify(verify_args);
  if (*gen_cmd) return cmd_gen(gen_args);
  return kExitUsage;
}
