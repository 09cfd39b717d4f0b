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

// Benchmark sweeps over noise level or correspondence count.

#pragma once

#include "sylvpose/sim.hpp"
#include "sylvpose/solver.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace sylvpose {

enum class SweepKind { kNoise, kCount, kPnP };

inline std::string_view to_string(SweepKind k) {
  switch (k) {
    case SweepKind::kNoise: return "noise";
    case SweepKind::kCount: return "count";
    case SweepKind::kPnP: return "pnp";
  }
  return "?";
}

struct SweepSpec {
  SweepKind kind = SweepKind::kNoise;
  std::vector<int> N_grid;
  std::vector<double> sigma_grid;  // meters, or pixels for PnP
  int trials = 100;
  std::vector<Method> methods = {Method::kDeg7, Method::kDeg8, Method::kDeg9};
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0: SYLVPOSE_THREADS or hardware concurrency
  bool polish = false;
  double focal_px = kDefaultFocalPx;
};

inline SweepSpec default_sweep(SweepKind kind) {
  SweepSpec s;
  s.kind = kind;
  switch (kind) {
    case SweepKind::kNoise:
      s.N_grid = {1000};
      s.sigma_grid = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
      break;
    case SweepKind::kCount:
      for (int n = 100; n <= 1000; n += 100) s.N_grid.push_back(n);
      s.sigma_grid = {0.2};
      break;
    case SweepKind::kPnP:
      s.N_grid = {10};
      s.sigma_grid = {0.0, 0.5, 1.0, 2.0};
      break;
  }
  return s;
}

struct TrialRecord {
  Method method = Method::kDeg7;
  std::uint64_t seed = 0;
  int N = 0;
  double sigma = 0.0;
  double delta_r_deg = 0.0;
  double delta_t_m = 0.0;
  double solve_time_us = 0.0;
  int candidates = 0;
  std::string status = "ok";
};

inline int resolve_threads(int requested) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SYLVPOSE_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) n = std::min(std::max(n, 1), cap);
    }
  }
  return std::max(n, 1);
}

inline Scene make_trial_scene(const SweepSpec& spec, int N, double sigma, std::uint64_t seed) {
  const Scene clean = spec.kind == SweepKind::kPnP ? gen_scene_pnp(N, seed, spec.focal_px) : gen_scene_mixed(N, seed);
  return add_noise(clean, sigma, seed);
}

inline TrialRecord run_trial(const Scene& scene, Method method, bool polish) {
  TrialRecord r;
  r.method = method;
  r.seed = scene.seed;
  r.N = scene.meta.N;
  r.sigma = scene.meta.sigma;
  try {
    SolverConfig cfg;
    cfg.method = method;
    cfg.polish = polish;
    const PoseSolution sol = solve(scene.correspondences, cfg);
    r.delta_r_deg = rotation_error(sol.R, scene.R);
    r.delta_t_m = translation_error(sol.t, scene.t);
    r.solve_time_us = sol.timings.step2_us();
    r.candidates = static_cast<int>(sol.candidates.size());
  } catch (const SolverError& e) {
    r.status = std::string(to_string(e.code()));
    r.delta_r_deg = std::numeric_limits<double>::quiet_NaN();
    r.delta_t_m = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

// Records are ordered by grid cell, then trial, then method, independent of
// the thread count.
inline std::vector<TrialRecord> run_benchmark(const SweepSpec& spec) {
  if (spec.trials < 0) throw std::invalid_argument("run_benchmark: negative trial count");
  struct Job {
    int N;
    double sigma;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  std::uint64_t index = 0;
  for (int N : spec.N_grid)
    for (double sigma : spec.sigma_grid)
      for (int t = 0; t < spec.trials; ++t) jobs.push_back({N, sigma, derive_seed(spec.master_seed, index++)});

  const size_t per_job = spec.methods.size();
  std::vector<TrialRecord> out(jobs.size() * per_job);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      const Scene scene = make_trial_scene(spec, jobs[j].N, jobs[j].sigma, jobs[j].seed);
      for (size_t m = 0; m < per_job; ++m) {
        TrialRecord r = run_trial(scene, spec.methods[m], spec.polish);
        r.N = jobs[j].N;
        out[j * per_job + m] = std::move(r);
      }
    }
  };
  const int n_threads = std::min<int>(resolve_threads(spec.threads), static_cast<int>(std::max<size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

inline constexpr std::string_view kCsvHeader =
    "method,seed,N,sigma,delta_r_deg,delta_t_m,solve_time_us,candidates,status";

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const std::vector<TrialRecord>& records, bool omit_timing = false) {
  os << kCsvHeader << '\n';
  for (const TrialRecord& r : records) {
    os << to_string(r.method) << ',' << r.seed << ',' << r.N << ',' << format_double(r.sigma) << ','
       << format_double(r.delta_r_deg) << ',' << format_double(r.delta_t_m) << ','
       << format_double(omit_timing ? 0.0 : r.solve_time_us) << ',' << r.candidates << ',' << r.status << '\n';
  }
}

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
  double median = 0.0;
};

inline Stats compute_stats(std::vector<double> v) {
  Stats s;
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return s;
}

struct CellSummary {
  Method method = Method::kDeg7;
  int N = 0;
  double sigma = 0.0;
  int trials = 0;
  int failures = 0;
  Stats delta_r_deg;
  Stats delta_t_m;
  Stats solve_time_us;
};

// Aggregates over successful trials, one cell per (method, N, sigma).
inline std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
  std::map<std::tuple<int, int, double>, std::vector<const TrialRecord*>> cells;
  for (const TrialRecord& r : records) cells[{r.N, static_cast<int>(r.method), r.sigma}].push_back(&r);
  std::vector<CellSummary> out;
  for (const auto& [key, rs] : cells) {
    CellSummary c;
    c.N = std::get<0>(key);
    c.method = static_cast<Method>(std::get<1>(key));
    c.sigma = std::get<2>(key);
    c.trials = static_cast<int>(rs.size());
    std::vector<double> dr, dt, tm;
    for (const TrialRecord* r : rs) {
      if (r->status != "ok") {
        ++c.failures;
        continue;
      }
      dr.push_back(r->delta_r_deg);
      dt.push_back(r->delta_t_m);
      tm.push_back(r->solve_time_us);
    }
    c.delta_r_deg = compute_stats(dr);
    c.delta_t_m = compute_stats(dt);
    c.solve_time_us = compute_stats(tm);
    out.push_back(c);
  }
  return out;
}

}  // namespace sylvpose
