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

#pragma once

#include "sylvpose/common.hpp"
#include "sylvpose/eigensolver.hpp"
#include "sylvpose/elimination.hpp"
#include "sylvpose/polysys.hpp"
#include "sylvpose/reduction.hpp"
#include "sylvpose/sylvester.hpp"

#include <chrono>
#include <optional>

namespace sylvpose {

struct Tolerances {
  double rank_tol = 1e-10;
  double imag_tol = 1e-6;
  double residual_tol = 1e-6;
  double beta_tol = 1e-10;
  double collapse_tol = kLambdaCollapseTolerance;
};

struct SolverConfig {
  Method method = Method::kDeg7;
  bool polish = false;
  Tolerances tol;
  bool emit_diagnostics = false;
  ColumnSplit split = ColumnSplit::kPivoted;

  void validate() const {
    const Tolerances& t = tol;
    if (!(t.rank_tol > 0 && t.imag_tol > 0 && t.residual_tol > 0 && t.beta_tol > 0 && t.collapse_tol > 0))
      throw SolverError(ErrorCode::kInvalidInput, Stage::kInput, "tolerances must be strictly positive");
  }
};

struct Diagnostics {
  int degree = 0;
  Eigen::Index e_rows = 0;
  Eigen::Index columns = 0;
  Eigen::Index f_rows = 0;
  int sylvester_rows = 0;
  int f_rank = -1;  // only with emit_diagnostics
  int finite_eigenvalues = 0;
  int real_eigenvalues = 0;
  bool split_fallback = false;
  double coefficient_scale = 0.0;
};

struct SolveResult {
  PoseSolution pose;
  std::optional<Diagnostics> diagnostics;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double elapsed_us(Clock::time_point since) {
  return std::chrono::duration<double, std::micro>(Clock::now() - since).count();
}

}  // namespace detail

// Runs the solving and selection steps on a reduced problem. C is scaled to
// unit norm internally; reported lambdas refer to the unscaled system.
inline SolveResult solve_detailed(const CanonicalForm& form, const SolverConfig& cfg) {
  cfg.validate();
  StageTimings timings;
  auto t0 = detail::Clock::now();
  const CoeffMatrixC C_raw = build_C(form);
  const double scale = C_raw.norm();
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw SolverError(ErrorCode::kDegenerateConstraints, Stage::kPolySystem, "objective does not depend on rotation");
  const CoeffMatrixC C = C_raw.scaled(1.0 / scale);
  timings.polysys_us = detail::elapsed_us(t0);

  t0 = detail::Clock::now();
  ElimSystem sys;
  sys.degree = degree_of(cfg.method);
  std::vector<SylvesterRow> rows;
  if (cfg.method == Method::kDeg8) {
    rows.push_back(build_S0(C, cfg.tol.collapse_tol));
  } else if (cfg.method == Method::kDeg7) {
    const auto s7 = build_S7(C, cfg.tol.collapse_tol);
    rows.assign(s7.begin(), s7.end());
  }
  timings.sylvester_us = detail::elapsed_us(t0);

  t0 = detail::Clock::now();
  auto [E0, E1] = build_E(C, sys.degree);
  if (rows.empty()) {
    sys.E0 = std::move(E0);
    sys.E1 = std::move(E1);
  } else {
    std::tie(sys.E0, sys.E1) = augment(E0, E1, rows);
  }
  sys.sylvester_row_count = static_cast<int>(rows.size());
  sys.F = build_F(C, sys.degree);
  const PencilSystem pencil = build_pencil(sys, {cfg.split, cfg.tol.rank_tol, true});
  timings.elimination_us = detail::elapsed_us(t0);

  t0 = detail::Clock::now();
  const std::vector<EigenPair> eigs = solve_pencil(pencil);
  timings.eigensolve_us = detail::elapsed_us(t0);

  t0 = detail::Clock::now();
  const ExtractOptions xo{cfg.tol.beta_tol, cfg.tol.imag_tol, cfg.tol.residual_tol};
  std::vector<Candidate> cands = extract_candidates(eigs, pencil, C, form, xo);
  if (cfg.polish)
    for (Candidate& c : cands) c = polish(c, C, &form);
  timings.extraction_us = detail::elapsed_us(t0);

  t0 = detail::Clock::now();
  for (Candidate& c : cands) c.lambda *= scale;
  SolveResult out;
  out.pose = select_best(cands, form);
  out.pose.method = cfg.method;
  timings.selection_us = detail::elapsed_us(t0);
  out.pose.timings = timings;

  if (cfg.emit_diagnostics) {
    Diagnostics d;
    d.degree = sys.degree;
    d.e_rows = sys.E0.rows();
    d.columns = sys.E0.cols();
    d.f_rows = sys.F.rows();
    d.sylvester_rows = sys.sylvester_row_count;
    d.f_rank = numerical_rank(sys.F);
    for (const EigenPair& e : eigs) {
      if (!is_finite_pair(e, cfg.tol.beta_tol)) continue;
      ++d.finite_eigenvalues;
      if (is_real_pair(e, cfg.tol.imag_tol)) ++d.real_eigenvalues;
    }
    d.split_fallback = pencil.used_fallback;
    d.coefficient_scale = scale;
    out.diagnostics = d;
  }
  return out;
}

inline PoseSolution solve(const CanonicalForm& form, const SolverConfig& cfg = {}) {
  return solve_detailed(form, cfg).pose;
}

inline SolveResult solve_detailed(const CorrespondenceSet& corrs, const SolverConfig& cfg) {
  const auto t0 = detail::Clock::now();
  const CanonicalForm form = build_canonical(corrs);
  const double reduction_us = detail::elapsed_us(t0);
  SolveResult r = solve_detailed(form, cfg);
  r.pose.timings.reduction_us = reduction_us;
  return r;
}

inline PoseSolution solve(const CorrespondenceSet& corrs, const SolverConfig& cfg = {}) {
  return solve_detailed(corrs, cfg).pose;
}

}  // namespace sylvpose
