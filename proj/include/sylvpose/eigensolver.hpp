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

// Generalized eigenproblem Q0 x = lambda Q1 x and recovery of quaternions
// from its eigenvectors.

#pragma once

#include "sylvpose/common.hpp"
#include "sylvpose/elimination.hpp"
#include "sylvpose/poly.hpp"
#include "sylvpose/polysys.hpp"
#include "sylvpose/reduction.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace sylvpose {

struct EigenPair {
  std::complex<double> alpha;
  double beta = 0.0;
  Eigen::VectorXcd x;  // A-block coordinates

  std::complex<double> lambda() const { return alpha / beta; }
};

inline std::vector<EigenPair> solve_pencil(const Eigen::MatrixXd& Q0, const Eigen::MatrixXd& Q1) {
  if (Q0.rows() != Q0.cols() || Q0.rows() != Q1.rows() || Q0.cols() != Q1.cols())
    throw SolverError(ErrorCode::kDimensionMismatch, Stage::kEigensolve, "pencil matrices must be square and equal");
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(Q0, Q1, true);
  if (ges.info() != Eigen::Success)
    throw SolverError(ErrorCode::kEigensolveFailure, Stage::kEigensolve, "QZ iteration did not converge");
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  const auto vecs = ges.eigenvectors();
  std::vector<EigenPair> out(Q0.rows());
  for (Eigen::Index k = 0; k < Q0.rows(); ++k) {
    out[k].alpha = alphas[k];
    out[k].beta = betas[k];
    out[k].x = vecs.col(k);
  }
  return out;
}

inline std::vector<EigenPair> solve_pencil(const PencilSystem& p) { return solve_pencil(p.Q0, p.Q1); }

struct ExtractOptions {
  double beta_tol = 1e-10;
  double imag_tol = 1e-6;
  double residual_tol = 1e-6;
};

struct Candidate {
  Vec4 q = Vec4(1, 0, 0, 0);
  double lambda = 0.0;
  double cost = 0.0;
  double residual = 0.0;  // ||e(q, lambda)|| / ||C||
  bool is_real = true;
};

inline bool is_finite_pair(const EigenPair& e, double beta_tol) {
  return std::abs(e.beta) > beta_tol * std::abs(e.alpha);
}

inline bool is_real_pair(const EigenPair& e, double imag_tol) {
  const std::complex<double> l = e.lambda();
  return std::abs(l.imag()) <= imag_tol * (1.0 + std::abs(l.real()));
}

inline double root_residual(const CoeffMatrixC& C, const Vec4& q, double lambda) {
  const double scale = C.norm();
  const double r = C.eval_e(q, lambda).norm();
  return scale > 0.0 ? r / scale : r;
}

// Unit quaternion with w >= 0 (first nonzero component positive when w = 0).
inline Vec4 canonical_sign(Vec4 q) {
  for (int k = 0; k < 4; ++k) {
    if (q[k] != 0.0) {
      if (q[k] < 0.0) q = -q;
      break;
    }
  }
  return q;
}

// Reads q from the degree-d monomial vector by dividing the v^(d-1) u
// entries by the v^d entry, with v the variable of largest |m[v^d]|.
inline Vec4 quaternion_from_monomials(const Eigen::VectorXcd& m, int degree) {
  const MonomialBasis& basis = MonomialBasis::of(degree);
  int v = 0;
  double best = -1.0;
  for (int k = 0; k < 4; ++k) {
    const double a = std::abs(m[basis.pure_power_index(k)]);
    if (a > best) {
      best = a;
      v = k;
    }
  }
  const std::complex<double> pivot = m[basis.pure_power_index(v)];
  Vec4 q;
  for (int u = 0; u < 4; ++u) {
    Exponent e{0, 0, 0, 0};
    e[v] = degree - 1;
    e[u] += 1;
    q[u] = (m[basis.index_of(e)] / pivot).real();
  }
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) return Vec4(std::numeric_limits<double>::quiet_NaN(), 0, 0, 0);
  return canonical_sign(q / n);
}

// Candidates from finite, real eigenpairs whose root residual passes.
inline std::vector<Candidate> extract_candidates(const std::vector<EigenPair>& eigs, const PencilSystem& p,
                                                 const CoeffMatrixC& C, const CanonicalForm& form,
                                                 const ExtractOptions& opts = {}) {
  std::vector<Candidate> out;
  for (const EigenPair& e : eigs) {
    if (!is_finite_pair(e, opts.beta_tol) || !is_real_pair(e, opts.imag_tol)) continue;
    const Eigen::VectorXcd m = p.assemble(e.x);
    Candidate c;
    c.q = quaternion_from_monomials(m, p.degree);
    if (!c.q.allFinite()) continue;
    c.lambda = e.lambda().real();
    c.residual = root_residual(C, c.q, c.lambda);
    if (!(c.residual <= opts.residual_tol)) continue;
    c.cost = form.cost(r_of_q(c.q));
    out.push_back(c);
  }
  if (out.empty())
    throw SolverError(ErrorCode::kNoRealSolutions, Stage::kExtraction, "no real candidate passed the root checks");
  return out;
}

namespace detail {

// Residual of {e(q, lambda) = 0, q^T q = 1}.
inline Eigen::Matrix<double, 5, 1> newton_residual(const CoeffMatrixC& C, const Vec4& q, double lambda) {
  Eigen::Matrix<double, 5, 1> r;
  r.head<4>() = C.eval_e(q, lambda);
  r[4] = q.squaredNorm() - 1.0;
  return r;
}

}  // namespace detail

// Newton refinement of (q, lambda); steps that do not reduce the residual
// are rejected and the iteration stops.
inline Candidate polish(const Candidate& c, const CoeffMatrixC& C, const CanonicalForm* form = nullptr,
                        int max_steps = 5) {
  std::array<std::array<HomoPoly, 4>, 4> dg;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) dg[i][j] = poly_diff(C.ghat(i), j);

  Vec4 q = c.q;
  double lambda = c.lambda;
  double res = detail::newton_residual(C, q, lambda).norm();
  for (int step = 0; step < max_steps && res > 0.0; ++step) {
    Eigen::Matrix<double, 5, 5> J = Eigen::Matrix<double, 5, 5>::Zero();
    const Eigen::VectorXd m2 = monomial_vector(2, q);
    const double h = q.squaredNorm();
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        J(i, j) = dg[i][j].coeffs.dot(m2) - lambda * (2.0 * q[i] * q[j] + (i == j ? h : 0.0));
      }
      J(i, 4) = -h * q[i];
      J(4, i) = 2.0 * q[i];
    }
    const Eigen::Matrix<double, 5, 1> r = detail::newton_residual(C, q, lambda);
    const Eigen::Matrix<double, 5, 1> dx = J.fullPivLu().solve(-r);
    if (!dx.allFinite()) break;
    Vec4 q_new = q + dx.head<4>();
    const double n = q_new.norm();
    if (!(n > 0.0)) break;
    q_new /= n;
    const double lambda_new = lambda + dx[4];
    const double res_new = detail::newton_residual(C, q_new, lambda_new).norm();
    if (!(res_new < res)) break;
    q = q_new;
    lambda = lambda_new;
    res = res_new;
  }
  Candidate out = c;
  out.q = canonical_sign(q);
  out.lambda = lambda;
  out.residual = root_residual(C, out.q, lambda);
  if (form != nullptr) out.cost = form->cost(r_of_q(out.q));
  return out;
}

struct StageTimings {
  double reduction_us = 0.0;
  double polysys_us = 0.0;
  double sylvester_us = 0.0;
  double elimination_us = 0.0;
  double eigensolve_us = 0.0;
  double extraction_us = 0.0;
  double selection_us = 0.0;

  // Time of the solving step alone: coefficient matrix through extraction.
  double step2_us() const { return polysys_us + sylvester_us + elimination_us + eigensolve_us + extraction_us; }
};

struct PoseSolution {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();
  Vec4 q = Vec4(1, 0, 0, 0);
  double cost = 0.0;
  double lambda = 0.0;
  std::vector<Candidate> candidates;
  Method method = Method::kDeg7;
  StageTimings timings;
};

inline PoseSolution select_best(const std::vector<Candidate>& cands, const CanonicalForm& form) {
  if (cands.empty())
    throw SolverError(ErrorCode::kNoRealSolutions, Stage::kSelection, "no candidates to select from");
  const auto best = std::min_element(cands.begin(), cands.end(),
                                     [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
  PoseSolution s;
  s.q = best->q.normalized();
  s.R = rotation_from_quaternion(s.q);
  s.t = form.translation(vec_rows(s.R));
  s.cost = best->cost;
  s.lambda = best->lambda;
  s.candidates = cands;
  return s;
}

}  // namespace sylvpose
