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

// Algebraic property checks on random instances: rank law of F_d, full rank
// of the augmented E, root count of the pencil, lambda-linearity of the
// Sylvester forms and their vanishing at solver roots.

#pragma once

#include "sylvpose/eigensolver.hpp"
#include "sylvpose/elimination.hpp"
#include "sylvpose/sim.hpp"
#include "sylvpose/solver.hpp"
#include "sylvpose/sylvester.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace sylvpose {

// Normalized coefficient matrix of a noisy mixed scene.
inline CoeffMatrixC random_instance(std::uint64_t seed, int N = 100, double sigma = 0.2) {
  const Scene s = add_noise(gen_scene_mixed(N, seed), sigma);
  const CoeffMatrixC C = build_C(build_canonical(s.correspondences));
  return C.scaled(1.0 / C.norm());
}

inline int corank_F(const CoeffMatrixC& C, int d) { return numerical_corank(build_F(C, d)); }

enum class Fault { kNone, kZeroSylvesterRow };

// Rank of E'(lambda) for the given method; the fault zeroes the first
// Sylvester row before the rank is taken.
inline int augmented_rank(const CoeffMatrixC& C, Method method, double lambda, Fault fault = Fault::kNone) {
  ElimSystem sys = build_elim_system(C, method);
  if (fault == Fault::kZeroSylvesterRow && sys.sylvester_row_count > 0) {
    const Eigen::Index r = sys.E0.rows() - sys.sylvester_row_count;
    sys.E0.row(r).setZero();
    sys.E1.row(r).setZero();
  }
  return numerical_rank(sys.E_at(lambda));
}

struct PencilCounts {
  int total = 0;
  int finite = 0;
};

inline PencilCounts pencil_counts(const CoeffMatrixC& C, Method method, double beta_tol = 1e-10) {
  const std::vector<EigenPair> eigs = solve_pencil(build_pencil(build_elim_system(C, method)));
  PencilCounts c;
  c.total = static_cast<int>(eigs.size());
  for (const EigenPair& e : eigs) c.finite += is_finite_pair(e, beta_tol) ? 1 : 0;
  return c;
}

inline constexpr std::array<MultiIndex, 3> kSylvesterIndices = {{{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}}};

// Largest lambda-collapse ratio over the three Sylvester forms in use.
inline double max_collapse_ratio(const CoeffMatrixC& C) {
  double worst = 0.0;
  for (const MultiIndex& a : kSylvesterIndices) worst = std::max(worst, lambda_collapse_ratio(sylvester_determinant(C, a)));
  return worst;
}

// Largest |S(q, lambda)| / coefficient scale over S0, Sw..Sz at the accepted
// roots of the degree-9 solver. Returns -1 if no root was accepted.
inline double sylvester_residual_at_roots(const CoeffMatrixC& C) {
  const PencilSystem p = build_pencil(build_elim_system(C, Method::kDeg9));
  const std::vector<EigenPair> eigs = solve_pencil(p);
  CanonicalForm dummy;
  std::vector<Candidate> cands;
  try {
    cands = extract_candidates(eigs, p, C, dummy);
  } catch (const SolverError&) {
    return -1.0;
  }
  std::vector<SylvesterRow> rows{build_S0(C)};
  for (const SylvesterRow& r : build_S7(C)) rows.push_back(r);
  double worst = 0.0;
  for (const Candidate& c : cands)
    for (const SylvesterRow& r : rows) worst = std::max(worst, std::abs(r.eval(c.q, c.lambda)) / r.coefficient_norm(c.lambda));
  return worst;
}

namespace detail {

// Sum of |coefficient| * |monomial| * |lambda|^k: the floating-point scale
// of a LambdaPoly evaluation.
inline double lambda_eval_scale(const LambdaPoly& p, const Vec4& q, double lambda) {
  const Eigen::VectorXd m = monomial_vector(p.degree_q, q).cwiseAbs();
  double s = 0.0, lk = 1.0;
  for (const HomoPoly& c : p.coeffs) {
    s += lk * c.coeffs.cwiseAbs().dot(m);
    lk *= std::abs(lambda);
  }
  return s;
}

}  // namespace detail

// |S(q, lambda; sC) - s^4 S(q, lambda / s; C)| relative to the evaluation
// scale, for random Gaussian C, q, lambda and s.
inline double scaling_shadow_error(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> us(0.1, 10.0);
  CoeffMatrixC C;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 20; ++k) C.c(i, k) = n(rng);
  const Vec4 q(n(rng), n(rng), n(rng), n(rng));
  const double lambda = n(rng);
  const double s = us(rng);
  const MultiIndex& a = kSylvesterIndices[std::uniform_int_distribution<int>(0, 2)(rng)];
  const LambdaPoly lhs = sylvester_determinant(C.scaled(s), a);
  const LambdaPoly rhs = sylvester_determinant(C, a);
  const double s4 = s * s * s * s;
  const double diff = std::abs(lhs.eval(q, lambda) - s4 * rhs.eval(q, lambda / s));
  const double scale = std::max(detail::lambda_eval_scale(lhs, q, lambda), s4 * detail::lambda_eval_scale(rhs, q, lambda / s));
  return scale > 0.0 ? diff / scale : diff;
}

struct PropertyResult {
  std::string name;
  int checked = 0;
  int failed = 0;
  std::optional<std::uint64_t> failing_seed;
  std::string detail;

  bool passed() const { return checked > 0 && failed == 0; }
};

struct VerifyOptions {
  int trials = 10;
  std::uint64_t seed = 1;
  Fault fault = Fault::kNone;
};

struct VerifyReport {
  std::vector<PropertyResult> properties;

  bool all_passed() const {
    for (const auto& p : properties)
      if (!p.passed()) return false;
    return !properties.empty();
  }
};

inline VerifyReport run_verify(const VerifyOptions& opts) {
  PropertyResult rank{"corank F_d = 40 for d = 7, 8, 9 and != 40 for d = 6"};
  PropertyResult full{"augmented E has full column rank (120, 165, 220)"};
  PropertyResult roots{"pencil has 40 eigenvalues, finite count equal across degrees"};
  PropertyResult collapse{"Sylvester determinants affine in lambda (ratio <= 1e-9)"};
  PropertyResult saturation{"Sylvester forms vanish at degree-9 roots (<= 1e-7)"};

  auto record = [](PropertyResult& p, bool ok, std::uint64_t seed, const std::string& detail) {
    ++p.checked;
    if (!ok) {
      ++p.failed;
      if (!p.failing_seed) {
        p.failing_seed = seed;
        p.detail = detail;
      }
    }
  };

  for (int t = 0; t < opts.trials; ++t) {
    const std::uint64_t seed = derive_seed(opts.seed, static_cast<std::uint64_t>(t));
    const CoeffMatrixC C = random_instance(seed);

    const int k6 = corank_F(C, 6), k7 = corank_F(C, 7), k8 = corank_F(C, 8), k9 = corank_F(C, 9);
    record(rank, k6 != 40 && k7 == 40 && k8 == 40 && k9 == 40, seed,
           "coranks d=6..9: " + std::to_string(k6) + " " + std::to_string(k7) + " " + std::to_string(k8) + " " +
               std::to_string(k9));

    Rng rng(derive_seed(seed, 1));
    std::normal_distribution<double> nl(0.0, 1.0);
    const double lambda = nl(rng);
    const int r7 = augmented_rank(C, Method::kDeg7, lambda, opts.fault);
    const int r8 = augmented_rank(C, Method::kDeg8, lambda, opts.fault);
    const int r9 = augmented_rank(C, Method::kDeg9, lambda, opts.fault);
    record(full, r7 == 120 && r8 == 165 && r9 == 220, seed,
           "ranks: " + std::to_string(r7) + " " + std::to_string(r8) + " " + std::to_string(r9));

    try {
      const PencilCounts c7 = pencil_counts(C, Method::kDeg7);
      const PencilCounts c8 = pencil_counts(C, Method::kDeg8);
      const PencilCounts c9 = pencil_counts(C, Method::kDeg9);
      record(roots,
             c7.total == 40 && c8.total == 40 && c9.total == 40 && c7.finite == c8.finite && c8.finite == c9.finite,
             seed,
             "finite eigenvalues: " + std::to_string(c7.finite) + " " + std::to_string(c8.finite) + " " +
                 std::to_string(c9.finite));
    } catch (const SolverError& e) {
      record(roots, false, seed, e.what());
    }

    const double ratio = max_collapse_ratio(C);
    record(collapse, ratio <= 1e-9, seed, "ratio " + std::to_string(ratio));

    const double sat = sylvester_residual_at_roots(C);
    record(saturation, sat >= 0.0 && sat <= 1e-7, seed, "residual " + std::to_string(sat));
  }
  return {{rank, full, roots, collapse, saturation}};
}

}  // namespace sylvpose
