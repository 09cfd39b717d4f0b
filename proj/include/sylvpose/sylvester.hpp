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

// Sylvester forms of the cubics e_1..e_4.
//
// For a multi-index alpha with |alpha| < 3 each e_i is written against the
// column basis (w^(a0+1), x^(a1+1), y^(a2+1), z^(a3+1)); the determinant of
// the 4x4 matrix of cofactor polynomials is a form of degree 8 - |alpha| that
// vanishes on every solution of the system. The lambda terms (q^T q) q_i are
// split as q_i * q_j^(1 - a_j) against column j, so the lambda part of the
// matrix has rank one and the determinant is affine in lambda.

#pragma once

#include "sylvpose/common.hpp"
#include "sylvpose/poly.hpp"
#include "sylvpose/polysys.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sylvpose {

using MultiIndex = std::array<int, 4>;

enum class SylvesterLabel { kS0, kSw, kSx, kSy, kSz };

inline std::string_view to_string(SylvesterLabel l) {
  switch (l) {
    case SylvesterLabel::kS0: return "S0";
    case SylvesterLabel::kSw: return "Sw";
    case SylvesterLabel::kSx: return "Sx";
    case SylvesterLabel::kSy: return "Sy";
    case SylvesterLabel::kSz: return "Sz";
  }
  return "?";
}

// p_hi - lambda * p_lo, both of degree degree_q.
struct SylvesterRow {
  int degree_q = 0;
  HomoPoly p_hi;
  HomoPoly p_lo;
  SylvesterLabel label = SylvesterLabel::kS0;

  double eval(const Vec4& q, double lambda) const { return poly_eval(p_hi, q) - lambda * poly_eval(p_lo, q); }
  double coefficient_norm(double lambda = 0.0) const { return p_hi.norm() + std::abs(lambda) * p_lo.norm(); }
};

inline constexpr double kLambdaCollapseTolerance = 1e-10;

inline LambdaMatrix4 decompose(const CoeffMatrixC& C, const MultiIndex& alpha) {
  int total = 0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("decompose: negative multi-index");
    total += a;
  }
  if (total > 2) throw std::invalid_argument("decompose: |alpha| must be below 3");

  const auto& b3 = MonomialBasis::of(3);
  std::array<int, 4> col_degree{};
  for (int j = 0; j < 4; ++j) col_degree[j] = 2 - alpha[j];

  // First column (left to right) whose basis monomial divides e; writes the
  // cofactor exponent into rest.
  auto assign = [&](Exponent e, Exponent& rest) {
    for (int j = 0; j < 4; ++j) {
      if (e[j] >= alpha[j] + 1) {
        e[j] -= alpha[j] + 1;
        rest = e;
        return j;
      }
    }
    throw std::logic_error("decompose: monomial without divisor");
  };

  LambdaMatrix4 m;
  for (int i = 0; i < 4; ++i) {
    std::array<HomoPoly, 4> p, l;
    for (int j = 0; j < 4; ++j) {
      p[j] = HomoPoly(col_degree[j]);
      l[j] = HomoPoly(col_degree[j]);
    }
    for (int k = 0; k < b3.size(); ++k) {
      const double coeff = C.c(i, k);
      if (coeff == 0.0) continue;
      Exponent rest;
      const int j = assign(b3.exponent_of(k), rest);
      p[j].coeffs[MonomialBasis::of(col_degree[j]).index_of(rest)] += coeff;
    }
    // (q^T q) q_i = sum_j q_i q_j^2.
    for (int j = 0; j < 4; ++j) {
      Exponent e{0, 0, 0, 0};
      e[i] += 1;
      e[j] += 2;
      int col = j;
      Exponent rest = e;
      if (alpha[j] <= 1) {
        rest[j] -= alpha[j] + 1;
      } else {
        col = assign(e, rest);
      }
      l[col].coeffs[MonomialBasis::of(col_degree[col]).index_of(rest)] += 1.0;
    }
    for (int j = 0; j < 4; ++j) m[i][j] = LambdaPoly::linear(std::move(p[j]), std::move(l[j]));
  }
  return m;
}

// Ratio of the lambda^2..lambda^4 slices to the lambda^0, lambda^1 slices.
inline double lambda_collapse_ratio(const LambdaPoly& det) {
  double hi = 0.0, lo = 0.0;
  for (int k = 0; k <= det.lambda_degree_bound(); ++k) {
    const double n2 = det.coeffs[k].coeffs.squaredNorm();
    (k <= 1 ? lo : hi) += n2;
  }
  if (lo == 0.0) return hi == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(hi / lo);
}

// Full determinant, all lambda slices kept.
inline LambdaPoly sylvester_determinant(const CoeffMatrixC& C, const MultiIndex& alpha) {
  return lambda_det4(decompose(C, alpha));
}

namespace detail {

// Checks lambda-linearity and returns (p_hi, p_lo) of det = p_hi - lambda p_lo.
inline std::pair<HomoPoly, HomoPoly> collapse_to_linear(const LambdaPoly& det, double tol) {
  const double ratio = lambda_collapse_ratio(det);
  if (!(ratio <= tol))
    throw SolverError(ErrorCode::kDegreeCollapseFailure, Stage::kSylvester,
                      "Sylvester determinant is not affine in lambda (ratio " + std::to_string(ratio) + ")");
  HomoPoly p_lo = det.coeffs.size() > 1 ? det.coeffs[1] : HomoPoly(det.degree_q);
  p_lo *= -1.0;
  return {det.coeffs[0], std::move(p_lo)};
}

inline SylvesterRow times_variable(const HomoPoly& hi, const HomoPoly& lo, const HomoPoly& factor,
                                   SylvesterLabel label) {
  SylvesterRow row;
  row.p_hi = poly_mul(factor, hi);
  row.p_lo = poly_mul(factor, lo);
  row.degree_q = row.p_hi.degree;
  row.label = label;
  return row;
}

}  // namespace detail

// S0 = w x S_(1,1,0,0), degree 8.
inline SylvesterRow build_S0(const CoeffMatrixC& C, double tol = kLambdaCollapseTolerance) {
  const auto [hi, lo] = detail::collapse_to_linear(sylvester_determinant(C, {1, 1, 0, 0}), tol);
  const HomoPoly wx = HomoPoly::monomial({1, 1, 0, 0});
  return detail::times_variable(hi, lo, wx, SylvesterLabel::kS0);
}

// Sw = y S_(1,0,1,0), Sx = z S_(0,1,0,1), Sy = w S_(1,0,1,0), Sz = x S_(0,1,0,1); degree 7.
inline std::array<SylvesterRow, 4> build_S7(const CoeffMatrixC& C, double tol = kLambdaCollapseTolerance) {
  const auto [hi_a, lo_a] = detail::collapse_to_linear(sylvester_determinant(C, {1, 0, 1, 0}), tol);
  const auto [hi_b, lo_b] = detail::collapse_to_linear(sylvester_determinant(C, {0, 1, 0, 1}), tol);
  return {detail::times_variable(hi_a, lo_a, HomoPoly::variable(kY), SylvesterLabel::kSw),
          detail::times_variable(hi_b, lo_b, HomoPoly::variable(kZ), SylvesterLabel::kSx),
          detail::times_variable(hi_a, lo_a, HomoPoly::variable(kW), SylvesterLabel::kSy),
          detail::times_variable(hi_b, lo_b, HomoPoly::variable(kX), SylvesterLabel::kSz)};
}

}  // namespace sylvpose
