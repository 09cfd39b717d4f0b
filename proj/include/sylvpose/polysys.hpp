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

// First-order conditions of  min cost(r(q))  s.t.  q^T q = 1.
//
// With the homogenized rotation r(q) (quadratic forms in q) the stationarity
// conditions become four cubics
//
//   e_i(q, lambda) = ghat_i(q) - lambda (q^T q) q_i,   i = w, x, y, z,
//
// where ghat = grad(r^T A r) + (q^T q) grad(2 b^T r). CoeffMatrixC holds the
// 4x20 coefficients of ghat. Eliminating lambda gives the six quartics
// f_(u,v) = v ghat_u - u ghat_v.

#pragma once

#include "sylvpose/common.hpp"
#include "sylvpose/poly.hpp"
#include "sylvpose/reduction.hpp"

#include <Eigen/Core>

#include <array>
#include <utility>

namespace sylvpose {

inline constexpr int kW = 0, kX = 1, kY = 2, kZ = 3;

// Homogenized rotation r(q) = vec_rows((q^T q) I + 2 w [v]x + 2 [v]x^2),
// as nine quadratic forms.
inline const std::array<HomoPoly, 9>& rotation_polys() {
  static const std::array<HomoPoly, 9> polys = [] {
    auto m = [](int a, int b, int c, int d, double s) { return HomoPoly::monomial({a, b, c, d}, s); };
    std::array<HomoPoly, 9> r;
    r[0] = m(2, 0, 0, 0, 1) + m(0, 2, 0, 0, 1) + m(0, 0, 2, 0, -1) + m(0, 0, 0, 2, -1);
    r[1] = m(0, 1, 1, 0, 2) + m(1, 0, 0, 1, -2);
    r[2] = m(0, 1, 0, 1, 2) + m(1, 0, 1, 0, 2);
    r[3] = m(0, 1, 1, 0, 2) + m(1, 0, 0, 1, 2);
    r[4] = m(2, 0, 0, 0, 1) + m(0, 2, 0, 0, -1) + m(0, 0, 2, 0, 1) + m(0, 0, 0, 2, -1);
    r[5] = m(0, 0, 1, 1, 2) + m(1, 1, 0, 0, -2);
    r[6] = m(0, 1, 0, 1, 2) + m(1, 0, 1, 0, -2);
    r[7] = m(0, 0, 1, 1, 2) + m(1, 1, 0, 0, 2);
    r[8] = m(2, 0, 0, 0, 1) + m(0, 2, 0, 0, -1) + m(0, 0, 2, 0, -1) + m(0, 0, 0, 2, 1);
    return r;
  }();
  return polys;
}

inline Vec9 r_of_q(const Vec4& q) {
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Vec9 r;
  r << w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z;
  return r;
}

// Exact Jacobian of r_of_q; linear in q.
inline Mat94 dr_dq(const Vec4& q) {
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Mat94 J;
  J << 2 * w, 2 * x, -2 * y, -2 * z,
       -2 * z, 2 * y, 2 * x, -2 * w,
       2 * y, 2 * z, 2 * w, 2 * x,
       2 * z, 2 * y, 2 * x, 2 * w,
       2 * w, -2 * x, 2 * y, -2 * z,
       -2 * x, -2 * w, 2 * z, 2 * y,
       -2 * y, 2 * z, -2 * w, 2 * x,
       2 * x, 2 * w, 2 * z, 2 * y,
       2 * w, -2 * x, -2 * y, 2 * z;
  return J;
}

using CoeffMatrix = Eigen::Matrix<double, 4, 20>;

struct CoeffMatrixC {
  // Row i holds the coefficients of ghat_i over the degree-3 basis.
  CoeffMatrix c = CoeffMatrix::Zero();

  // Instance-independent coefficients of (q^T q) q_i over the degree-3 basis.
  static const CoeffMatrix& lambda_block() {
    static const CoeffMatrix block = [] {
      CoeffMatrix b;
      const HomoPoly h = HomoPoly::squared_norm();
      for (int i = 0; i < 4; ++i) b.row(i) = poly_mul(h, HomoPoly::variable(i)).coeffs.transpose();
      return b;
    }();
    return block;
  }

  HomoPoly ghat(int i) const { return HomoPoly(3, c.row(i).transpose()); }
  HomoPoly lambda_part(int i) const { return HomoPoly(3, lambda_block().row(i).transpose()); }

  // e_i as p0 - lambda * p1.
  LambdaPoly e(int i) const { return LambdaPoly::linear(ghat(i), lambda_part(i)); }

  Vec4 eval_ghat(const Vec4& q) const {
    const Eigen::VectorXd m3 = monomial_vector(3, q);
    return c * m3;
  }
  Vec4 eval_e(const Vec4& q, double lambda) const {
    return eval_ghat(q) - lambda * q.squaredNorm() * q;
  }

  double norm() const { return c.norm(); }

  CoeffMatrixC scaled(double s) const {
    CoeffMatrixC out;
    out.c = s * c;
    return out;
  }
};

inline CoeffMatrixC build_C(const CanonicalForm& form) {
  const auto& r = rotation_polys();
  // phi = r^T A r (quartic), psi = 2 b^T r (quadratic).
  HomoPoly phi(4);
  for (int i = 0; i < 9; ++i) {
    for (int j = i; j < 9; ++j) {
      const double a = (i == j) ? form.A_r(i, i) : form.A_r(i, j) + form.A_r(j, i);
      if (a != 0.0) poly_mul_add(r[i], r[j], a, phi);
    }
  }
  HomoPoly psi(2);
  for (int i = 0; i < 9; ++i) psi.coeffs += 2.0 * form.b_r[i] * r[i].coeffs;

  const HomoPoly h = HomoPoly::squared_norm();
  CoeffMatrixC C;
  for (int k = 0; k < 4; ++k) {
    HomoPoly g = poly_diff(phi, k);
    poly_mul_add(h, poly_diff(psi, k), 1.0, g);
    C.c.row(k) = g.coeffs.transpose();
  }
  return C;
}

// Ordered variable pairs of the six minors.
inline constexpr std::array<std::pair<int, int>, 6> kMinorPairs = {
    {{kW, kX}, {kW, kY}, {kW, kZ}, {kX, kY}, {kX, kZ}, {kY, kZ}}};

struct FSystem {
  std::array<HomoPoly, 6> f;

  Eigen::Matrix<double, 6, 1> eval(const Vec4& q) const {
    Eigen::Matrix<double, 6, 1> v;
    for (int j = 0; j < 6; ++j) v[j] = poly_eval(f[j], q);
    return v;
  }
};

inline FSystem build_F(const CoeffMatrixC& C) {
  FSystem fs;
  for (int j = 0; j < 6; ++j) {
    const auto [u, v] = kMinorPairs[j];
    HomoPoly f(4);
    poly_mul_add(HomoPoly::variable(v), C.ghat(u), 1.0, f);
    poly_mul_add(HomoPoly::variable(u), C.ghat(v), -1.0, f);
    fs.f[j] = std::move(f);
  }
  return fs;
}

}  // namespace sylvpose
