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

// Weighted correspondences and their reduction to the canonical quadratic
// form  cost(r) = r^T A r + 2 b^T r + c  over the row-stacked rotation r,
// with the translation eliminated in closed form.

#pragma once

#include "sylvpose/common.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <variant>
#include <vector>

namespace sylvpose {

// Reference point m_r maps onto current point m_c.
struct PointPoint {
  Vec3 m_r;
  Vec3 m_c;
  double weight = 1.0;
};

// Reference point m_r maps onto the line through m with unit direction d.
struct PointLine {
  Vec3 m_r;
  Vec3 m;
  Vec3 d;
  double weight = 1.0;
};

// Reference point m_r maps onto the plane through m with unit normal n.
struct PointPlane {
  Vec3 m_r;
  Vec3 m;
  Vec3 n;
  double weight = 1.0;
};

// Reference point m_r projects to the normalized image point q_c = (u, v, 1).
struct Point2D {
  Vec3 m_r;
  Vec3 q_c;
  double weight = 1.0;
};

using Correspondence = std::variant<PointPoint, PointLine, PointPlane, Point2D>;
using CorrespondenceSet = std::vector<Correspondence>;

enum class ProblemKind { kThreeDThreeD, kPnP };

inline bool is_pnp(const Correspondence& c) { return std::holds_alternative<Point2D>(c); }

inline constexpr double kUnitTolerance = 1e-9;
inline constexpr double kConditionLimit = 1e12;

// Throws InvalidInput if the correspondence violates its invariants.
inline void validate(const Correspondence& corr) {
  auto fail = [](const std::string& what) { throw SolverError(ErrorCode::kInvalidInput, Stage::kInput, what); };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) fail("weights must be finite and non-negative");
        if (!c.m_r.allFinite()) fail("non-finite reference point");
        if constexpr (std::is_same_v<T, PointLine>) {
          if (std::abs(c.d.norm() - 1.0) > kUnitTolerance) fail("line direction must be a unit vector");
        } else if constexpr (std::is_same_v<T, PointPlane>) {
          if (std::abs(c.n.norm() - 1.0) > kUnitTolerance) fail("plane normal must be a unit vector");
        } else if constexpr (std::is_same_v<T, Point2D>) {
          if (c.q_c.z() != 1.0) fail("image point must have third component exactly 1");
        }
      },
      corr);
}

// Weight matrix W of the squared residual (M r + t - m)^T W (M r + t - m).
inline Mat3 weight_matrix(const Correspondence& corr) {
  return std::visit(
      [](const auto& c) -> Mat3 {
        using T = std::decay_t<decltype(c)>;
        const double w2 = c.weight * c.weight;
        if constexpr (std::is_same_v<T, PointLine>) {
          const Mat3 dx = skew(c.d);
          return -w2 * dx * dx;
        } else if constexpr (std::is_same_v<T, PointPlane>) {
          return w2 * c.n * c.n.transpose();
        } else {
          return w2 * Mat3::Identity();
        }
      },
      corr);
}

// The 3x9 matrix M with M r = R m_r for r the row-stacked R.
inline Mat39 stack_matrix(const Vec3& m_r) {
  Mat39 M = Mat39::Zero();
  for (int k = 0; k < 3; ++k) M.block<1, 3>(k, 3 * k) = m_r.transpose();
  return M;
}

// Row-stacked 9-vector of a 3x3 matrix.
inline Vec9 vec_rows(const Mat3& R) {
  Vec9 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[3 * i + j] = R(i, j);
  return r;
}

inline Mat3 unvec_rows(const Vec9& r) {
  Mat3 R;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R(i, j) = r[3 * i + j];
  return R;
}

struct CanonicalForm {
  Mat9 A_r = Mat9::Zero();
  Vec9 b_r = Vec9::Zero();
  double c_r = 0.0;
  // Minimizing translation t*(r) = t_linear * r + t_const.
  Mat39 t_linear = Mat39::Zero();
  Vec3 t_const = Vec3::Zero();
  ProblemKind kind = ProblemKind::kThreeDThreeD;

  double cost(const Vec9& r) const { return r.dot(A_r * r) + 2.0 * b_r.dot(r) + c_r; }
  Vec3 translation(const Vec9& r) const { return t_linear * r + t_const; }
};

namespace detail {

// Solves S X = B for symmetric positive semidefinite S, rejecting
// ill-conditioned S.
template <typename Rhs>
Rhs solve_normal_matrix(const Mat3& S, const Rhs& B) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(S);
  const double hi = es.eigenvalues().maxCoeff();
  const double lo = es.eigenvalues().minCoeff();
  if (!(hi > 0.0) || lo <= hi / kConditionLimit)
    throw SolverError(ErrorCode::kDegenerateConstraints, Stage::kReduction,
                      "translation is not observable from these constraints");
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose() * B;
}

inline void symmetrize(Mat9& A) { A = 0.5 * (A + A.transpose()).eval(); }

}  // namespace detail

inline CanonicalForm build_canonical_3d3d(const CorrespondenceSet& corrs) {
  if (corrs.empty()) throw SolverError(ErrorCode::kInvalidInput, Stage::kInput, "no correspondences");
  std::vector<Mat3> W;
  std::vector<Mat39> M;
  std::vector<Vec3> m;
  W.reserve(corrs.size());
  M.reserve(corrs.size());
  m.reserve(corrs.size());
  for (const auto& corr : corrs) {
    validate(corr);
    if (is_pnp(corr))
      throw SolverError(ErrorCode::kInvalidInput, Stage::kInput, "3D-2D correspondence in a 3D-3D problem");
    W.push_back(weight_matrix(corr));
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          M.push_back(stack_matrix(c.m_r));
          if constexpr (std::is_same_v<T, PointPoint>) {
            m.push_back(c.m_c);
          } else if constexpr (std::is_same_v<T, PointLine> || std::is_same_v<T, PointPlane>) {
            m.push_back(c.m);
          }
        },
        corr);
  }

  Mat3 S = Mat3::Zero();
  Mat39 SM = Mat39::Zero();
  Vec3 Sm = Vec3::Zero();
  for (size_t i = 0; i < W.size(); ++i) {
    S += W[i];
    SM += W[i] * M[i];
    Sm += W[i] * m[i];
  }

  CanonicalForm form;
  form.kind = ProblemKind::kThreeDThreeD;
  form.t_linear = -detail::solve_normal_matrix(S, SM);
  form.t_const = detail::solve_normal_matrix(S, Sm);
  for (size_t i = 0; i < W.size(); ++i) {
    const Mat39 G = M[i] + form.t_linear;
    const Vec3 h = form.t_const - m[i];
    form.A_r += G.transpose() * W[i] * G;
    form.b_r += G.transpose() * W[i] * h;
    form.c_r += h.dot(W[i] * h);
  }
  detail::symmetrize(form.A_r);
  return form;
}

inline CanonicalForm build_canonical_pnp(const CorrespondenceSet& corrs) {
  if (corrs.size() < 4)
    throw SolverError(ErrorCode::kInvalidInput, Stage::kInput, "PnP requires at least 4 correspondences");
  std::vector<Mat39> P;
  std::vector<Mat3> Q;
  std::vector<double> w2;
  for (const auto& corr : corrs) {
    validate(corr);
    const auto* c = std::get_if<Point2D>(&corr);
    if (c == nullptr) throw SolverError(ErrorCode::kInvalidInput, Stage::kInput, "3D-3D correspondence in a PnP problem");
    // Z_c = r_3^T m_r + t_3 gives residual (M - [0 0 q m_r^T]) r + (I - [0 0 q]) t.
    Mat39 Pi = stack_matrix(c->m_r);
    Pi.block<3, 3>(0, 6) -= c->q_c * c->m_r.transpose();
    Mat3 Qi = Mat3::Identity();
    Qi.col(2) -= c->q_c;
    P.push_back(Pi);
    Q.push_back(Qi);
    w2.push_back(c->weight * c->weight);
  }

  Mat3 S = Mat3::Zero();
  Mat39 SP = Mat39::Zero();
  for (size_t i = 0; i < P.size(); ++i) {
    S += w2[i] * Q[i].transpose() * Q[i];
    SP += w2[i] * Q[i].transpose() * P[i];
  }

  CanonicalForm form;
  form.kind = ProblemKind::kPnP;
  form.t_linear = -detail::solve_normal_matrix(S, SP);
  for (size_t i = 0; i < P.size(); ++i) {
    const Mat39 G = P[i] + Q[i] * form.t_linear;
    form.A_r += w2[i] * G.transpose() * G;
  }
  detail::symmetrize(form.A_r);
  return form;
}

// Dispatches on the correspondence kind; mixed sets are rejected.
inline CanonicalForm build_canonical(const CorrespondenceSet& corrs) {
  if (corrs.empty()) throw SolverError(ErrorCode::kInvalidInput, Stage::kInput, "no correspondences");
  const bool pnp = is_pnp(corrs.front());
  for (const auto& c : corrs)
    if (is_pnp(c) != pnp)
      throw SolverError(ErrorCode::kInvalidInput, Stage::kInput, "mixed 3D-3D and 3D-2D correspondences");
  return pnp ? build_canonical_pnp(corrs) : build_canonical_3d3d(corrs);
}

// Rotation matrix of a quaternion (w, x, y, z); q is normalized first.
inline Mat3 rotation_from_quaternion(const Vec4& q_in) {
  const Vec4 q = q_in.normalized();
  const Vec3 v = q.tail<3>();
  const Mat3 vx = skew(v);
  return Mat3::Identity() + 2.0 * q[0] * vx + 2.0 * vx * vx;
}

inline Vec3 recover_translation(const CanonicalForm& form, const Vec4& q) {
  return form.translation(vec_rows(rotation_from_quaternion(q)));
}

// Direct evaluation of the weighted least-squares objective at (R, t).
inline double direct_objective(const CorrespondenceSet& corrs, const Mat3& R, const Vec3& t) {
  double s = 0.0;
  for (const auto& corr : corrs) {
    const Mat3 W = weight_matrix(corr);
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          Vec3 e;
          if constexpr (std::is_same_v<T, PointPoint>) {
            e = R * c.m_r + t - c.m_c;
          } else if constexpr (std::is_same_v<T, Point2D>) {
            const Vec3 pc = R * c.m_r + t;
            e = pc - pc.z() * c.q_c;
          } else {
            e = R * c.m_r + t - c.m;
          }
          s += e.dot(W * e);
        },
        corr);
  }
  return s;
}

}  // namespace sylvpose
