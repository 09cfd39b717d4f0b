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

// Synthetic scenes, noise, error metrics and a local-search oracle.

#pragma once

#include "sylvpose/common.hpp"
#include "sylvpose/polysys.hpp"
#include "sylvpose/reduction.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace sylvpose {

using Rng = std::mt19937_64;

// Mixes a master seed and an index into an independent 64-bit seed
// (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Vec3 random_unit_vector(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    const Vec3 v(n(rng), n(rng), n(rng));
    const double len = v.norm();
    if (len > 1e-12) return v / len;
  }
}

// Haar-uniform rotation as a unit quaternion with w >= 0.
inline Vec4 random_quaternion(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    Vec4 q(n(rng), n(rng), n(rng), n(rng));
    const double len = q.norm();
    if (len > 1e-12) {
      q /= len;
      return q[0] < 0.0 ? Vec4(-q) : q;
    }
  }
}

struct SceneMeta {
  int n_m = 0;
  int n_l = 0;
  int n_p = 0;
  int n_q = 0;
  int N = 0;  // 3 n_m + 2 n_l + n_p for 3D scenes, n_q for PnP
  double sigma = 0.0;
};

struct Scene {
  CorrespondenceSet correspondences;
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();
  std::uint64_t seed = 0;
  SceneMeta meta;
  ProblemKind kind = ProblemKind::kThreeDThreeD;
  double focal_px = 0.0;  // PnP only
};

inline constexpr double kSceneRadius = 10.0;
inline constexpr double kTranslationRange = 10.0;
inline constexpr double kDefaultFocalPx = 800.0;

inline Scene gen_scene_3d3d(int n_m, int n_l, int n_p, std::uint64_t seed) {
  if (n_m < 0 || n_l < 0 || n_p < 0 || n_m + n_l + n_p < 1)
    throw std::invalid_argument("gen_scene_3d3d: need at least one correspondence");
  Rng rng(seed);
  std::uniform_real_distribution<double> ut(-kTranslationRange, kTranslationRange);
  std::uniform_real_distribution<double> slide(-kSceneRadius, kSceneRadius);
  Scene s;
  s.seed = seed;
  s.kind = ProblemKind::kThreeDThreeD;
  s.R = rotation_from_quaternion(random_quaternion(rng));
  s.t = Vec3(ut(rng), ut(rng), ut(rng));
  s.meta = {n_m, n_l, n_p, 0, 3 * n_m + 2 * n_l + n_p, 0.0};
  auto current = [&](const Vec3& m_r) -> Vec3 { return s.R * m_r + s.t; };
  for (int i = 0; i < n_m; ++i) {
    const Vec3 m_r = kSceneRadius * random_unit_vector(rng);
    s.correspondences.push_back(PointPoint{m_r, current(m_r), 1.0});
  }
  for (int i = 0; i < n_l; ++i) {
    const Vec3 m_r = kSceneRadius * random_unit_vector(rng);
    const Vec3 d = random_unit_vector(rng);
    // Anchor slides along the line so it is not the image of m_r.
    s.correspondences.push_back(PointLine{m_r, current(m_r) + slide(rng) * d, d, 1.0});
  }
  for (int i = 0; i < n_p; ++i) {
    const Vec3 m_r = kSceneRadius * random_unit_vector(rng);
    const Vec3 n = random_unit_vector(rng);
    Vec3 u = random_unit_vector(rng);
    u = (u - u.dot(n) * n).normalized();
    s.correspondences.push_back(PointPlane{m_r, current(m_r) + slide(rng) * u, n, 1.0});
  }
  return s;
}

// Random split of N = 3 n_m + 2 n_l + n_p. n_m is kept between 2 and N / 6:
// point-to-point terms alone make every first-order condition divisible by
// q^T q, so point-dominated scenes drive the system towards that degenerate
// case.
inline Scene gen_scene_mixed(int N, std::uint64_t seed) {
  if (N < 8) throw std::invalid_argument("gen_scene_mixed: N must be at least 8");
  Rng rng(derive_seed(seed, 0x6d69786564ULL));
  const int max_m = std::max(2, N / 6);
  const int n_m = std::uniform_int_distribution<int>(2, max_m)(rng);
  const int n_l = std::uniform_int_distribution<int>(0, (N - 3 * n_m) / 2)(rng);
  const int n_p = N - 3 * n_m - 2 * n_l;
  return gen_scene_3d3d(n_m, n_l, n_p, seed);
}

// Camera-frame points fill x, y in [-2, 2] m and depth in [4, 8] m; the world
// origin sits at their centroid.
inline Scene gen_scene_pnp(int n_q, std::uint64_t seed, double focal_px = kDefaultFocalPx) {
  if (n_q < 4) throw std::invalid_argument("gen_scene_pnp: need at least 4 points");
  if (!(focal_px > 0.0)) throw std::invalid_argument("gen_scene_pnp: focal length must be positive");
  Rng rng(seed);
  std::uniform_real_distribution<double> lateral(-2.0, 2.0), depth(4.0, 8.0);
  std::vector<Vec3> cam(n_q);
  Vec3 centroid = Vec3::Zero();
  for (auto& p : cam) {
    p = Vec3(lateral(rng), lateral(rng), depth(rng));
    centroid += p;
  }
  centroid /= n_q;
  Scene s;
  s.seed = seed;
  s.kind = ProblemKind::kPnP;
  s.focal_px = focal_px;
  s.R = rotation_from_quaternion(random_quaternion(rng));
  s.t = centroid;
  s.meta = {0, 0, 0, n_q, n_q, 0.0};
  for (const Vec3& p : cam) {
    const Vec3 m_r = s.R.transpose() * (p - s.t);
    s.correspondences.push_back(Point2D{m_r, Vec3(p.x() / p.z(), p.y() / p.z(), 1.0), 1.0});
  }
  return s;
}

// Isotropic Gaussian noise on current-frame anchors (meters) or on image
// points (pixels, divided by the focal length). Reference data is untouched.
inline Scene add_noise(const Scene& in, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("add_noise: sigma must be non-negative");
  Scene s = in;
  s.meta.sigma = sigma;
  if (sigma == 0.0) return s;
  Rng rng(derive_seed(seed, 0x6e6f697365ULL));
  std::normal_distribution<double> n(0.0, sigma);
  for (auto& corr : s.correspondences) {
    std::visit(
        [&](auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, PointPoint>) {
            c.m_c += Vec3(n(rng), n(rng), n(rng));
          } else if constexpr (std::is_same_v<T, Point2D>) {
            c.q_c.x() += n(rng) / s.focal_px;
            c.q_c.y() += n(rng) / s.focal_px;
          } else {
            c.m += Vec3(n(rng), n(rng), n(rng));
          }
        },
        corr);
  }
  return s;
}

inline Scene add_noise(const Scene& in, double sigma) { return add_noise(in, sigma, in.seed); }

// Angle of R_hat R^T in degrees, from its quaternion.
inline double rotation_error(const Mat3& R_hat, const Mat3& R) {
  const Eigen::Quaterniond dq(Mat3(R_hat * R.transpose()));
  const double angle = 2.0 * std::atan2(dq.vec().norm(), std::abs(dq.w()));
  return angle * 180.0 / M_PI;
}

inline double translation_error(const Vec3& t_hat, const Vec3& t) { return (t_hat - t).norm(); }

namespace detail {

// cost(r) = ||L r + u||^2 + const, with A = L^T L.
struct LeastSquaresForm {
  Eigen::Matrix<double, Eigen::Dynamic, 9> L;
  Eigen::VectorXd u;
};

inline LeastSquaresForm factor_form(const CanonicalForm& form) {
  Eigen::SelfAdjointEigenSolver<Mat9> es(form.A_r);
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  std::vector<int> keep;
  for (int k = 0; k < 9; ++k)
    if (es.eigenvalues()[k] > 1e-14 * top) keep.push_back(k);
  LeastSquaresForm f;
  f.L.resize(static_cast<Eigen::Index>(keep.size()), 9);
  f.u.resize(static_cast<Eigen::Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    const double s = std::sqrt(es.eigenvalues()[keep[i]]);
    const Vec9 v = es.eigenvectors().col(keep[i]);
    f.L.row(static_cast<Eigen::Index>(i)) = s * v.transpose();
    f.u[static_cast<Eigen::Index>(i)] = v.dot(form.b_r) / s;
  }
  return f;
}

// Orthonormal basis of the tangent space q-perp.
inline Eigen::Matrix<double, 4, 3> tangent_basis(const Vec4& q) {
  Eigen::HouseholderQR<Vec4> qr(q);
  const Eigen::Matrix4d Q = qr.householderQ();
  return Q.rightCols<3>();
}

}  // namespace detail

struct LocalOptResult {
  Vec4 q = Vec4(1, 0, 0, 0);
  double cost = 0.0;
};

// Levenberg-Marquardt steps on the unit sphere from a single start.
inline LocalOptResult local_opt_from(const CanonicalForm& form, const Vec4& q0, int max_iters = 200) {
  const detail::LeastSquaresForm ls = detail::factor_form(form);
  Vec4 q = q0.normalized();
  double cost = form.cost(r_of_q(q));
  double mu = 1e-6 * std::max(1.0, form.A_r.norm());
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::Matrix<double, 4, 3> B = detail::tangent_basis(q);
    const Eigen::VectorXd rho = ls.L * r_of_q(q) + ls.u;
    const Eigen::MatrixXd J = ls.L * dr_dq(q) * B;
    const Eigen::Matrix3d H = J.transpose() * J;
    const Eigen::Vector3d g = J.transpose() * rho;
    if (g.norm() <= 1e-15 * std::max(1.0, std::abs(cost))) break;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      const Eigen::Vector3d dx = (H + mu * Eigen::Matrix3d::Identity()).ldlt().solve(-g);
      const Vec4 qn = (q + B * dx).normalized();
      const double cn = form.cost(r_of_q(qn));
      if (cn < cost) {
        const double gain = cost - cn;
        q = qn;
        cost = cn;
        mu = std::max(mu / 3.0, 1e-300);
        improved = true;
        if (gain <= 1e-16 * std::max(1.0, std::abs(cost))) it = max_iters;
        break;
      }
      mu *= 4.0;
    }
    if (!improved) break;
  }
  return {q[0] < 0 ? Vec4(-q) : q, cost};
}

// Best local minimum over uniformly random starts.
inline LocalOptResult oracle_local_opt(const CanonicalForm& form, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("oracle_local_opt: restarts must be positive");
  Rng rng(seed);
  LocalOptResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int k = 0; k < restarts; ++k) {
    const LocalOptResult r = local_opt_from(form, random_quaternion(rng));
    if (r.cost < best.cost) best = r;
  }
  return best;
}

}  // namespace sylvpose
