// Copyright 2026 The sylvpose Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include "sylvpose/polysys.hpp"
#include "sylvpose/reduction.hpp"

#include <gtest/gtest.h>

#include <random>

namespace sylvpose {
namespace {

using testing::q0;

TEST(Reduction, CanonicalFormMatchesExactValues) {
  const CanonicalForm f = build_canonical(testing::small_3d3d());
  EXPECT_EQ(f.kind, ProblemKind::kThreeDThreeD);
  EXPECT_NEAR(f.c_r, 8.5821018062397372742, 1e-12);
  EXPECT_NEAR(f.A_r(0, 0), 5.3333333333333333333, 1e-12);
  EXPECT_NEAR(f.A_r(2, 7), 0.0, 1e-12);
  EXPECT_NEAR(f.b_r[4], 2.5172413793103448276, 1e-12);
  const Vec9 r = r_of_q(q0());
  EXPECT_NEAR(f.cost(r), 25.764635796387520525, 1e-11);
  const Vec3 t = f.translation(r);
  EXPECT_NEAR(t[0], -1.4666666666666666667, 1e-12);
  EXPECT_NEAR(t[1], 0.65517241379310344828, 1e-12);
  EXPECT_NEAR(t[2], 0.25428571428571428571, 1e-12);
}

TEST(Reduction, PnPFormMatchesExactValues) {
  const CanonicalForm f = build_canonical(testing::small_pnp());
  EXPECT_EQ(f.kind, ProblemKind::kPnP);
  EXPECT_NEAR(f.A_r(0, 0), 2.7632931844888366627, 1e-12);
  EXPECT_NEAR(f.A_r(8, 8), 0.065130912162162162162, 1e-12);
  EXPECT_NEAR(f.A_r(1, 6), -0.33425381903642773208, 1e-12);
  EXPECT_EQ(f.b_r, Vec9::Zero());
  EXPECT_EQ(f.c_r, 0.0);
  EXPECT_NEAR(f.cost(r_of_q(q0())), 6.9799083692714453584, 1e-12);
}

// The canonical cost equals the direct objective at the minimizing t.
TEST(Reduction, CostMatchesDirectObjective) {
  for (const auto& corrs : {testing::small_3d3d(), testing::small_pnp()}) {
    const CanonicalForm f = build_canonical(corrs);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      const Vec4 q = Vec4(n(rng), n(rng), n(rng), n(rng)).normalized();
      const Mat3 R = rotation_from_quaternion(q);
      const Vec9 r = vec_rows(R);
      const Vec3 t = f.translation(r);
      const double direct = direct_objective(corrs, R, t);
      EXPECT_NEAR(f.cost(r), direct, 1e-10 * (1.0 + direct));
      // t is a minimizer: perturbing it cannot lower the objective.
      for (int a = 0; a < 3; ++a) {
        Vec3 dt = Vec3::Zero();
        dt[a] = 1e-3;
        EXPECT_GE(direct_objective(corrs, R, t + dt), direct - 1e-12);
        EXPECT_GE(direct_objective(corrs, R, t - dt), direct - 1e-12);
      }
    }
  }
}

TEST(Reduction, CanonicalFormIsSymmetricPSD) {
  const CanonicalForm f = build_canonical(testing::small_3d3d());
  EXPECT_LE((f.A_r - f.A_r.transpose()).norm(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Mat9> es(f.A_r);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(Reduction, WeightMatrices) {
  const Vec3 d(0, 0, 1);
  const Mat3 Wl = weight_matrix(PointLine{{0, 0, 0}, {0, 0, 0}, d, 2.0});
  EXPECT_LE((Wl - 4.0 * Vec3(1, 1, 0).asDiagonal().toDenseMatrix()).norm(), 1e-15);
  const Mat3 Wp = weight_matrix(PointPlane{{0, 0, 0}, {0, 0, 0}, d, 3.0});
  EXPECT_LE((Wp - 9.0 * d * d.transpose()).norm(), 1e-15);
  EXPECT_EQ(weight_matrix(PointPoint{{0, 0, 0}, {0, 0, 0}, 1.0}), Mat3::Identity());
}

TEST(Reduction, RejectsInvalidInput) {
  auto expect_code = [](const CorrespondenceSet& c, ErrorCode code) {
    try {
      build_canonical(c);
      FAIL() << "expected an error";
    } catch (const SolverError& e) {
      EXPECT_EQ(e.code(), code);
    }
  };
  expect_code({}, ErrorCode::kInvalidInput);
  expect_code({PointPoint{{1, 0, 0}, {1, 0, 0}, -1.0}}, ErrorCode::kInvalidInput);
  expect_code({PointLine{{1, 0, 0}, {1, 0, 0}, {1, 1, 0}, 1.0}}, ErrorCode::kInvalidInput);
  expect_code({PointPlane{{1, 0, 0}, {1, 0, 0}, {0, 0, 2}, 1.0}}, ErrorCode::kInvalidInput);
  expect_code({PointPoint{{1, 0, 0}, {1, 0, 0}, 1.0}, Point2D{{1, 0, 0}, {0, 0, 1}, 1.0}}, ErrorCode::kInvalidInput);
  CorrespondenceSet bad_pnp = testing::small_pnp();
  std::get<Point2D>(bad_pnp[0]).q_c.z() = 2.0;
  expect_code(bad_pnp, ErrorCode::kInvalidInput);
  // Three image points are too few.
  const CorrespondenceSet pnp = testing::small_pnp();
  const CorrespondenceSet three(pnp.begin(), pnp.begin() + 3);
  expect_code(three, ErrorCode::kInvalidInput);
}

TEST(Reduction, PlanesOnlyLeaveTranslationUnobservable) {
  const Vec3 n(0, 0, 1);
  const CorrespondenceSet c = {PointPlane{{1, 0, 0}, {0, 0, 1}, n, 1.0}, PointPlane{{0, 1, 0}, {0, 0, 2}, n, 1.0},
                               PointPlane{{0, 0, 1}, {0, 0, 3}, n, 1.0}};
  try {
    build_canonical(c);
    FAIL() << "expected DegenerateConstraints";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateConstraints);
    EXPECT_EQ(e.stage(), Stage::kReduction);
  }
}

TEST(Reduction, RotationFromQuaternion) {
  const Mat3 Rz = rotation_from_quaternion(Vec4(std::cos(M_PI / 4), 0, 0, std::sin(M_PI / 4)));
  Mat3 expect;
  expect << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_LE((Rz - expect).norm(), 1e-15);
  const Mat3 R = rotation_from_quaternion(q0());
  EXPECT_LE((R.transpose() * R - Mat3::Identity()).norm(), 1e-14);
  EXPECT_NEAR(R.determinant(), 1.0, 1e-14);
  EXPECT_LE((vec_rows(R) - r_of_q(q0())).norm(), 1e-15);
}

}  // namespace
}  // namespace sylvpose
