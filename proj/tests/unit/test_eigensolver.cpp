// Copyright 2026 The sylvpose Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sylvpose/eigensolver.hpp"
#include "sylvpose/sim.hpp"
#include "sylvpose/verify.hpp"

#include <gtest/gtest.h>

#include <random>

namespace sylvpose {
namespace {

TEST(Eigensolver, DiagonalPencil) {
  Eigen::MatrixXd Q0 = Eigen::MatrixXd::Zero(40, 40);
  for (int k = 0; k < 40; ++k) Q0(k, k) = k + 1;
  const auto eigs = solve_pencil(Q0, Eigen::MatrixXd::Identity(40, 40));
  ASSERT_EQ(eigs.size(), 40u);
  std::vector<bool> seen(40, false);
  for (const EigenPair& e : eigs) {
    const double l = e.lambda().real();
    const int k = static_cast<int>(std::lround(l)) - 1;
    ASSERT_GE(k, 0);
    ASSERT_LT(k, 40);
    EXPECT_NEAR(l, k + 1, 1e-12);
    seen[k] = true;
    // Eigenvector is a multiple of e_k.
    EXPECT_NEAR(std::abs(e.x[k]) / e.x.norm(), 1.0, 1e-12);
  }
  EXPECT_EQ(std::count(seen.begin(), seen.end(), true), 40);
}

TEST(Eigensolver, ShapeMismatchThrows) {
  try {
    solve_pencil(Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(4, 4));
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Eigensolver, EigenResidualsAreSmall) {
  const CoeffMatrixC C = random_instance(31);
  for (Method m : {Method::kDeg7, Method::kDeg8, Method::kDeg9}) {
    const PencilSystem p = build_pencil(build_elim_system(C, m));
    const auto eigs = solve_pencil(p);
    EXPECT_EQ(eigs.size(), 40u);
    const double n0 = p.Q0.norm(), n1 = p.Q1.norm();
    for (const EigenPair& e : eigs) {
      if (!is_finite_pair(e, 1e-10)) continue;
      const std::complex<double> l = e.lambda();
      const Eigen::VectorXcd r = p.Q0.cast<std::complex<double>>() * e.x - l * (p.Q1.cast<std::complex<double>>() * e.x);
      EXPECT_LE(r.norm(), 1e-8 * (n0 + std::abs(l) * n1) * e.x.norm());
    }
  }
}

// Reassembled monomial vectors satisfy E'(lambda) m = 0 and match the
// monomials of the recovered q.
TEST(Eigensolver, MonomialVectorsAreConsistent) {
  const CoeffMatrixC C = random_instance(32);
  for (Method m : {Method::kDeg7, Method::kDeg8, Method::kDeg9}) {
    const ElimSystem sys = build_elim_system(C, m);
    const PencilSystem p = build_pencil(sys);
    int accepted = 0;
    for (const EigenPair& e : solve_pencil(p)) {
      if (!is_finite_pair(e, 1e-10) || !is_real_pair(e, 1e-6)) continue;
      const Eigen::VectorXcd v = p.assemble(e.x);
      const double l = e.lambda().real();
      const Eigen::MatrixXd El = sys.E_at(l);
      EXPECT_LE((El.cast<std::complex<double>>() * v).norm(), 1e-7 * El.norm() * v.norm());
      const Vec4 q = quaternion_from_monomials(v, p.degree);
      if (root_residual(C, q, l) > 1e-6) continue;
      ++accepted;
      const Eigen::VectorXd mq = monomial_vector(p.degree, q);
      const int piv = [&] {
        Eigen::Index i;
        mq.cwiseAbs().maxCoeff(&i);
        return static_cast<int>(i);
      }();
      const std::complex<double> scale = v[piv] / mq[piv];
      EXPECT_LE((v - scale * mq.cast<std::complex<double>>()).norm(), 1e-6 * v.norm());
    }
    EXPECT_GT(accepted, 0) << to_string(m);
  }
}

TEST(Eigensolver, IdentityPoseIsRecovered) {
  Scene s = gen_scene_3d3d(4, 10, 20, 33);
  // Rebuild the current frame with R = I, t = 0.
  for (auto& c : s.correspondences) {
    std::visit(
        [](auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, PointPoint>) v.m_c = v.m_r;
          if constexpr (std::is_same_v<T, PointLine>) v.m = v.m_r + 2.0 * v.d;
          if constexpr (std::is_same_v<T, PointPlane>) v.m = v.m_r + v.n.unitOrthogonal();
        },
        c);
  }
  const CanonicalForm form = build_canonical(s.correspondences);
  CoeffMatrixC C = build_C(form);
  C = C.scaled(1.0 / C.norm());
  const PencilSystem p = build_pencil(build_elim_system(C, Method::kDeg9));
  const auto cands = extract_candidates(solve_pencil(p), p, C, form);
  bool found = false;
  for (const Candidate& c : cands) {
    EXPECT_NEAR(c.q.norm(), 1.0, 1e-12);
    EXPECT_GE(c.q[0], 0.0);
    EXPECT_LE(c.residual, 1e-6);
    if ((c.q - Vec4(1, 0, 0, 0)).norm() < 1e-8) {
      found = true;
      EXPECT_LE(c.cost, 1e-12 * (1.0 + form.A_r.norm()));
    }
  }
  EXPECT_TRUE(found);
}

TEST(Eigensolver, ExtractionPivotsOnLargestPower) {
  // q = (0, 0, 0.6, 0.8): w and x vanish, so dividing by w^d would fail.
  const Vec4 q(0.0, 0.0, 0.6, 0.8);
  const Eigen::VectorXcd m = monomial_vector(7, q).cast<std::complex<double>>() * std::complex<double>(2.0, -1.0);
  const Vec4 r = quaternion_from_monomials(m, 7);
  EXPECT_LE((r - q).norm(), 1e-14);
}

TEST(Eigensolver, CanonicalSign) {
  EXPECT_EQ(canonical_sign(Vec4(-0.5, 0.5, 0.5, 0.5)), Vec4(0.5, -0.5, -0.5, -0.5));
  EXPECT_EQ(canonical_sign(Vec4(0.0, -1.0, 0.0, 0.0)), Vec4(0.0, 1.0, 0.0, 0.0));
  // q and -q give the same rotation.
  const Vec4 q = Vec4(-0.3, 0.1, 0.9, -0.2).normalized();
  EXPECT_LE((rotation_from_quaternion(q) - rotation_from_quaternion(canonical_sign(q))).norm(), 1e-15);
}

TEST(Eigensolver, NoRealSolutionsWhenEverythingIsFiltered) {
  const CoeffMatrixC C = random_instance(34);
  const PencilSystem p = build_pencil(build_elim_system(C, Method::kDeg9));
  auto eigs = solve_pencil(p);
  for (EigenPair& e : eigs) e.beta = 0.0;
  try {
    extract_candidates(eigs, p, C, CanonicalForm{});
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoRealSolutions);
    EXPECT_EQ(e.stage(), Stage::kExtraction);
  }
}

TEST(Eigensolver, PolishFixedPointAndContraction) {
  const Scene s = add_noise(gen_scene_mixed(100, 35), 0.1);
  const CanonicalForm form = build_canonical(s.correspondences);
  CoeffMatrixC C = build_C(form);
  C = C.scaled(1.0 / C.norm());
  const PencilSystem p = build_pencil(build_elim_system(C, Method::kDeg9));
  const auto cands = extract_candidates(solve_pencil(p), p, C, form);
  std::mt19937_64 rng(36);
  std::normal_distribution<double> n(0.0, 1.0);
  for (const Candidate& c0 : cands) {
    const Candidate exact = polish(c0, C, &form);
    EXPECT_LE(exact.residual, c0.residual);
    // A converged root stays put.
    const Candidate again = polish(exact, C, &form);
    EXPECT_LE((again.q - exact.q).norm(), 1e-14);
    EXPECT_LE(again.residual, exact.residual);
    // A perturbed root comes back by at least four orders of magnitude.
    Candidate perturbed = exact;
    perturbed.q = (exact.q + 1e-4 * Vec4(n(rng), n(rng), n(rng), n(rng))).normalized();
    perturbed.lambda = exact.lambda * (1.0 + 1e-4 * n(rng));
    perturbed.residual = root_residual(C, perturbed.q, perturbed.lambda);
    const Candidate back = polish(perturbed, C, &form);
    EXPECT_LE(back.residual, 1e-4 * perturbed.residual);
  }
}

TEST(Eigensolver, SelectBest) {
  Candidate a, b;
  a.q = Vec4(1, 0, 0, 0);
  a.cost = 3.0;
  b.q = Vec4(0, 1, 0, 0);
  b.cost = 1.0;
  CanonicalForm f;
  const PoseSolution s = select_best({a, b}, f);
  EXPECT_EQ(s.q, b.q);
  EXPECT_EQ(s.cost, 1.0);
  EXPECT_EQ(s.candidates.size(), 2u);
  EXPECT_EQ(select_best({a}, f).q, a.q);
  try {
    select_best({}, f);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoRealSolutions);
  }
}

}  // namespace
}  // namespace sylvpose
