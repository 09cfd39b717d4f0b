// Copyright 2026 The sylvpose Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sylvpose/eigensolver.hpp"
#include "sylvpose/elimination.hpp"
#include "sylvpose/verify.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace sylvpose {
namespace {

CoeffMatrixC instance(std::uint64_t seed) { return random_instance(seed, 100, 0.2); }

TEST(Elimination, MatrixShapes) {
  const CoeffMatrixC C = instance(1);
  EXPECT_EQ(build_E(C, 9).first.rows(), 336);
  EXPECT_EQ(build_E(C, 9).first.cols(), 220);
  EXPECT_EQ(build_E(C, 8).first.rows(), 224);
  EXPECT_EQ(build_E(C, 8).first.cols(), 165);
  EXPECT_EQ(build_E(C, 7).first.rows(), 140);
  EXPECT_EQ(build_F(C, 9).rows(), 336);
  EXPECT_EQ(build_F(C, 8).rows(), 210);
  EXPECT_EQ(build_F(C, 7).rows(), 120);
  EXPECT_EQ(build_F(C, 7).cols(), 120);
  EXPECT_EQ(build_elim_system(C, Method::kDeg8).E0.rows(), 225);
  EXPECT_EQ(build_elim_system(C, Method::kDeg7).E0.rows(), 144);
  EXPECT_EQ(build_elim_system(C, Method::kDeg9).E0.rows(), 336);
}

TEST(Elimination, ZeroCoefficientsLeaveOnlyLambdaPattern) {
  const auto [E0, E1] = build_E(CoeffMatrixC{}, 7);
  EXPECT_EQ(E0.norm(), 0.0);
  // Each row of E1 is (q^T q) q_i m: four unit entries.
  for (Eigen::Index r = 0; r < E1.rows(); ++r) EXPECT_EQ((E1.row(r).array() != 0.0).count(), 4);
}

// Row i * n + j of E holds e_i times monomial j: check by evaluation.
TEST(Elimination, RowsAreShiftedCubics) {
  const CoeffMatrixC C = instance(2);
  const auto [E0, E1] = build_E(C, 8);
  const Vec4 q(0.3, -0.6, 0.9, 0.2);
  const double lambda = 0.8;
  const Eigen::VectorXd m8 = monomial_vector(8, q);
  const Eigen::VectorXd m5 = monomial_vector(5, q);
  const Vec4 e = C.eval_e(q, lambda);
  const Eigen::VectorXd rows = (E0 - lambda * E1) * m8;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < m5.size(); ++j) EXPECT_NEAR(rows[i * m5.size() + j], e[i] * m5[j], 1e-13);
}

TEST(Elimination, RankLaw) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CoeffMatrixC C = instance(seed);
    EXPECT_EQ(numerical_rank(build_F(C, 7)), 80);
    EXPECT_EQ(numerical_rank(build_F(C, 8)), 125);
    EXPECT_EQ(numerical_rank(build_F(C, 9)), 180);
    // Degree 6 falls one short of the 40 solutions.
    EXPECT_EQ(corank_F(C, 6), 39);
  }
}

TEST(Elimination, AugmentedFullRank) {
  const CoeffMatrixC C = instance(3);
  for (double lambda : {-0.7, 0.3, 1.9}) {
    EXPECT_EQ(augmented_rank(C, Method::kDeg7, lambda), 120);
    EXPECT_EQ(augmented_rank(C, Method::kDeg8, lambda), 165);
    EXPECT_EQ(augmented_rank(C, Method::kDeg9, lambda), 220);
    // Without the Sylvester rows E_8 and E_7 are rank deficient.
    EXPECT_LT(numerical_rank(build_E(C, 8).first - lambda * build_E(C, 8).second), 165);
    EXPECT_LT(numerical_rank(build_E(C, 7).first - lambda * build_E(C, 7).second), 120);
    EXPECT_LT(augmented_rank(C, Method::kDeg8, lambda, Fault::kZeroSylvesterRow), 165);
  }
}

TEST(Elimination, AugmentRejectsWrongDegree) {
  const CoeffMatrixC C = instance(4);
  const auto [E0, E1] = build_E(C, 9);
  const std::vector<SylvesterRow> rows{build_S0(C)};
  try {
    augment(E0, E1, rows);
    FAIL() << "expected DimensionMismatch";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  // A zero row leaves the rank unchanged.
  SylvesterRow zero{9, HomoPoly(9), HomoPoly(9), SylvesterLabel::kS0};
  const std::vector<SylvesterRow> zrows{zero};
  const auto [A0, A1] = augment(E0, E1, zrows);
  EXPECT_EQ(A0.rows(), E0.rows() + 1);
  EXPECT_EQ(numerical_rank(A0 - 0.5 * A1), numerical_rank(E0 - 0.5 * E1));
}

// Every row of F lies in the row space of E(lambda).
TEST(Elimination, RowSpaceContainment) {
  const CoeffMatrixC C = instance(5);
  for (Method m : {Method::kDeg7, Method::kDeg8, Method::kDeg9}) {
    const ElimSystem sys = build_elim_system(C, m);
    for (double lambda : {0.37, -1.21}) {
      const Eigen::MatrixXd Et = sys.E_at(lambda).transpose();
      const Eigen::MatrixXd coef = Et.colPivHouseholderQr().solve(Eigen::MatrixXd(sys.F.transpose()));
      const double rel = (Et * coef - sys.F.transpose()).norm() / sys.F.norm();
      EXPECT_LE(rel, 1e-8) << to_string(m);
    }
  }
}

TEST(Elimination, PencilShapes) {
  const CoeffMatrixC C = instance(6);
  const int expected_d[] = {80, 125, 180};
  int k = 0;
  for (Method m : {Method::kDeg7, Method::kDeg8, Method::kDeg9}) {
    const PencilSystem p = build_pencil(build_elim_system(C, m));
    EXPECT_EQ(p.Q0.rows(), 40);
    EXPECT_EQ(p.Q0.cols(), 40);
    EXPECT_EQ(p.Q1.rows(), 40);
    EXPECT_EQ(p.R_D.rows(), expected_d[k]);
    EXPECT_EQ(p.R_D.cols(), expected_d[k]);
    EXPECT_EQ(p.X.rows(), expected_d[k]);
    EXPECT_EQ(Eigen::MatrixXd(p.Q1.triangularView<Eigen::StrictlyLower>()).norm(), 0.0);
    std::vector<int> perm = p.col_perm;
    std::sort(perm.begin(), perm.end());
    for (int i = 0; i < static_cast<int>(perm.size()); ++i) EXPECT_EQ(perm[i], i);
    ++k;
  }
}

TEST(Elimination, TrailingSplitAgreesWithPivoted) {
  const CoeffMatrixC C = instance(7);
  const ElimSystem sys = build_elim_system(C, Method::kDeg9);
  const PencilSystem a = build_pencil(sys, {ColumnSplit::kPivoted});
  const PencilSystem b = build_pencil(sys, {ColumnSplit::kTrailing});
  EXPECT_EQ(b.split_used, ColumnSplit::kTrailing);
  EXPECT_FALSE(b.used_fallback);
  auto real_roots = [](const PencilSystem& p) {
    std::vector<double> out;
    for (const EigenPair& e : solve_pencil(p))
      if (is_finite_pair(e, 1e-10) && is_real_pair(e, 1e-6)) out.push_back(e.lambda().real());
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto ra = real_roots(a), rb = real_roots(b);
  ASSERT_EQ(ra.size(), rb.size());
  for (size_t i = 0; i < ra.size(); ++i) EXPECT_NEAR(ra[i], rb[i], 1e-6 * (1.0 + std::abs(ra[i])));
}

// The first 40 basis monomials never make a valid A block: the w^(d-4)
// multiples of the six quartics live entirely inside them.
TEST(Elimination, LeadingColumnsAreNotAValidSplit) {
  const CoeffMatrixC C = instance(8);
  const Eigen::MatrixXd F = build_F(C, 8);
  EXPECT_LT(numerical_rank(F.rightCols(F.cols() - 40)), 125);
}

TEST(Elimination, FallbackOnRankDeficientD) {
  // A repeated column inside the fixed D block makes it singular while F
  // keeps its rank.
  ElimSystem sys = build_elim_system(instance(9), Method::kDeg9);
  sys.F.col(0) = sys.F.col(1);
  ASSERT_EQ(numerical_rank(sys.F), 180);
  const PencilSystem p = build_pencil(sys, {ColumnSplit::kTrailing, 1e-10, true});
  EXPECT_TRUE(p.used_fallback);
  EXPECT_EQ(p.split_used, ColumnSplit::kPivoted);
  try {
    build_pencil(sys, {ColumnSplit::kTrailing, 1e-10, false});
    FAIL() << "expected RankDeficientD";
  } catch (const SolverError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRankDeficientD);
  }
}

TEST(Elimination, NumericalRank) {
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Zero(5, 7)), 0);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Identity(40, 40)), 40);
  Eigen::MatrixXd M = Eigen::MatrixXd::Random(6, 4) * Eigen::MatrixXd::Random(4, 8);
  EXPECT_EQ(numerical_rank(M), 4);
  EXPECT_EQ(numerical_corank(M), 4);
}

TEST(Elimination, MatrixCsvDump) {
  Eigen::MatrixXd M(2, 3);
  M << 1, 2.5, -3, 0.1, 0, 1e-300;
  std::ostringstream os;
  write_matrix_csv(os, M, "M");
  EXPECT_EQ(os.str(), "# M 2 3\n1,2.5,-3\n0.10000000000000001,0,1e-300\n");
}

}  // namespace
}  // namespace sylvpose
