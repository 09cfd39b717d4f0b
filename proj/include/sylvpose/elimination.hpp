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

// Elimination matrices in degree d and their reduction to a 40x40 pencil.
//
//   E(lambda) = E0 - lambda E1   rows: e_i * m for m in m_(d-3), plus
//                                 Sylvester rows (1 for d = 8, 4 for d = 7)
//   F                            rows: f_j * m for m in m_(d-4)
//
// F has corank 40 for d >= 7. Splitting the monomials into 40 A-columns and
// n_d - 40 D-columns, the F rows give x_D = -D^-1 C x_A and substituting into
// E yields the tall pencil (Qbar0 - lambda Qbar1) x_A = 0, which is compressed
// to 40x40 by an orthogonal-triangular factorization of Qbar1.

#pragma once

#include "sylvpose/common.hpp"
#include "sylvpose/poly.hpp"
#include "sylvpose/polysys.hpp"
#include "sylvpose/sylvester.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <complex>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace sylvpose {

inline constexpr int kNumSolutions = 40;

enum class Method { kDeg7 = 7, kDeg8 = 8, kDeg9 = 9 };

inline int degree_of(Method m) { return static_cast<int>(m); }

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kDeg7: return "deg7";
    case Method::kDeg8: return "deg8";
    case Method::kDeg9: return "deg9";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "deg7") return Method::kDeg7;
  if (s == "deg8") return Method::kDeg8;
  if (s == "deg9") return Method::kDeg9;
  return std::nullopt;
}

// How the 40 A-columns are chosen.
enum class ColumnSplit {
  kPivoted,   // column-pivoted QR of F; the 40 least pivotal columns
  kTrailing,  // fixed: the last 40 monomials of the basis
};

inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_E(const CoeffMatrixC& C, int d) {
  if (d < 3 || d > kMaxDegree) throw std::invalid_argument("build_E: degree out of range");
  const int nm = monomial_count(d - 3);
  const int n = monomial_count(d);
  const auto& tab = detail::product_table(3, d - 3);
  const CoeffMatrix& L = CoeffMatrixC::lambda_block();
  Eigen::MatrixXd E0 = Eigen::MatrixXd::Zero(4 * nm, n);
  Eigen::MatrixXd E1 = Eigen::MatrixXd::Zero(4 * nm, n);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < nm; ++j) {
      const int row = i * nm + j;
      for (int k = 0; k < 20; ++k) {
        const int col = tab[k * nm + j];
        E0(row, col) += C.c(i, k);
        E1(row, col) += L(i, k);
      }
    }
  }
  return {std::move(E0), std::move(E1)};
}

inline Eigen::MatrixXd build_F(const CoeffMatrixC& C, int d) {
  if (d < 4 || d > kMaxDegree) throw std::invalid_argument("build_F: degree out of range");
  const FSystem fs = build_F(C);
  const int nm = monomial_count(d - 4);
  const int n = monomial_count(d);
  const auto& tab = detail::product_table(4, d - 4);
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(6 * nm, n);
  for (int i = 0; i < 6; ++i) {
    const Eigen::VectorXd& f = fs.f[i].coeffs;
    for (int j = 0; j < nm; ++j) {
      const int row = i * nm + j;
      for (int k = 0; k < f.size(); ++k) F(row, tab[k * nm + j]) += f[k];
    }
  }
  return F;
}

inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> augment(const Eigen::MatrixXd& E0, const Eigen::MatrixXd& E1,
                                                           std::span<const SylvesterRow> rows) {
  if (E0.rows() != E1.rows() || E0.cols() != E1.cols())
    throw SolverError(ErrorCode::kDimensionMismatch, Stage::kElimination, "E0 and E1 shapes differ");
  const Eigen::Index base = E0.rows();
  Eigen::MatrixXd A0(base + static_cast<Eigen::Index>(rows.size()), E0.cols());
  Eigen::MatrixXd A1(A0.rows(), E0.cols());
  A0.topRows(base) = E0;
  A1.topRows(base) = E1;
  for (size_t k = 0; k < rows.size(); ++k) {
    const SylvesterRow& r = rows[k];
    if (r.p_hi.size() != E0.cols() || r.p_lo.size() != E0.cols())
      throw SolverError(ErrorCode::kDimensionMismatch, Stage::kElimination,
                        "Sylvester row of degree " + std::to_string(r.degree_q) + " does not match the system");
    A0.row(base + k) = r.p_hi.coeffs.transpose();
    A1.row(base + k) = r.p_lo.coeffs.transpose();
  }
  return {std::move(A0), std::move(A1)};
}

struct ElimSystem {
  int degree = 9;
  Eigen::MatrixXd E0;
  Eigen::MatrixXd E1;
  Eigen::MatrixXd F;
  int sylvester_row_count = 0;

  const MonomialBasis& basis() const { return MonomialBasis::of(degree); }
  Eigen::MatrixXd E_at(double lambda) const { return E0 - lambda * E1; }
};

inline ElimSystem build_elim_system(const CoeffMatrixC& C, Method method,
                                    double collapse_tol = kLambdaCollapseTolerance) {
  ElimSystem sys;
  sys.degree = degree_of(method);
  auto [E0, E1] = build_E(C, sys.degree);
  std::vector<SylvesterRow> rows;
  if (method == Method::kDeg8) {
    rows.push_back(build_S0(C, collapse_tol));
  } else if (method == Method::kDeg7) {
    const auto s7 = build_S7(C, collapse_tol);
    rows.assign(s7.begin(), s7.end());
  }
  if (rows.empty()) {
    sys.E0 = std::move(E0);
    sys.E1 = std::move(E1);
  } else {
    std::tie(sys.E0, sys.E1) = augment(E0, E1, rows);
  }
  sys.sylvester_row_count = static_cast<int>(rows.size());
  sys.F = build_F(C, sys.degree);
  return sys;
}

struct PencilOptions {
  ColumnSplit split = ColumnSplit::kPivoted;
  // Relative threshold on the triangular diagonals of D and Qbar1.
  double rank_tol = 1e-10;
  // Retry a failed fixed split with column pivoting.
  bool allow_fallback = true;
};

struct PencilSystem {
  int degree = 0;
  Eigen::MatrixXd Q0;  // 40 x 40
  Eigen::MatrixXd Q1;  // 40 x 40, upper triangular
  Eigen::MatrixXd R_D;  // (n_d - 40) square, upper triangular
  Eigen::MatrixXd C0;   // (n_d - 40) x 40, Q_D^T Cbar
  Eigen::MatrixXd X;    // R_D^-1 C0, so x_B = -X x_A
  // col_perm[k] is the monomial index of pencil coordinate k (k < 40) or of
  // back-substituted coordinate k - 40.
  std::vector<int> col_perm;
  ColumnSplit split_used = ColumnSplit::kPivoted;
  bool used_fallback = false;

  // Full monomial vector m_d (in basis order) from an A-block vector.
  Eigen::VectorXcd assemble(const Eigen::VectorXcd& x_A) const {
    const Eigen::VectorXcd x_B = -(X.cast<std::complex<double>>() * x_A);
    Eigen::VectorXcd m(col_perm.size());
    for (int k = 0; k < kNumSolutions; ++k) m[col_perm[k]] = x_A[k];
    for (Eigen::Index k = 0; k < x_B.size(); ++k) m[col_perm[kNumSolutions + k]] = x_B[k];
    return m;
  }
};

namespace detail {

inline bool triangular_is_regular(const Eigen::MatrixXd& R, double tol) {
  if (R.rows() == 0) return true;
  const Eigen::VectorXd d = R.diagonal().cwiseAbs();
  return d.minCoeff() > tol * d.maxCoeff();
}

struct ColumnSplitResult {
  std::vector<int> perm;  // A columns first, then D columns
  Eigen::MatrixXd R_D;
  Eigen::MatrixXd C0;
};

inline ColumnSplitResult split_pivoted(const Eigen::MatrixXd& F, double tol) {
  const Eigen::Index n = F.cols();
  const Eigen::Index nd = n - kNumSolutions;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(F);
  const auto& idx = qr.colsPermutation().indices();
  const Eigen::MatrixXd& R = qr.matrixR();
  ColumnSplitResult out;
  out.R_D = R.topLeftCorner(nd, nd).triangularView<Eigen::Upper>();
  out.C0 = R.block(0, nd, nd, kNumSolutions);
  if (!triangular_is_regular(out.R_D, tol))
    throw SolverError(ErrorCode::kRankDeficientD, Stage::kElimination,
                      "F has rank below n_d - 40 even with column pivoting");
  out.perm.reserve(n);
  for (Eigen::Index k = nd; k < n; ++k) out.perm.push_back(idx[k]);
  for (Eigen::Index k = 0; k < nd; ++k) out.perm.push_back(idx[k]);
  return out;
}

inline ColumnSplitResult split_trailing(const Eigen::MatrixXd& F, double tol) {
  const Eigen::Index n = F.cols();
  const Eigen::Index nd = n - kNumSolutions;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(F.leftCols(nd));
  ColumnSplitResult out;
  out.R_D = qr.matrixQR().topLeftCorner(nd, nd).triangularView<Eigen::Upper>();
  if (!triangular_is_regular(out.R_D, tol))
    throw SolverError(ErrorCode::kRankDeficientD, Stage::kElimination, "D block of the fixed column split is singular");
  Eigen::MatrixXd Cbar = F.rightCols(kNumSolutions);
  Cbar.applyOnTheLeft(qr.householderQ().adjoint());
  out.C0 = Cbar.topRows(nd);
  out.perm.resize(n);
  for (Eigen::Index k = 0; k < kNumSolutions; ++k) out.perm[k] = static_cast<int>(nd + k);
  for (Eigen::Index k = 0; k < nd; ++k) out.perm[kNumSolutions + k] = static_cast<int>(k);
  return out;
}

}  // namespace detail

inline PencilSystem build_pencil(const ElimSystem& sys, const PencilOptions& opts = {}) {
  PencilSystem p;
  p.degree = sys.degree;
  const Eigen::Index n = sys.F.cols();
  const Eigen::Index nd = n - kNumSolutions;
  if (sys.E0.cols() != n || sys.E1.cols() != n || sys.E0.rows() != sys.E1.rows())
    throw SolverError(ErrorCode::kDimensionMismatch, Stage::kElimination, "E and F column counts differ");

  detail::ColumnSplitResult split;
  if (opts.split == ColumnSplit::kTrailing) {
    try {
      split = detail::split_trailing(sys.F, opts.rank_tol);
      p.split_used = ColumnSplit::kTrailing;
    } catch (const SolverError&) {
      if (!opts.allow_fallback) throw;
      split = detail::split_pivoted(sys.F, opts.rank_tol);
      p.split_used = ColumnSplit::kPivoted;
      p.used_fallback = true;
    }
  } else {
    split = detail::split_pivoted(sys.F, opts.rank_tol);
    p.split_used = ColumnSplit::kPivoted;
  }
  p.col_perm = std::move(split.perm);
  p.R_D = std::move(split.R_D);
  p.C0 = std::move(split.C0);
  p.X = p.R_D.triangularView<Eigen::Upper>().solve(p.C0);

  const std::vector<int> a_cols(p.col_perm.begin(), p.col_perm.begin() + kNumSolutions);
  const std::vector<int> d_cols(p.col_perm.begin() + kNumSolutions, p.col_perm.end());
  (void)nd;

  // Schur complements over all E rows.
  Eigen::MatrixXd Qbar0 = sys.E0(Eigen::all, a_cols) - sys.E0(Eigen::all, d_cols) * p.X;
  const Eigen::MatrixXd Qbar1 = sys.E1(Eigen::all, a_cols) - sys.E1(Eigen::all, d_cols) * p.X;

  Eigen::HouseholderQR<Eigen::MatrixXd> qq(Qbar1);
  p.Q1 = qq.matrixQR().topRows(kNumSolutions).triangularView<Eigen::Upper>();
  if (!detail::triangular_is_regular(p.Q1, opts.rank_tol))
    throw SolverError(ErrorCode::kRankDeficientQ1, Stage::kElimination, "reduced lambda block is singular");
  Qbar0.applyOnTheLeft(qq.householderQ().adjoint());
  p.Q0 = Qbar0.topRows(kNumSolutions);
  return p;
}

// Count of singular values above max(rows, cols) * sigma_max * eps * factor.
inline int numerical_rank(const Eigen::MatrixXd& M, double factor = 1e3) {
  if (M.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double tol =
      static_cast<double>(std::max(M.rows(), M.cols())) * s[0] * std::numeric_limits<double>::epsilon() * factor;
  return static_cast<int>((s.array() > tol).count());
}

inline int numerical_corank(const Eigen::MatrixXd& M, double factor = 1e3) {
  return static_cast<int>(M.cols()) - numerical_rank(M, factor);
}

// Row-major CSV dump preceded by a "# name rows cols" header line.
inline void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& M, std::string_view name) {
  os << "# " << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
  os.precision(17);
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) os << ',';
      os << M(i, j);
    }
    os << '\n';
  }
}

}  // namespace sylvpose
