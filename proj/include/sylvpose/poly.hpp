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

// Dense homogeneous polynomials in the quaternion variables (w, x, y, z).
//
// Every polynomial of degree d is a coefficient vector over the n_d =
// binom(d + 3, 3) monomials of degree d, laid out in the order fixed by
// MonomialBasis. The order is graded lexicographic with w > x > y > z, so
// index 0 is w^d followed by w^(d-1)x, w^(d-1)y, w^(d-1)z.
//
// LambdaPoly adds a hidden variable: a polynomial in lambda whose coefficients
// are HomoPoly of one common degree.

#pragma once

#include "sylvpose/common.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sylvpose {

inline constexpr int kNumVars = 4;
inline constexpr int kMaxDegree = 12;

using Exponent = std::array<int, kNumVars>;

constexpr int monomial_count(int d) { return d < 0 ? 0 : (d + 1) * (d + 2) * (d + 3) / 6; }

constexpr int exponent_degree(const Exponent& e) { return e[0] + e[1] + e[2] + e[3]; }

// The monomial order. Returns true if a comes before b among monomials of
// equal degree. This is the single place the order is defined.
constexpr bool monomial_precedes(const Exponent& a, const Exponent& b) {
  for (int k = 0; k < kNumVars; ++k) {
    if (a[k] != b[k]) return a[k] > b[k];
  }
  return false;
}

class MonomialBasis {
 public:
  explicit MonomialBasis(int degree) : degree_(degree) {
    if (degree < 0 || degree > kMaxDegree) throw std::out_of_range("MonomialBasis: degree out of range");
    exponents_.reserve(monomial_count(degree));
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        for (int c = 0; a + b + c <= degree; ++c) exponents_.push_back({a, b, c, degree - a - b - c});
    std::sort(exponents_.begin(), exponents_.end(), monomial_precedes);
    const int side = degree + 1;
    lookup_.assign(static_cast<size_t>(side) * side * side, -1);
    for (int i = 0; i < size(); ++i) {
      const Exponent& e = exponents_[i];
      lookup_[(e[0] * side + e[1]) * side + e[2]] = i;
    }
  }

  // Cached bases for degrees 0..kMaxDegree.
  static const MonomialBasis& of(int degree) {
    static const std::vector<MonomialBasis> cache = [] {
      std::vector<MonomialBasis> v;
      for (int d = 0; d <= kMaxDegree; ++d) v.emplace_back(d);
      return v;
    }();
    if (degree < 0 || degree > kMaxDegree) throw std::out_of_range("MonomialBasis::of: degree out of range");
    return cache[degree];
  }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }
  const Exponent& exponent_of(int i) const { return exponents_[i]; }
  const std::vector<Exponent>& exponents() const { return exponents_; }

  int index_of(const Exponent& e) const {
    assert(exponent_degree(e) == degree_);
    const int side = degree_ + 1;
    return lookup_[(e[0] * side + e[1]) * side + e[2]];
  }

  // Index of v^d, the pure power of variable v.
  int pure_power_index(int v) const {
    Exponent e{0, 0, 0, 0};
    e[v] = degree_;
    return index_of(e);
  }

 private:
  int degree_;
  std::vector<Exponent> exponents_;
  std::vector<int> lookup_;
};

namespace detail {

// Column index in the degree (da + db) basis of the product of monomial i of
// degree da and monomial j of degree db, stored row-major (i * n_db + j).
inline const std::vector<int>& product_table(int da, int db) {
  static const std::vector<std::vector<int>> tables = [] {
    std::vector<std::vector<int>> t(static_cast<size_t>(kMaxDegree + 1) * (kMaxDegree + 1));
    for (int a = 0; a <= kMaxDegree; ++a) {
      for (int b = 0; a + b <= kMaxDegree; ++b) {
        const auto& ba = MonomialBasis::of(a);
        const auto& bb = MonomialBasis::of(b);
        const auto& bp = MonomialBasis::of(a + b);
        auto& tab = t[a * (kMaxDegree + 1) + b];
        tab.resize(static_cast<size_t>(ba.size()) * bb.size());
        for (int i = 0; i < ba.size(); ++i) {
          for (int j = 0; j < bb.size(); ++j) {
            const Exponent& ea = ba.exponent_of(i);
            const Exponent& eb = bb.exponent_of(j);
            tab[i * bb.size() + j] = bp.index_of({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]});
          }
        }
      }
    }
    return t;
  }();
  if (da < 0 || db < 0 || da + db > kMaxDegree) throw std::out_of_range("product_table: degree out of range");
  return tables[da * (kMaxDegree + 1) + db];
}

}  // namespace detail

// Homogeneous polynomial of fixed degree; the zero polynomial is all-zero.
struct HomoPoly {
  int degree = 0;
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(1);

  HomoPoly() = default;
  explicit HomoPoly(int d) : degree(d), coeffs(Eigen::VectorXd::Zero(monomial_count(d))) {}
  HomoPoly(int d, Eigen::VectorXd c) : degree(d), coeffs(std::move(c)) {
    if (coeffs.size() != monomial_count(d)) throw std::invalid_argument("HomoPoly: coefficient count mismatch");
  }

  static HomoPoly constant(double c) {
    HomoPoly p(0);
    p.coeffs[0] = c;
    return p;
  }
  static HomoPoly variable(int v) {
    HomoPoly p(1);
    Exponent e{0, 0, 0, 0};
    e[v] = 1;
    p.coeffs[MonomialBasis::of(1).index_of(e)] = 1.0;
    return p;
  }
  static HomoPoly monomial(const Exponent& e, double c = 1.0) {
    HomoPoly p(exponent_degree(e));
    p.coeffs[MonomialBasis::of(p.degree).index_of(e)] = c;
    return p;
  }
  // w^2 + x^2 + y^2 + z^2
  static HomoPoly squared_norm() {
    HomoPoly p(2);
    for (int v = 0; v < kNumVars; ++v) {
      Exponent e{0, 0, 0, 0};
      e[v] = 2;
      p.coeffs[MonomialBasis::of(2).index_of(e)] = 1.0;
    }
    return p;
  }

  int size() const { return static_cast<int>(coeffs.size()); }
  bool is_zero() const { return (coeffs.array() == 0.0).all(); }
  double norm() const { return coeffs.norm(); }

  HomoPoly& operator+=(const HomoPoly& o) {
    check_same_degree(o);
    coeffs += o.coeffs;
    return *this;
  }
  HomoPoly& operator-=(const HomoPoly& o) {
    check_same_degree(o);
    coeffs -= o.coeffs;
    return *this;
  }
  HomoPoly& operator*=(double s) {
    coeffs *= s;
    return *this;
  }
  friend HomoPoly operator+(HomoPoly a, const HomoPoly& b) { return a += b; }
  friend HomoPoly operator-(HomoPoly a, const HomoPoly& b) { return a -= b; }
  friend HomoPoly operator*(double s, HomoPoly a) { return a *= s; }
  friend HomoPoly operator-(HomoPoly a) { return a *= -1.0; }

 private:
  void check_same_degree(const HomoPoly& o) const {
    if (o.degree != degree) throw std::invalid_argument("HomoPoly: degree mismatch");
  }
};

// Adds c * (p * q) into out, which must have degree p.degree + q.degree.
inline void poly_mul_add(const HomoPoly& p, const HomoPoly& q, double c, HomoPoly& out) {
  const auto& tab = detail::product_table(p.degree, q.degree);
  const int nq = q.size();
  for (int i = 0; i < p.size(); ++i) {
    const double pi = c * p.coeffs[i];
    if (pi == 0.0) continue;
    const int* row = tab.data() + static_cast<size_t>(i) * nq;
    for (int j = 0; j < nq; ++j) out.coeffs[row[j]] += pi * q.coeffs[j];
  }
}

inline HomoPoly poly_mul(const HomoPoly& p, const HomoPoly& q) {
  HomoPoly out(p.degree + q.degree);
  poly_mul_add(p, q, 1.0, out);
  return out;
}

inline double poly_eval(const HomoPoly& p, const Vec4& q) {
  const auto& basis = MonomialBasis::of(p.degree);
  std::array<std::array<double, kMaxDegree + 1>, kNumVars> pw{};
  for (int v = 0; v < kNumVars; ++v) {
    pw[v][0] = 1.0;
    for (int k = 1; k <= p.degree; ++k) pw[v][k] = pw[v][k - 1] * q[v];
  }
  double s = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const Exponent& e = basis.exponent_of(i);
    s += p.coeffs[i] * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] * pw[3][e[3]];
  }
  return s;
}

// Values of all monomials of degree d at q, in basis order.
inline Eigen::VectorXd monomial_vector(int d, const Vec4& q) {
  const auto& basis = MonomialBasis::of(d);
  Eigen::VectorXd m(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const Exponent& e = basis.exponent_of(i);
    m[i] = std::pow(q[0], e[0]) * std::pow(q[1], e[1]) * std::pow(q[2], e[2]) * std::pow(q[3], e[3]);
  }
  return m;
}

// Partial derivative with respect to variable v.
inline HomoPoly poly_diff(const HomoPoly& p, int v) {
  if (p.degree == 0) return HomoPoly(0);
  HomoPoly out(p.degree - 1);
  const auto& basis = MonomialBasis::of(p.degree);
  const auto& lower = MonomialBasis::of(p.degree - 1);
  for (int i = 0; i < p.size(); ++i) {
    Exponent e = basis.exponent_of(i);
    if (e[v] == 0 || p.coeffs[i] == 0.0) continue;
    const double c = p.coeffs[i] * e[v];
    --e[v];
    out.coeffs[lower.index_of(e)] += c;
  }
  return out;
}

// Polynomial in lambda with HomoPoly coefficients of a shared degree:
// sum_k coeffs[k] * lambda^k.
struct LambdaPoly {
  int degree_q = 0;
  std::vector<HomoPoly> coeffs;

  LambdaPoly() = default;
  LambdaPoly(int dq, int lambda_degree) : degree_q(dq), coeffs(lambda_degree + 1, HomoPoly(dq)) {}
  // p0 - lambda * p1, the shape every entry of a decomposition matrix has.
  static LambdaPoly linear(HomoPoly p0, HomoPoly p1) {
    if (p0.degree != p1.degree) throw std::invalid_argument("LambdaPoly: degree mismatch");
    LambdaPoly l;
    l.degree_q = p0.degree;
    p1 *= -1.0;
    l.coeffs = {std::move(p0), std::move(p1)};
    return l;
  }

  int lambda_degree_bound() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const HomoPoly& p) { return p.is_zero(); });
  }

  double eval(const Vec4& q, double lambda) const {
    double s = 0.0;
    for (int k = lambda_degree_bound(); k >= 0; --k) s = s * lambda + poly_eval(coeffs[k], q);
    return s;
  }
};

inline LambdaPoly lambda_mul(const LambdaPoly& a, const LambdaPoly& b) {
  LambdaPoly out(a.degree_q + b.degree_q, a.lambda_degree_bound() + b.lambda_degree_bound());
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i].is_zero()) continue;
    for (size_t j = 0; j < b.coeffs.size(); ++j) poly_mul_add(a.coeffs[i], b.coeffs[j], 1.0, out.coeffs[i + j]);
  }
  return out;
}

// out += s * a, growing the lambda degree of out if needed.
inline void lambda_add_scaled(LambdaPoly& out, const LambdaPoly& a, double s) {
  if (out.coeffs.empty()) {
    out.degree_q = a.degree_q;
  } else if (out.degree_q != a.degree_q) {
    throw std::invalid_argument("LambdaPoly: degree mismatch");
  }
  while (out.coeffs.size() < a.coeffs.size()) out.coeffs.emplace_back(a.degree_q);
  for (size_t k = 0; k < a.coeffs.size(); ++k) out.coeffs[k].coeffs += s * a.coeffs[k].coeffs;
}

using LambdaMatrix4 = std::array<std::array<LambdaPoly, 4>, 4>;

namespace detail {

// Laplace expansion of the minor given by the selected rows and columns,
// expanding along the column with the most zero entries.
inline LambdaPoly lambda_minor_det(const LambdaMatrix4& m, const std::vector<int>& rows,
                                   const std::vector<int>& cols) {
  const size_t n = rows.size();
  if (n == 1) return m[rows[0]][cols[0]];
  size_t pivot_col = 0;
  int best_zeros = -1;
  for (size_t c = 0; c < n; ++c) {
    int zeros = 0;
    for (int r : rows) zeros += m[r][cols[c]].is_zero() ? 1 : 0;
    if (zeros > best_zeros) {
      best_zeros = zeros;
      pivot_col = c;
    }
  }
  int degree_q = 0;
  for (int c : cols) degree_q += m[rows[0]][c].degree_q;
  LambdaPoly acc(degree_q, 0);
  std::vector<int> sub_cols;
  for (size_t c = 0; c < n; ++c)
    if (c != pivot_col) sub_cols.push_back(cols[c]);
  for (size_t r = 0; r < n; ++r) {
    const LambdaPoly& entry = m[rows[r]][cols[pivot_col]];
    if (entry.is_zero()) continue;
    std::vector<int> sub_rows;
    for (size_t k = 0; k < n; ++k)
      if (k != r) sub_rows.push_back(rows[k]);
    const double sign = ((r + pivot_col) % 2 == 0) ? 1.0 : -1.0;
    lambda_add_scaled(acc, lambda_mul(entry, lambda_minor_det(m, sub_rows, sub_cols)), sign);
  }
  return acc;
}

}  // namespace detail

// Exact determinant of a 4x4 matrix of lambda polynomials. Entries of one
// column must share their q-degree; the result has q-degree equal to the sum
// of the column degrees and lambda degree at most the sum of entry degrees.
inline LambdaPoly lambda_det4(const LambdaMatrix4& m) {
  for (int c = 0; c < 4; ++c)
    for (int r = 1; r < 4; ++r)
      if (m[r][c].degree_q != m[0][c].degree_q)
        throw std::invalid_argument("lambda_det4: column entries must share their degree");
  LambdaPoly d = detail::lambda_minor_det(m, {0, 1, 2, 3}, {0, 1, 2, 3});
  int lambda_bound = 0;
  for (int c = 0; c < 4; ++c) {
    int col_max = 0;
    for (int r = 0; r < 4; ++r) col_max = std::max(col_max, m[r][c].lambda_degree_bound());
    lambda_bound += col_max;
  }
  while (static_cast<int>(d.coeffs.size()) < lambda_bound + 1) d.coeffs.emplace_back(d.degree_q);
  return d;
}

}  // namespace sylvpose
