#pragma once

#include "pk/ratfunc.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <optional>
#include <vector>

namespace pk {

// Exact linear algebra over a field F (Rat or RatFunc). Matrices are dense
// row-major vectors of rows.

template <typename F>
using Mat = std::vector<std::vector<F>>;

inline bool field_zero(const Rat& a) { return a == 0; }
inline bool field_zero(const RatFunc& a) { return a.is_zero(); }

template <typename F>
std::size_t mat_rows(const Mat<F>& m) { return m.size(); }
template <typename F>
std::size_t mat_cols(const Mat<F>& m) { return m.empty() ? 0 : m.front().size(); }

template <typename F>
Mat<F> mat_transpose(const Mat<F>& m) {
  Mat<F> t(mat_cols(m), std::vector<F>(mat_rows(m), F{}));
  for (std::size_t i = 0; i < mat_rows(m); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

/// In-place reduced row echelon form; returns pivot column indices.
template <typename F>
std::vector<std::size_t> rref(Mat<F>& m) {
  std::vector<std::size_t> pivots;
  std::size_t rows = mat_rows(m), cols = mat_cols(m);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && field_zero(m[p][c])) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    F inv = m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] / inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || field_zero(m[i][c])) continue;
      F f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <typename F>
std::size_t rank(Mat<F> m) {
  return rref(m).size();
}

/// Basis of the right kernel, returned as columns (each a vector of length cols).
template <typename F>
std::vector<std::vector<F>> kernel(Mat<F> m, const F& one) {
  std::size_t cols = mat_cols(m);
  auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  F zero = one - one;
  std::vector<std::vector<F>> basis;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<F> v(cols, zero);
    v[c] = one;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = zero - m[r][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Canonical basis of the span of the given columns: reduced column echelon
/// form with zero columns dropped. Equal subspaces give equal matrices.
template <typename F>
Mat<F> column_space(const Mat<F>& m) {
  Mat<F> t = mat_transpose(m);
  auto pivots = rref(t);
  Mat<F> out(mat_rows(m), std::vector<F>(pivots.size(), F{}));
  for (std::size_t i = 0; i < mat_rows(m); ++i)
    for (std::size_t k = 0; k < pivots.size(); ++k) out[i][k] = t[k][i];
  return out;
}

template <typename F>
Mat<F> hcat(const Mat<F>& a, const Mat<F>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Mat<F> out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i].insert(out[i].end(), b[i].begin(), b[i].end());
  return out;
}

/// Span of the union of two column families, in canonical form.
template <typename F>
Mat<F> subspace_sum(const Mat<F>& a, const Mat<F>& b) {
  return column_space(hcat(a, b));
}

/// Intersection of the column spans of a and b, canonical form. Computed via
/// the kernel of [a | -b]: the a-part of each kernel vector spans a ∩ b.
template <typename F>
Mat<F> subspace_intersection(const Mat<F>& a, const Mat<F>& b, const F& one) {
  std::size_t n = a.empty() ? b.size() : a.size();
  std::size_t ka = mat_cols(a), kb = mat_cols(b);
  if (ka == 0 || kb == 0) return Mat<F>(n, std::vector<F>{});
  F zero = one - one;
  Mat<F> stacked(n, std::vector<F>(ka + kb, zero));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < ka; ++j) stacked[i][j] = a[i][j];
    for (std::size_t j = 0; j < kb; ++j) stacked[i][ka + j] = zero - b[i][j];
  }
  auto ker = kernel(stacked, one);
  Mat<F> gen(n, std::vector<F>(ker.size(), zero));
  for (std::size_t k = 0; k < ker.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) {
      F acc = zero;
      for (std::size_t j = 0; j < ka; ++j) acc = acc + a[i][j] * ker[k][j];
      gen[i][k] = acc;
    }
  return column_space(gen);
}

/// Does span(a) contain every column of b?
template <typename F>
bool subspace_contains(const Mat<F>& a, const Mat<F>& b) {
  if (mat_cols(b) == 0) return true;
  std::size_t ra = rank(a);
  return rank(hcat(a, b)) == ra;
}

/// Solve m x = rhs; empty optional if inconsistent. If underdetermined,
/// returns the solution with zero free variables.
template <typename F>
std::optional<std::vector<F>> solve(Mat<F> m, std::vector<F> rhs, const F& one) {
  std::size_t rows = mat_rows(m), cols = mat_cols(m);
  for (std::size_t i = 0; i < rows; ++i) m[i].push_back(rhs[i]);
  auto pivots = rref(m);
  F zero = one - one;
  // inconsistency: pivot in the rhs column
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  std::vector<F> x(cols, zero);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][cols];
  return x;
}

/// Numeric rank via SVD with a relative threshold (default 1e-9).
inline int numeric_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  double top = sv(0);
  if (top == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * top) ++r;
  return r;
}

}  // namespace pk
