#pragma once

// Exact dense linear algebra over the Scalar field: reduced row echelon
// form, rank, kernels, inverses.  Matrices are row-major vectors of rows.
// Everything is small (Lie algebra dimension, center boxes), so plain
// Gaussian elimination with exact division is the right tool.

#include <vector>

#include "twist/scalar.hpp"

namespace twist::linalg {

using scalars::Scalar;
using Matrix = std::vector<std::vector<Scalar>>;

// Reduce m in place; returns pivot column per row (row-reduced rows first).
inline std::vector<int> rref(Matrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const size_t cols = m[0].size();
  size_t row = 0;
  for (size_t col = 0; col < cols && row < m.size(); ++col) {
    size_t p = row;
    while (p < m.size() && m[p][col].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[row], m[p]);
    Scalar inv = m[row][col].inverse();
    for (size_t c = col; c < cols; ++c) m[row][c] *= inv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      Scalar f = m[r][col];
      for (size_t c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  m.resize(row);  // drop zero rows
  return pivots;
}

inline int rank(Matrix m) { return static_cast<int>(rref(m).size()); }

// Basis of the right kernel {v : M v = 0}, one vector per free column.
inline Matrix kernel(Matrix m, int cols) {
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  Matrix out;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> v(cols, Scalar(0));
    v[free] = Scalar(1);
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = m[r][free].negated();
    out.push_back(std::move(v));
  }
  return out;
}

// Inverse of a square matrix; throws NotInvertible if singular.
inline Matrix inverse(const Matrix& a) {
  const size_t n = a.size();
  Matrix m = a;
  for (size_t r = 0; r < n; ++r) {
    m[r].resize(2 * n, Scalar(0));
    m[r][n + r] = Scalar(1);
  }
  std::vector<int> pivots = rref(m);
  if (pivots.size() != n || (n > 0 && pivots.back() >= static_cast<int>(n)))
    fail(Err::NotInvertible, "matrix is singular");
  Matrix out(n, std::vector<Scalar>(n, Scalar(0)));
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) out[r][c] = m[r][n + c];
  return out;
}

// One solution of A x = b, if any.
inline std::optional<std::vector<Scalar>> solve(Matrix a, const std::vector<Scalar>& b) {
  const size_t cols = a.empty() ? 0 : a[0].size();
  for (size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
  std::vector<int> pivots = rref(a);
  for (size_t r = 0; r < pivots.size(); ++r)
    if (pivots[r] == static_cast<int>(cols)) return std::nullopt;  // 0 = 1 row
  std::vector<Scalar> x(cols, Scalar(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = a[r][cols];
  return x;
}

}  // namespace twist::linalg
