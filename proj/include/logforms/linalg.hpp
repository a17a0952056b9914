#pragma once

#include <optional>
#include <vector>

#include "logforms/field.hpp"

namespace logforms {

// Row-major dense matrix of packed field elements.
struct Matrix {
  const FieldSpec* F = nullptr;
  int rows = 0, cols = 0;
  std::vector<u32> a;

  Matrix() = default;
  Matrix(const FieldSpec* F_, int r, int c) : F(F_), rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  u32& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  u32 at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Unique solution of a square system, or nullopt when the matrix is singular.
inline std::optional<std::vector<u32>> solve_square(Matrix A, std::vector<u32> b) {
  const FieldSpec* F = A.F;
  const int n = A.rows;
  check_precondition(A.cols == n && static_cast<int>(b.size()) == n, "system shape mismatch");
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (A.at(r, col) != 0) { piv = r; break; }
    if (piv < 0) return std::nullopt;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(col, j));
      std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
    }
    u32 inv = F->inv(A.at(col, col));
    for (int j = col; j < n; ++j) A.at(col, j) = F->mul(A.at(col, j), inv);
    b[static_cast<size_t>(col)] = F->mul(b[static_cast<size_t>(col)], inv);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      u32 factor = A.at(r, col);
      if (!factor) continue;
      for (int j = col; j < n; ++j) A.at(r, j) = F->sub(A.at(r, j), F->mul(factor, A.at(col, j)));
      b[static_cast<size_t>(r)] = F->sub(b[static_cast<size_t>(r)], F->mul(factor, b[static_cast<size_t>(col)]));
    }
  }
  return b;
}

inline int rank(Matrix A) {
  const FieldSpec* F = A.F;
  int r = 0;
  for (int col = 0; col < A.cols && r < A.rows; ++col) {
    int piv = -1;
    for (int i = r; i < A.rows; ++i)
      if (A.at(i, col) != 0) { piv = i; break; }
    if (piv < 0) continue;
    for (int j = 0; j < A.cols; ++j) std::swap(A.at(piv, j), A.at(r, j));
    u32 inv = F->inv(A.at(r, col));
    for (int j = col; j < A.cols; ++j) A.at(r, j) = F->mul(A.at(r, j), inv);
    for (int i = 0; i < A.rows; ++i) {
      if (i == r) continue;
      u32 f = A.at(i, col);
      if (!f) continue;
      for (int j = col; j < A.cols; ++j) A.at(i, j) = F->sub(A.at(i, j), F->mul(f, A.at(r, j)));
    }
    ++r;
  }
  return r;
}

}  // namespace logforms
