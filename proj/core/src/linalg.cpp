/*
 * Copyright 2026 The mopar authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mopar/linalg.hpp"

#include <stdexcept>
#include <utility>

#include "mopar/errors.hpp"

namespace mopar {

Vector solve_linear_system(Matrix a, Vector b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("solve_linear_system: size mismatch");
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("solve_linear_system: matrix not square");

  const Matrix original = a;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == n) {
      // report the first row lying in the span of the rows before it
      Matrix prefix;
      for (std::size_t r = 0; r < n; ++r) {
        prefix.push_back(original[r]);
        if (rank(prefix) <= r) throw SingularSystem(r);
      }
      throw SingularSystem(n - 1);
    }
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
    }
    const Rational inv = 1 / a[col][col];
    for (std::size_t k = col; k < n; ++k) a[col][k] *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a[r][col]) == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = col; k < n; ++k)
        if (sgn(a[col][k]) != 0) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  return b;
}

Vector mat_vec(const Matrix& a, const Vector& x) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = dot(a[i], x);
  return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Matrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t p = row;
    while (p < a.size() && sgn(a[p][col]) == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    const Rational inv = 1 / a[row][col];
    for (std::size_t k = col; k < cols; ++k) a[row][k] *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || sgn(a[r][col]) == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t k = col; k < cols; ++k) a[r][k] -= f * a[row][k];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(Matrix a) {
  if (a.empty()) return 0;
  return rref(a, a.front().size()).size();
}

std::vector<Vector> null_space(Matrix a, std::size_t cols) {
  auto pivots = rref(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace mopar
