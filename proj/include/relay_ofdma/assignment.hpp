#pragma once

// Maximum-weight perfect matching on a square matrix (the linear assignment
// problem), solved with the O(n^3) Hungarian method using potentials and
// shortest augmenting paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "relay_ofdma/matrix.hpp"

namespace relay_ofdma {

struct AssignmentResult {
  std::vector<std::size_t> perm;  // row k -> column perm[k]
  double value = 0.0;             // sum_k C(k, perm[k]) on the input matrix
};

namespace detail {

// Minimum-cost assignment. `cost` must be square and finite. Returns the
// column for each row.
template <typename T>
std::vector<std::size_t> hungarian_min(const Matrix<T>& cost) {
  const std::size_t n = cost.rows();
  const T inf = std::numeric_limits<T>::has_infinity
                    ? std::numeric_limits<T>::infinity()
                    : std::numeric_limits<T>::max();
  // 1-based potentials; index 0 is the virtual root column.
  std::vector<T> u(n + 1, T{}), v(n + 1, T{}), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      const auto row = cost.row(i0 - 1);
      T delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const T cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> perm(n);
  for (std::size_t j = 1; j <= n; ++j) perm[match[j] - 1] = j - 1;
  return perm;
}

}  // namespace detail

/// Permutation maximizing sum_k C(k, perm[k]). Throws std::invalid_argument
/// on a non-square, empty or non-finite matrix.
template <typename T>
AssignmentResult solve_max_assignment(const Matrix<T>& C) {
  const std::size_t n = C.rows();
  if (n == 0 || C.cols() != n)
    throw std::invalid_argument("assignment: matrix must be square and non-empty");
  T max_entry = C(0, 0);
  for (T c : C.data()) {
    if (!std::isfinite(static_cast<double>(c)))
      throw std::invalid_argument("assignment: non-finite entry");
    if (c > max_entry) max_entry = c;
  }
  // Shifted negation keeps the working costs non-negative.
  Matrix<T> cost(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) cost(r, c) = max_entry - C(r, c);

  AssignmentResult res;
  res.perm = detail::hungarian_min(cost);
  for (std::size_t k = 0; k < n; ++k)
    res.value += static_cast<double>(C(k, res.perm[k]));
  return res;
}

}  // namespace relay_ofdma
