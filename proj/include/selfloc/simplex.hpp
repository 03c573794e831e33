#pragma once
// Exact feasibility oracle for systems of rational linear inequalities
// A x <= b over free variables. Phase-1 simplex with Bland's rule on
// arbitrary-precision rationals: no cycling, no rounding, a definite
// feasible/infeasible verdict every time.
//
// Free variables are split x = xp - xn; every row gets a slack and an
// artificial variable, rows are sign-flipped so the right-hand side is
// nonnegative, and the sum of artificials is minimized. Optimum zero means
// a feasible point, which is read off the basis.

#include <cstddef>
#include <string>
#include <vector>

#include "selfloc/error.hpp"
#include "selfloc/rational.hpp"

namespace selfloc {

struct LpResult {
  bool feasible = false;
  std::vector<Rat> x;  // one value per variable when feasible
};

// max_bits bounds the bit length of any tableau entry; exceeding it aborts
// with numeric_overflow rather than grinding on enormous rationals.
inline LpResult feasible_point(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& b,
                               std::size_t max_bits = 4096) {
  const std::size_t m = A.size();
  const std::size_t n = m == 0 ? 0 : A[0].size();
  if (b.size() != m) fail(Errc::internal, "lp row count mismatch");
  for (const auto& row : A)
    if (row.size() != n) fail(Errc::internal, "lp column count mismatch");
  if (m == 0) return {true, std::vector<Rat>(n, Rat(0))};

  // Columns: xp(n), xn(n), slack(m), artificial(m), then rhs.
  const std::size_t cols = 2 * n + 2 * m;
  std::vector<std::vector<Rat>> T(m, std::vector<Rat>(cols + 1, Rat(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int sign = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) {
      T[i][j] = sign * A[i][j];
      T[i][n + j] = -sign * A[i][j];
    }
    T[i][2 * n + i] = sign;      // slack
    T[i][2 * n + m + i] = 1;     // artificial
    T[i][cols] = sign * b[i];    // rhs, now >= 0
    basis[i] = 2 * n + m + i;
  }
  const auto is_artificial = [&](std::size_t col) { return col >= 2 * n + m; };

  const auto check_magnitude = [&] {
    for (const auto& row : T)
      for (const Rat& v : row)
        if (rat_bits(v) > max_bits)
          fail(Errc::numeric_overflow, "simplex tableau entry exceeded " +
                                           std::to_string(max_bits) + " bits");
  };

  for (std::size_t iter = 0;; ++iter) {
    if (iter > 100000) fail(Errc::internal, "simplex failed to terminate");

    // Reduced cost of column j for the phase-1 objective (sum of
    // artificials): c_j minus the column's weight in artificial basis rows.
    // Basic columns are unit vectors, so their reduced cost is zero.
    std::size_t entering = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      Rat rc = is_artificial(j) ? Rat(1) : Rat(0);
      for (std::size_t i = 0; i < m; ++i)
        if (is_artificial(basis[i])) rc -= T[i][j];
      if (rc < 0) {
        entering = j;  // Bland: first improving column
        break;
      }
    }
    if (entering == cols) break;  // optimal

    std::size_t leaving = m;
    Rat best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][entering] <= 0) continue;
      const Rat ratio = T[i][cols] / T[i][entering];
      if (leaving == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving == m)
      fail(Errc::internal, "phase-1 simplex claims an unbounded objective");

    const Rat pivot = T[leaving][entering];
    for (std::size_t j = 0; j <= cols; ++j) T[leaving][j] /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leaving || T[i][entering] == 0) continue;
      const Rat factor = T[i][entering];
      for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= factor * T[leaving][j];
    }
    basis[leaving] = entering;
    check_magnitude();
  }

  Rat objective = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (is_artificial(basis[i])) objective += T[i][cols];
  if (objective != 0) return {false, {}};

  std::vector<Rat> value(cols, Rat(0));
  for (std::size_t i = 0; i < m; ++i) value[basis[i]] = T[i][cols];
  LpResult res;
  res.feasible = true;
  res.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) res.x[j] = value[j] - value[n + j];
  return res;
}

}  // namespace selfloc
