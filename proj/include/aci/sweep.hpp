#pragma once

#include <optional>
#include <set>
#include <vector>

#include "aci/matrix.hpp"
#include "aci/rank.hpp"

namespace aci {

/// Outcome of a sweep from bottom to top: R accumulates the row operations,
/// swept = R * M, and zero_rows lists the rows whose scope-restricted part is
/// zero. The remaining scope-restricted rows are linearly independent.
struct SweepResult {
  ConstMatrix R;
  AciMatrix swept;
  std::set<int> zero_rows;
};

/// Sweep from bottom to top, optionally restricted to the columns of `scope`.
/// Step i tries to zero row m-i (within scope columns) by adding a linear
/// combination of the rows below it; the combination found is the elimination
/// solution with pivots at the lowest row index, applied to the entire row.
inline SweepResult sweep_bottom_to_top(const AciMatrix& M,
                                       const std::optional<std::vector<int>>& scope = {}) {
  const int m = M.rows();
  const FieldSpec& f = M.field();
  std::vector<int> cols;
  if (scope) {
    cols = *scope;
    std::sort(cols.begin(), cols.end());
    for (int c : cols)
      require(c >= 0 && c < M.cols(), Err::IndexOutOfRange, "scope column out of range");
  } else {
    cols.resize(M.cols());
    std::iota(cols.begin(), cols.end(), 0);
  }

  std::vector<std::vector<int>> owned;
  int width = 0;
  for (int c : cols) {
    owned.push_back(M.owned_ids(c));
    width += 1 + static_cast<int>(owned.back().size());
  }

  std::vector<std::vector<AffineForm>> rows(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < M.cols(); ++j) rows[i].push_back(M.entry(i, j));

  auto coeffvec = [&](int i) {
    std::vector<Scalar> v;
    v.reserve(width);
    for (size_t k = 0; k < cols.size(); ++k) {
      const AffineForm& e = rows[i][cols[k]];
      v.push_back(e.constant());
      for (int id : owned[k]) v.push_back(e.coeff(id));
    }
    return v;
  };
  auto scope_zero = [&](int i) {
    for (int c : cols)
      if (!rows[i][c].is_zero()) return false;
    return true;
  };

  ConstMatrix R = ConstMatrix::identity(m, f);
  for (int step = 1; step <= m - 1; ++step) {
    const int t = m - 1 - step;
    if (scope_zero(t)) continue;
    std::vector<std::vector<Scalar>> below;
    for (int j = t + 1; j < m; ++j) below.push_back(coeffvec(j));
    auto sol = solve_combination(below, coeffvec(t), f);
    if (!sol) continue;
    for (int j = t + 1; j < m; ++j) {
      const Scalar& c = (*sol)[j - t - 1];
      if (c.is_zero()) continue;
      for (int col = 0; col < M.cols(); ++col)
        rows[t][col] = rows[t][col] - rows[j][col].scaled(c);
      R.add_multiple_of_row(t, j, -c);
    }
  }

  std::vector<AffineForm> entries;
  entries.reserve(static_cast<size_t>(m) * M.cols());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < M.cols(); ++j) entries.push_back(rows[i][j]);
  SweepResult out{std::move(R),
                  AciMatrix(m, M.cols(), f, std::move(entries),
                            std::vector<Indeterminate>(M.registry().begin(), M.registry().end())),
                  {}};
  for (int i = 0; i < m; ++i)
    if (scope_zero(i)) out.zero_rows.insert(i);
  return out;
}

}  // namespace aci
