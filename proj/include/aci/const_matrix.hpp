#pragma once

#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "aci/field.hpp"

namespace aci {

/// Dense constant matrix over the ground field. Used for completions,
/// row-coefficient matrices, and the accumulated transforms R and Q.
class ConstMatrix {
 public:
  ConstMatrix() : ConstMatrix(0, 0, FieldSpec::rationals()) {}

  ConstMatrix(int rows, int cols, const FieldSpec& f)
      : rows_(rows), cols_(cols), field_(f), a_(static_cast<size_t>(rows) * cols, Scalar::zero(f)) {}

  static ConstMatrix identity(int n, const FieldSpec& f) {
    ConstMatrix m(n, n, f);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
    return m;
  }

  /// Permutation matrix Q with (M*Q) placing column k of M at position sigma[k].
  static ConstMatrix column_permutation(const std::vector<int>& sigma, const FieldSpec& f) {
    int n = static_cast<int>(sigma.size());
    ConstMatrix q(n, n, f);
    for (int k = 0; k < n; ++k) q.at(k, sigma[k]) = Scalar::one(f);
    return q;
  }

  /// Permutation matrix P with (P*M) placing row k of M at position perm[k].
  static ConstMatrix row_permutation(const std::vector<int>& perm, const FieldSpec& f) {
    int n = static_cast<int>(perm.size());
    ConstMatrix p(n, n, f);
    for (int k = 0; k < n; ++k) p.at(perm[k], k) = Scalar::one(f);
    return p;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldSpec& field() const { return field_; }

  Scalar& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Scalar& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  ConstMatrix multiply(const ConstMatrix& o) const {
    require(cols_ == o.rows_, Err::DimensionMismatch, "matrix product shape mismatch");
    require(field_ == o.field_, Err::MixedFields, "matrix product over mixed fields");
    ConstMatrix r(rows_, o.cols_, field_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Scalar& v = at(i, k);
        if (v.is_zero()) continue;
        for (int j = 0; j < o.cols_; ++j) r.at(i, j) = r.at(i, j) + v * o.at(k, j);
      }
    return r;
  }

  void add_multiple_of_row(int target, int source, const Scalar& c) {
    if (c.is_zero()) return;
    for (int j = 0; j < cols_; ++j) at(target, j) = at(target, j) + c * at(source, j);
  }

  void scale_row(int row, const Scalar& c) {
    for (int j = 0; j < cols_; ++j) at(row, j) = at(row, j) * c;
  }

  /// Replaces row target with sum_j lambda[j] * row j.
  void replace_row_with_combination(int target, const std::vector<Scalar>& lambda) {
    std::vector<Scalar> next(cols_, Scalar::zero(field_));
    for (int i = 0; i < rows_; ++i) {
      if (lambda[i].is_zero()) continue;
      for (int j = 0; j < cols_; ++j) next[j] = next[j] + lambda[i] * at(i, j);
    }
    for (int j = 0; j < cols_; ++j) at(target, j) = next[j];
  }

  ConstMatrix permuted_rows(const std::vector<int>& perm) const {
    ConstMatrix r(rows_, cols_, field_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(perm[i], j) = at(i, j);
    return r;
  }

  int rank() const {
    ConstMatrix w = *this;
    int r = 0;
    for (int col = 0; col < cols_ && r < rows_; ++col) {
      int pivot = -1;
      for (int i = r; i < rows_; ++i)
        if (!w.at(i, col).is_zero()) {
          pivot = i;
          break;
        }
      if (pivot < 0) continue;
      if (pivot != r)
        for (int j = 0; j < cols_; ++j) std::swap(w.at(pivot, j), w.at(r, j));
      Scalar inv = w.at(r, col).inverse();
      for (int i = r + 1; i < rows_; ++i) {
        if (w.at(i, col).is_zero()) continue;
        Scalar f = w.at(i, col) * inv;
        for (int j = col; j < cols_; ++j) w.at(i, j) = w.at(i, j) - f * w.at(r, j);
      }
      ++r;
    }
    return r;
  }

  bool is_nonsingular() const { return rows_ == cols_ && rank() == rows_; }

  bool is_permutation() const {
    if (rows_ != cols_) return false;
    std::vector<int> seen(cols_, 0);
    for (int i = 0; i < rows_; ++i) {
      int ones = 0, hit = -1;
      for (int j = 0; j < cols_; ++j) {
        if (at(i, j).is_zero()) continue;
        if (at(i, j) != Scalar::one(field_)) return false;
        ++ones;
        hit = j;
      }
      if (ones != 1 || seen[hit]++) return false;
    }
    return true;
  }

  bool operator==(const ConstMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && a_ == o.a_;
  }

 private:
  int rows_, cols_;
  FieldSpec field_;
  std::vector<Scalar> a_;
};

/// True when sigma is a bijection of {0, ..., n-1} presented as a vector.
inline bool is_valid_permutation(const std::vector<int>& sigma, int n) {
  if (static_cast<int>(sigma.size()) != n) return false;
  std::vector<int> seen(n, 0);
  for (int v : sigma) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

/// Solves sum_j c_j * rows[j] = target over the field; returns the particular
/// solution with pivots chosen at the lowest row index and free variables zero,
/// or nullopt when inconsistent. Rows are coordinate vectors of equal length.
inline std::optional<std::vector<Scalar>> solve_combination(
    const std::vector<std::vector<Scalar>>& rows, const std::vector<Scalar>& target,
    const FieldSpec& f) {
  const int k = static_cast<int>(rows.size());
  const int d = static_cast<int>(target.size());
  // Augmented system A c = t with A = rows^T (d x k).
  std::vector<std::vector<Scalar>> a(d, std::vector<Scalar>(k + 1, Scalar::zero(f)));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < k; ++j) a[i][j] = rows[j][i];
    a[i][k] = target[i];
  }
  std::vector<int> pivot_col_of_row(d, -1);
  int r = 0;
  for (int col = 0; col < k && r < d; ++col) {
    int pivot = -1;
    for (int i = r; i < d; ++i)
      if (!a[i][col].is_zero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[r]);
    Scalar inv = a[r][col].inverse();
    for (int j = col; j <= k; ++j) a[r][j] = a[r][j] * inv;
    for (int i = 0; i < d; ++i) {
      if (i == r || a[i][col].is_zero()) continue;
      Scalar fct = a[i][col];
      for (int j = col; j <= k; ++j) a[i][j] = a[i][j] - fct * a[r][j];
    }
    pivot_col_of_row[r] = col;
    ++r;
  }
  for (int i = r; i < d; ++i)
    if (!a[i][k].is_zero()) return std::nullopt;
  std::vector<Scalar> c(k, Scalar::zero(f));
  for (int i = 0; i < r; ++i) c[pivot_col_of_row[i]] = a[i][k];
  return c;
}

}  // namespace aci
