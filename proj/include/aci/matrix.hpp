#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aci/affine.hpp"
#include "aci/const_matrix.hpp"

namespace aci {

struct Shape {
  enum class Tag { Wide, Tall, Square };
  Tag tag;
  bool degenerate;  // no rows or no columns
  bool is_void;     // 0 x 0

  std::string to_string() const {
    std::string s = tag == Tag::Wide ? "wide" : tag == Tag::Tall ? "tall" : "square";
    if (is_void) return "void";
    if (degenerate) s += " degenerate";
    return s;
  }
};

inline Shape shape_of(int m, int n) {
  Shape s;
  s.tag = n > m ? Shape::Tag::Wide : m > n ? Shape::Tag::Tall : Shape::Tag::Square;
  s.degenerate = m == 0 || n == 0;
  s.is_void = m == 0 && n == 0;
  return s;
}

/// Total assignment of field values to indeterminates, keyed by id.
class Completion {
 public:
  Completion() = default;

  void set(int id, const Scalar& v) {
    auto it = std::lower_bound(values_.begin(), values_.end(), id,
                               [](const auto& p, int x) { return p.first < x; });
    if (it != values_.end() && it->first == id)
      it->second = v;
    else
      values_.insert(it, {id, v});
  }

  std::optional<Scalar> get(int id) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), id,
                               [](const auto& p, int x) { return p.first < x; });
    if (it != values_.end() && it->first == id) return it->second;
    return std::nullopt;
  }

  const std::vector<std::pair<int, Scalar>>& values() const { return values_; }

 private:
  std::vector<std::pair<int, Scalar>> values_;  // sorted by id
};

/// A column subset F together with the permutation sigma_F that moves F to the
/// front: sigma maps each old column index to its new position, members of F
/// landing on 0..#F-1 and the rest on #F..n-1, both groups in ascending order.
class ColumnSelector {
 public:
  ColumnSelector(std::vector<int> f, int n) : f_(std::move(f)), n_(n) {
    std::sort(f_.begin(), f_.end());
    require(std::adjacent_find(f_.begin(), f_.end()) == f_.end(), Err::IndexOutOfRange,
            "duplicate column in selector");
    for (int c : f_)
      require(c >= 0 && c < n, Err::IndexOutOfRange, "column " + std::to_string(c) + " out of range");
    sigma_.assign(n, -1);
    int next = 0;
    for (int c : f_) sigma_[c] = next++;
    for (int c = 0; c < n; ++c)
      if (sigma_[c] < 0) sigma_[c] = next++;
  }

  const std::vector<int>& f() const { return f_; }
  int size() const { return static_cast<int>(f_.size()); }
  int n() const { return n_; }
  int sigma(int old_col) const { return sigma_[old_col]; }
  const std::vector<int>& sigma() const { return sigma_; }

  ConstMatrix q_matrix(const FieldSpec& field) const {
    return ConstMatrix::column_permutation(sigma_, field);
  }

 private:
  std::vector<int> f_;
  int n_;
  std::vector<int> sigma_;
};

/// An m x n grid of affine forms with column-disjoint indeterminates.
/// Degenerate (0 x q, p x 0) and void (0 x 0) matrices are ordinary values.
/// Instances are immutable after construction; operations return new values.
class AciMatrix {
 public:
  /// The void matrix over the rationals.
  AciMatrix() : AciMatrix(0, 0, FieldSpec::rationals(), {}, {}) {}

  /// Checked constructor: verifies that every term references a registered
  /// indeterminate and that each indeterminate stays in its owner column.
  static AciMatrix validate(int m, int n, const FieldSpec& field,
                            std::vector<AffineForm> entries, std::vector<Indeterminate> registry) {
    require(m >= 0 && n >= 0, Err::DimensionMismatch, "negative dimension");
    require(static_cast<size_t>(m) * n == entries.size(), Err::DimensionMismatch,
            "entry grid does not match declared dimensions");
    std::sort(registry.begin(), registry.end(),
              [](const Indeterminate& a, const Indeterminate& b) { return a.id < b.id; });
    std::set<std::string> names;
    for (const auto& x : registry) {
      require(x.id >= 0, Err::UnknownIndeterminate, "negative indeterminate id");
      require(x.owner_column >= 0 && x.owner_column < n, Err::IndexOutOfRange,
              "owner column of '" + x.name + "' out of range");
      require(names.insert(x.name).second, Err::ColumnSharing,
              "indeterminate name '" + x.name + "' declared twice");
    }
    for (size_t i = 1; i < registry.size(); ++i)
      require(registry[i - 1].id != registry[i].id, Err::UnknownIndeterminate,
              "duplicate indeterminate id");
    AciMatrix M(m, n, field, std::move(entries), std::move(registry));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        for (const auto& [id, c] : M.entry(i, j).terms()) {
          const Indeterminate* x = M.find(id);
          require(x != nullptr, Err::UnknownIndeterminate,
                  "entry (" + std::to_string(i) + "," + std::to_string(j) +
                      ") uses unregistered indeterminate id " + std::to_string(id));
          require(x->owner_column == j, Err::ColumnSharing,
                  "indeterminate '" + x->name + "' appears in column " + std::to_string(j) +
                      " but is owned by column " + std::to_string(x->owner_column));
          require(c.field() == field, Err::MixedFields, "coefficient from a different field");
        }
        require(M.entry(i, j).field() == field, Err::MixedFields, "entry from a different field");
      }
    return M;
  }

  int rows() const { return m_; }
  int cols() const { return n_; }
  const FieldSpec& field() const { return field_; }
  const std::vector<Indeterminate>& registry() const { return registry_; }
  Shape shape() const { return shape_of(m_, n_); }

  const AffineForm& entry(int i, int j) const { return entries_[static_cast<size_t>(i) * n_ + j]; }

  const Indeterminate* find(int id) const {
    auto it = std::lower_bound(registry_.begin(), registry_.end(), id,
                               [](const Indeterminate& x, int v) { return x.id < v; });
    if (it != registry_.end() && it->id == id) return &*it;
    return nullptr;
  }

  const Indeterminate* find_name(const std::string& name) const {
    for (const auto& x : registry_)
      if (x.name == name) return &x;
    return nullptr;
  }

  /// Ids owned by column j, ascending.
  std::vector<int> owned_ids(int j) const {
    std::vector<int> out;
    for (const auto& x : registry_)
      if (x.owner_column == j) out.push_back(x.id);
    return out;
  }

  bool is_zero_matrix() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  bool column_is_zero(int j) const {
    for (int i = 0; i < m_; ++i)
      if (!entry(i, j).is_zero()) return false;
    return true;
  }

  /// Entrywise comparison keyed by indeterminate names, so matrices with
  /// different id assignments still compare equal when they print the same.
  bool same_entries(const AciMatrix& o) const {
    if (m_ != o.m_ || n_ != o.n_ || field_ != o.field_) return false;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) {
        const AffineForm &a = entry(i, j), &b = o.entry(i, j);
        if (a.constant() != b.constant()) return false;
        std::map<std::string, Scalar> ta, tb;
        for (const auto& [id, c] : a.terms()) ta.emplace(find(id)->name, c);
        for (const auto& [id, c] : b.terms()) tb.emplace(o.find(id)->name, c);
        if (ta != tb) return false;
      }
    return true;
  }

  // Unchecked assembly for operations that preserve the invariants.
  AciMatrix(int m, int n, FieldSpec field, std::vector<AffineForm> entries,
            std::vector<Indeterminate> registry)
      : m_(m), n_(n), field_(std::move(field)), entries_(std::move(entries)),
        registry_(std::move(registry)) {}

 private:
  int m_, n_;
  FieldSpec field_;
  std::vector<AffineForm> entries_;  // row-major
  std::vector<Indeterminate> registry_;  // sorted by id
};

/// Substitutes every assigned indeterminate and evaluates to a constant matrix.
inline ConstMatrix complete(const AciMatrix& M, const Completion& c) {
  for (const auto& x : M.registry())
    require(c.get(x.id).has_value(), Err::MissingAssignment, "no value for '" + x.name + "'");
  ConstMatrix out(M.rows(), M.cols(), M.field());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      Scalar v = M.entry(i, j).constant();
      for (const auto& [id, k] : M.entry(i, j).terms()) v = v + k * *c.get(id);
      out.at(i, j) = v;
    }
  return out;
}

/// R*M for a constant square R. Row operations cannot move indeterminates
/// across columns, so the result satisfies the ACI invariants unchanged.
inline AciMatrix left_multiply(const ConstMatrix& R, const AciMatrix& M) {
  require(R.cols() == M.rows() && R.rows() == R.cols(), Err::DimensionMismatch,
          "left factor must be square and conformable");
  require(R.field() == M.field(), Err::MixedFields, "transform over a different field");
  std::vector<AffineForm> entries;
  entries.reserve(static_cast<size_t>(M.rows()) * M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      AffineForm acc = AffineForm::zero(M.field());
      for (int t = 0; t < M.rows(); ++t) {
        const Scalar& r = R.at(i, t);
        if (r.is_zero()) continue;
        acc = acc + M.entry(t, j).scaled(r);
      }
      entries.push_back(std::move(acc));
    }
  return AciMatrix(M.rows(), M.cols(), M.field(), std::move(entries),
                   std::vector<Indeterminate>(M.registry().begin(), M.registry().end()));
}

/// M*Q for the permutation sending old column k to position sigma[k].
inline AciMatrix permute_columns(const AciMatrix& M, const std::vector<int>& sigma) {
  require(static_cast<int>(sigma.size()) == M.cols(), Err::IndexOutOfRange,
          "permutation length does not match column count");
  std::vector<AffineForm> entries(static_cast<size_t>(M.rows()) * M.cols(),
                                  AffineForm::zero(M.field()));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      entries[static_cast<size_t>(i) * M.cols() + sigma[j]] = M.entry(i, j);
  std::vector<Indeterminate> reg(M.registry().begin(), M.registry().end());
  for (auto& x : reg) x.owner_column = sigma[x.owner_column];
  return AciMatrix(M.rows(), M.cols(), M.field(), std::move(entries), std::move(reg));
}

inline AciMatrix permute_columns(const AciMatrix& M, const ColumnSelector& sel) {
  require(sel.n() == M.cols(), Err::IndexOutOfRange, "selector built for a different width");
  return permute_columns(M, sel.sigma());
}

/// P*M for the permutation sending old row k to position perm[k].
inline AciMatrix permute_rows(const AciMatrix& M, const std::vector<int>& perm) {
  require(static_cast<int>(perm.size()) == M.rows(), Err::IndexOutOfRange,
          "permutation length does not match row count");
  std::vector<AffineForm> entries(static_cast<size_t>(M.rows()) * M.cols(),
                                  AffineForm::zero(M.field()));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      entries[static_cast<size_t>(perm[i]) * M.cols() + j] = M.entry(i, j);
  return AciMatrix(M.rows(), M.cols(), M.field(), std::move(entries),
                   std::vector<Indeterminate>(M.registry().begin(), M.registry().end()));
}

/// Submatrix rows [r0,r1) x cols [c0,c1). Keeps parent ids and names; the
/// registry is restricted to indeterminates actually appearing in the slice.
inline AciMatrix block(const AciMatrix& M, int r0, int r1, int c0, int c1) {
  require(0 <= r0 && r0 <= r1 && r1 <= M.rows() && 0 <= c0 && c0 <= c1 && c1 <= M.cols(),
          Err::IndexOutOfRange, "block range out of bounds");
  std::vector<AffineForm> entries;
  std::set<int> used;
  entries.reserve(static_cast<size_t>(r1 - r0) * (c1 - c0));
  for (int i = r0; i < r1; ++i)
    for (int j = c0; j < c1; ++j) {
      entries.push_back(M.entry(i, j));
      for (const auto& [id, c] : M.entry(i, j).terms()) used.insert(id);
    }
  std::vector<Indeterminate> reg;
  for (const auto& x : M.registry())
    if (used.count(x.id)) {
      Indeterminate y = x;
      y.owner_column -= c0;
      reg.push_back(y);
    }
  return AciMatrix(r1 - r0, c1 - c0, M.field(), std::move(entries), std::move(reg));
}

/// Builds the block matrix [A B; 0 C] with a fresh registry. A and the [B; C]
/// column group must use disjoint indeterminate names.
inline AciMatrix compose_block(const AciMatrix& A, const AciMatrix& B, const AciMatrix& C) {
  require(A.field() == B.field() && A.field() == C.field(), Err::MixedFields,
          "blocks over different fields");
  require(A.rows() == B.rows(), Err::DimensionMismatch, "rows(A) != rows(B)");
  require(B.cols() == C.cols(), Err::DimensionMismatch, "cols(B) != cols(C)");
  const int m = A.rows() + C.rows();
  const int n = A.cols() + C.cols();
  const FieldSpec& f = A.field();

  for (const auto& x : A.registry())
    require(B.find_name(x.name) == nullptr && C.find_name(x.name) == nullptr, Err::ColumnSharing,
            "indeterminate '" + x.name + "' shared between A and the [B; C] column group");

  std::vector<AffineForm> grid(static_cast<size_t>(m) * n, AffineForm::zero(f));
  auto put = [&](int i, int j, const AffineForm& e) { grid[static_cast<size_t>(i) * n + j] = e; };
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) put(i, j, A.entry(i, j));
    for (int j = 0; j < B.cols(); ++j) put(i, A.cols() + j, B.entry(i, j));
  }
  for (int i = 0; i < C.rows(); ++i)
    for (int j = 0; j < C.cols(); ++j) put(A.rows() + i, A.cols() + j, C.entry(i, j));

  // Fresh ids in row-major first-occurrence order, matching the entry parser.
  std::map<std::string, int> ids;
  std::vector<Indeterminate> reg;
  auto owner_of = [&](const std::string& name, int col) {
    auto it = ids.find(name);
    if (it == ids.end()) {
      int id = static_cast<int>(reg.size());
      ids.emplace(name, id);
      reg.push_back({id, name, col});
      return id;
    }
    require(reg[it->second].owner_column == col, Err::ColumnSharing,
            "indeterminate '" + name + "' would appear in two columns");
    return it->second;
  };
  auto rename = [&](const AffineForm& e, const AciMatrix& src, int col) {
    AffineForm out(e.constant());
    for (const auto& [id, c] : e.terms()) out.add_term(owner_of(src.find(id)->name, col), c);
    return out;
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const AffineForm& e = grid[static_cast<size_t>(i) * n + j];
      if (e.is_constant()) continue;
      const AciMatrix& src = i < A.rows() ? (j < A.cols() ? A : B) : C;
      grid[static_cast<size_t>(i) * n + j] = rename(e, src, j);
    }
  return AciMatrix::validate(m, n, f, std::move(grid), std::move(reg));
}

enum class ZeroBlockClass { Big, Medium, Neither };

inline const char* zero_block_class_name(ZeroBlockClass c) {
  switch (c) {
    case ZeroBlockClass::Big: return "Big";
    case ZeroBlockClass::Medium: return "Medium";
    case ZeroBlockClass::Neither: return "Neither";
  }
  return "?";
}

struct ZeroBlockReport {
  bool block_zero;
  ZeroBlockClass cls;
};

/// Classifies the bottom-left r x s block: Big when r+s exceeds max(m,n),
/// Medium on equality, Neither otherwise or when the block is not all zero.
/// Degenerate blocks (r = 0 or s = 0) are permitted.
inline ZeroBlockReport classify_zero_block(const AciMatrix& M, int r, int s) {
  require(0 <= r && r <= M.rows() && 0 <= s && s <= M.cols(), Err::IndexOutOfRange,
          "zero block dimensions out of range");
  ZeroBlockReport rep{true, ZeroBlockClass::Neither};
  for (int i = M.rows() - r; i < M.rows(); ++i)
    for (int j = 0; j < s; ++j)
      if (!M.entry(i, j).is_zero()) {
        rep.block_zero = false;
        return rep;
      }
  const int mx = std::max(M.rows(), M.cols());
  if (r + s > mx)
    rep.cls = ZeroBlockClass::Big;
  else if (r + s == mx)
    rep.cls = ZeroBlockClass::Medium;
  return rep;
}

/// Coordinates of the rows of M in the per-column spaces F + F x_1 + ...:
/// for each column in scope (ascending), one coordinate for the constant and
/// one per owned indeterminate in ascending id order.
inline ConstMatrix row_coefficient_matrix(const AciMatrix& M,
                                          const std::optional<std::vector<int>>& scope = {}) {
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
  ConstMatrix out(M.rows(), width, M.field());
  for (int i = 0; i < M.rows(); ++i) {
    int at = 0;
    for (size_t k = 0; k < cols.size(); ++k) {
      const AffineForm& e = M.entry(i, cols[k]);
      out.at(i, at++) = e.constant();
      for (int id : owned[k]) out.at(i, at++) = e.coeff(id);
    }
  }
  return out;
}

/// Linear independence of the rows of M in the vector space spanned per column
/// by the constant and the column's indeterminates.
inline bool rows_linearly_independent(const AciMatrix& M,
                                      const std::optional<std::vector<int>>& scope = {}) {
  return row_coefficient_matrix(M, scope).rank() == M.rows();
}

/// Submatrix picking arbitrary row and column index lists (in the given
/// order). Registry keeps parent ids, restricted to appearing indeterminates.
inline AciMatrix submatrix(const AciMatrix& M, const std::vector<int>& rows,
                           const std::vector<int>& cols) {
  std::vector<int> col_pos(M.cols(), -1);
  for (size_t k = 0; k < cols.size(); ++k) {
    require(cols[k] >= 0 && cols[k] < M.cols(), Err::IndexOutOfRange, "column out of range");
    col_pos[cols[k]] = static_cast<int>(k);
  }
  std::vector<AffineForm> entries;
  std::set<int> used;
  for (int i : rows) {
    require(i >= 0 && i < M.rows(), Err::IndexOutOfRange, "row out of range");
    for (int j : cols) {
      entries.push_back(M.entry(i, j));
      for (const auto& [id, c] : M.entry(i, j).terms()) used.insert(id);
    }
  }
  std::vector<Indeterminate> reg;
  for (const auto& x : M.registry())
    if (used.count(x.id)) {
      Indeterminate y = x;
      y.owner_column = col_pos[x.owner_column];
      reg.push_back(y);
    }
  return AciMatrix(static_cast<int>(rows.size()), static_cast<int>(cols.size()), M.field(),
                   std::move(entries), std::move(reg));
}

/// Partial evaluation x_id := v; the indeterminate leaves the registry.
inline AciMatrix substitute(const AciMatrix& M, int id, const Scalar& v) {
  std::vector<AffineForm> entries;
  entries.reserve(static_cast<size_t>(M.rows()) * M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) entries.push_back(M.entry(i, j).substituted(id, v));
  std::vector<Indeterminate> reg;
  for (const auto& x : M.registry())
    if (x.id != id) reg.push_back(x);
  return AciMatrix(M.rows(), M.cols(), M.field(), std::move(entries), std::move(reg));
}

}  // namespace aci
