#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "aci/document.hpp"
#include "aci/factor_sets.hpp"

namespace fixtures {

using namespace aci;

/// Builds a matrix from entry strings, interning indeterminates in reading order.
inline AciMatrix make(const FieldSpec& field, const std::vector<std::vector<std::string>>& grid) {
  RegistryBuilder reg;
  std::vector<AffineForm> entries;
  const int n = grid.empty() ? 0 : static_cast<int>(grid.front().size());
  for (const auto& row : grid)
    for (int j = 0; j < n; ++j) entries.push_back(parse_entry(row[j], field, reg, j));
  return AciMatrix::validate(static_cast<int>(grid.size()), n, field, std::move(entries),
                             reg.list());
}

inline AciMatrix degenerate(const FieldSpec& field, int m, int n) {
  return AciMatrix::validate(m, n, field, {}, {});
}

inline FieldSpec Q() { return FieldSpec::rationals(); }

inline AciMatrix showcase(const FieldSpec& f) {
  return make(f, {{"1", "x1", "y1", "z1", "1"},
                  {"0", "0", "y2", "z2", "t1"},
                  {"0", "0", "0", "z3", "t2"},
                  {"0", "0", "0", "0", "t3"},
                  {"0", "0", "0", "0", "1"}});
}

inline AciMatrix remark_matrix(const FieldSpec& f) {
  return make(f, {{"1", "1", "1", "1"}, {"1", "1", "1", "x"}, {"1", "1", "1", "y"}});
}

inline AciMatrix sweep_example() {
  return make(Q(), {{"x+2", "1", "z"}, {"x+1", "8y", "3z-5"}, {"x", "4y", "z-2"}, {"1", "4y", "2z-3"}});
}

inline AciMatrix identity_matrix(const FieldSpec& f, int n) {
  std::vector<std::vector<std::string>> g(n, std::vector<std::string>(n, "0"));
  for (int i = 0; i < n; ++i) g[i][i] = "1";
  return make(f, g);
}

// The two tall matrices exhibiting disjoint and overlapping semifactor sets.
inline AciMatrix disjoint_semifactor_matrix(const FieldSpec& f) {
  return make(f, {{"1", "0", "x"}, {"0", "1", "y"}, {"0", "0", "1"}, {"0", "0", "1"}});
}

inline AciMatrix overlapping_semifactor_matrix(const FieldSpec& f) {
  return make(f, {{"1", "0", "0"}, {"x", "1", "y"}, {"0", "0", "1"}, {"0", "0", "0"}});
}

/// Same matrix with indeterminates renamed to prefix + id. Keeps ids, so the
/// entry grids are untouched; used to feed compose_block disjoint name groups.
inline AciMatrix renamed(const AciMatrix& M, const std::string& prefix) {
  std::vector<Indeterminate> reg;
  for (Indeterminate x : M.registry()) {
    x.name = prefix + std::to_string(x.id);
    reg.push_back(x);
  }
  std::vector<AffineForm> entries;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) entries.push_back(M.entry(i, j));
  return AciMatrix(M.rows(), M.cols(), M.field(), std::move(entries), std::move(reg));
}

/// Independent oracle: enumerate completions with plain Scalar arithmetic and
/// rank them with the generic field elimination, no shortcuts shared with the
/// engine under test.
inline std::set<int> oracle_rank_set(const AciMatrix& M) {
  std::set<int> out;
  std::vector<Scalar> elems = enumerate_elements(M.field());
  const int k = static_cast<int>(M.registry().size());
  std::vector<int> digits(k, 0);
  while (true) {
    Completion c;
    int slot = 0;
    for (const auto& x : M.registry()) c.set(x.id, elems[digits[slot++]]);
    out.insert(complete(M, c).rank());
    int d = k - 1;
    while (d >= 0 && digits[d] == static_cast<int>(elems.size()) - 1) digits[d--] = 0;
    if (d < 0) break;
    ++digits[d];
  }
  return out;
}

inline int oracle_max_rank(const AciMatrix& M) { return *oracle_rank_set(M).rbegin(); }
inline int oracle_min_rank(const AciMatrix& M) { return *oracle_rank_set(M).begin(); }

/// Definition-level factor/semifactor oracle on a different computational
/// path: the maximal zero-row count for scope F is the dimension of the left
/// kernel of the scope coefficient matrix. Build R from a kernel basis plus
/// complementary unit rows, then check the class and the block predicates
/// with the enumeration oracle. No sweeps, no rank ladder.
inline bool oracle_is_set(const AciMatrix& M, const std::vector<int>& F, SetKind kind) {
  const int m = M.rows(), n = M.cols();
  const FieldSpec& f = M.field();
  ColumnSelector sel(F, n);
  const int s = sel.size();
  ConstMatrix C = row_coefficient_matrix(M, F);

  // Left kernel of C: RREF of C^T, free columns give the basis.
  const int w = C.cols();
  std::vector<std::vector<Scalar>> a(w, std::vector<Scalar>(m, Scalar::zero(f)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < w; ++j) a[j][i] = C.at(i, j);
  std::vector<int> pivot_cols;
  int rr = 0;
  for (int col = 0; col < m && rr < w; ++col) {
    int p = -1;
    for (int i = rr; i < w; ++i)
      if (!a[i][col].is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[rr]);
    Scalar inv = a[rr][col].inverse();
    for (int j = 0; j < m; ++j) a[rr][j] = a[rr][j] * inv;
    for (int i = 0; i < w; ++i) {
      if (i == rr || a[i][col].is_zero()) continue;
      Scalar fac = a[i][col];
      for (int j = 0; j < m; ++j) a[i][j] = a[i][j] - fac * a[rr][j];
    }
    pivot_cols.push_back(col);
    ++rr;
  }
  std::vector<bool> is_pivot(m, false);
  for (int c : pivot_cols) is_pivot[c] = true;
  const int r = m - rr;  // kernel dimension
  ConstMatrix R(m, m, f);
  int at = 0;
  for (int i = 0; i < m; ++i)
    if (is_pivot[i]) R.at(at++, i) = Scalar::one(f);
  for (int free = 0; free < m; ++free) {
    if (is_pivot[free]) continue;
    // Kernel vector: 1 on the free coordinate, solved values on pivots.
    R.at(at, free) = Scalar::one(f);
    for (int k = 0; k < rr; ++k) R.at(at, pivot_cols[k]) = -a[k][free];
    ++at;
  }
  if (!R.is_nonsingular()) return false;
  AciMatrix arranged = permute_columns(left_multiply(R, M), sel);
  ZeroBlockReport zb = classify_zero_block(arranged, r, s);
  if (!zb.block_zero) return false;
  if (zb.cls != (kind == SetKind::Factor ? ZeroBlockClass::Big : ZeroBlockClass::Medium))
    return false;
  AciMatrix A = block(arranged, 0, m - r, 0, s);
  AciMatrix Cb = block(arranged, m - r, m, s, n);
  bool a_full = A.rows() == 0 || A.cols() == 0 || oracle_max_rank(A) == A.rows();
  bool c_full = Cb.rows() == 0 || Cb.cols() == 0 || oracle_max_rank(Cb) == Cb.cols();
  return a_full && c_full;
}

struct RandomAci {
  std::mt19937_64 rng;

  explicit RandomAci(std::uint64_t seed) : rng(seed) {}

  int uniform(int lo, int hi) {  // inclusive
    return static_cast<int>(std::uniform_int_distribution<int>(lo, hi)(rng));
  }

  Scalar scalar(const FieldSpec& f) {
    if (f.is_prime_field()) return Scalar::from_integer(f, uniform(0, f.characteristic() - 1));
    return Scalar::from_integer(f, uniform(-3, 3));
  }

  Scalar nonzero_scalar(const FieldSpec& f) {
    while (true) {
      Scalar s = scalar(f);
      if (!s.is_zero()) return s;
    }
  }

  /// Random ACI-matrix: each indeterminate is assigned an owner column, each
  /// entry mixes a constant with its column's indeterminates.
  AciMatrix matrix(const FieldSpec& f, int m, int n, int max_indets) {
    const int k = n == 0 || m == 0 ? 0 : uniform(0, max_indets);
    std::vector<Indeterminate> reg;
    for (int i = 0; i < k; ++i) reg.push_back({i, "v" + std::to_string(i), uniform(0, n - 1)});
    std::vector<AffineForm> entries;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        AffineForm e(uniform(0, 2) == 0 ? Scalar::zero(f) : scalar(f));
        for (const auto& x : reg)
          if (x.owner_column == j && uniform(0, 2) == 0) e.add_term(x.id, scalar(f));
        entries.push_back(std::move(e));
      }
    return AciMatrix::validate(m, n, f, std::move(entries), std::move(reg));
  }

  /// Random nonsingular matrix as a product of elementary operations.
  ConstMatrix nonsingular(const FieldSpec& f, int n) {
    ConstMatrix R = ConstMatrix::identity(n, f);
    for (int t = 0; t < 3 * n + 2; ++t) {
      int i = uniform(0, n - 1), j = uniform(0, n - 1);
      switch (uniform(0, 2)) {
        case 0:
          if (i != j) R.add_multiple_of_row(i, j, scalar(f));
          break;
        case 1:
          R.scale_row(i, nonzero_scalar(f));
          break;
        default:
          if (i != j)
            for (int c = 0; c < n; ++c) std::swap(R.at(i, c), R.at(j, c));
      }
    }
    return R;
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
  }
};

/// Constant-rank template generators. Stars marked fresh carry one brand-new
/// indeterminate each (with a random constant offset); the placement scheme
/// keeps the factor-set lattice of the generated matrix pinned to the
/// template's own zero block, so the canonical (r, s) round-trips exactly.
struct TemplateGen {
  RandomAci& rnd;
  FieldSpec f;
  std::vector<Indeterminate> reg;
  std::vector<AffineForm> grid;
  int m = 0, n = 0;

  TemplateGen(RandomAci& r, const FieldSpec& field, int rows, int cols)
      : rnd(r), f(field), m(rows), n(cols) {
    grid.assign(static_cast<size_t>(m) * n, AffineForm::zero(f));
  }

  AffineForm& at(int i, int j) { return grid[static_cast<size_t>(i) * n + j]; }

  void put_const(int i, int j) { at(i, j) = AffineForm(rnd.scalar(f)); }

  void put_fresh(int i, int j) {
    int id = static_cast<int>(reg.size());
    reg.push_back({id, "s" + std::to_string(id), j});
    AffineForm e(rnd.scalar(f));
    e.add_term(id, rnd.nonzero_scalar(f));
    at(i, j) = e;
  }

  void one(int i, int j) { at(i, j) = AffineForm(Scalar::one(f)); }

  /// Unit upper triangular block at (i0, j0) with constant stars above.
  void triangle(int i0, int j0, int size) {
    for (int d = 0; d < size; ++d) {
      one(i0 + d, j0 + d);
      for (int dd = d + 1; dd < size; ++dd) put_const(i0 + d, j0 + dd);
    }
  }

  AciMatrix finish() { return AciMatrix::validate(m, n, f, grid, reg); }

  int fresh_count() const { return static_cast<int>(reg.size()); }
};

/// Case (iv) template: top-left (m-r) triangle, r x s zero block, bottom
/// right [stars; triangle]; fresh stars exactly where the lattice proof
/// needs them (top rows across the extra zero-block columns, star rows of
/// the bottom-right block).
inline AciMatrix template_deficient(RandomAci& rnd, const FieldSpec& f, int m, int n, int r,
                                    int s) {
  const int a = m - r, b = n - s;
  TemplateGen g(rnd, f, m, n);
  g.triangle(0, 0, a);
  for (int i = 0; i < a; ++i) {
    for (int j = a; j < s; ++j) g.put_fresh(i, j);
    for (int j = s; j < n; ++j) g.put_const(i, j);
  }
  for (int i = a; i < a + (r - b); ++i)
    for (int j = s; j < n; ++j) g.put_fresh(i, j);
  g.triangle(a + (r - b), s, b);
  return g.finish();
}

inline AciMatrix template_wide(RandomAci& rnd, const FieldSpec& f, int m, int n) {
  TemplateGen g(rnd, f, m, n);
  g.triangle(0, 0, m);
  for (int i = 0; i < m; ++i)
    for (int j = m; j < n; ++j)
      if (rnd.uniform(0, 1))
        g.put_fresh(i, j);
      else
        g.put_const(i, j);
  return g.finish();
}

inline AciMatrix template_square(RandomAci& rnd, const FieldSpec& f, int n) {
  TemplateGen g(rnd, f, n, n);
  for (int d = 0; d < n; ++d) {
    g.one(d, d);
    for (int dd = d + 1; dd < n; ++dd)
      if (rnd.uniform(0, 1))
        g.put_fresh(d, dd);
      else
        g.put_const(d, dd);
  }
  return g.finish();
}

inline AciMatrix template_tall(RandomAci& rnd, const FieldSpec& f, int m, int n) {
  TemplateGen g(rnd, f, m, n);
  for (int i = 0; i < m - n; ++i)
    for (int j = 0; j < n; ++j)
      if (rnd.uniform(0, 1))
        g.put_fresh(i, j);
      else
        g.put_const(i, j);
  g.triangle(m - n, 0, n);
  return g.finish();
}

/// Refined template [W * *; 0 S *; 0 0 T] with W = [triangle | fresh],
/// S a triangle, T = [fresh rows; triangle]; remaining stars constant.
inline AciMatrix template_refined(RandomAci& rnd, const FieldSpec& f, int wr, int wc, int sz,
                                  int tr, int tc) {
  const int m = wr + sz + tr, n = wc + sz + tc;
  TemplateGen g(rnd, f, m, n);
  g.triangle(0, 0, wr);
  for (int i = 0; i < wr; ++i) {
    for (int j = wr; j < wc; ++j) g.put_fresh(i, j);
    for (int j = wc; j < n; ++j) g.put_const(i, j);
  }
  g.triangle(wr, wc, sz);
  for (int i = wr; i < wr + sz; ++i)
    for (int j = wc + sz; j < n; ++j) g.put_const(i, j);
  for (int i = wr + sz; i < wr + sz + (tr - tc); ++i)
    for (int j = wc + sz; j < n; ++j) g.put_fresh(i, j);
  g.triangle(wr + sz + (tr - tc), wc + sz, tc);
  return g.finish();
}

}  // namespace fixtures
