#pragma once

#include <numeric>
#include <utility>
#include <vector>

#include "aci/factor_sets.hpp"

namespace aci {

/// The WST-decomposition R*M*Q = [W * *; 0 S *; 0 0 T] with W wide FRmR or
/// void/wide-degenerate, S square FmR or void, T tall FCmR or void/tall-
/// degenerate, and S as large as possible: cols(S) = #f_top - #f_bot.
struct WstDecomposition {
  ConstMatrix R;
  std::vector<int> q_sigma;
  AciMatrix arranged;
  int w_rows = 0, w_cols = 0, s_rows = 0, s_cols = 0, t_rows = 0, t_cols = 0;
  AciMatrix W, S, T;
  AciMatrix star_ws, star_wt, star_st;  // blocks (1,2), (1,3), (2,3)
  std::vector<int> f_bot, f_top;
  bool fmr = false;

  int max_rank_formula() const { return w_rows + s_rows + t_cols; }
};

namespace detail {

struct SinkResult {
  ConstMatrix R;
  AciMatrix out;
  int zero_count;
};

/// Sweep with scope = the first `scope_size` columns, then sink the
/// scope-zero rows to the bottom by a stable partition.
inline SinkResult sweep_and_sink(const AciMatrix& M, int scope_size) {
  std::vector<int> scope(scope_size);
  std::iota(scope.begin(), scope.end(), 0);
  SweepResult sw = sweep_bottom_to_top(M, scope);
  const int m = M.rows();
  std::vector<int> perm(m);
  int next = 0;
  for (int i = 0; i < m; ++i)
    if (!sw.zero_rows.count(i)) perm[i] = next++;
  const int zeros = m - next;
  for (int i = 0; i < m; ++i)
    if (sw.zero_rows.count(i)) perm[i] = next++;
  return {ConstMatrix::row_permutation(perm, M.field()).multiply(sw.R),
          permute_rows(sw.swept, perm), zeros};
}

/// old column -> new position: f_bot first, then f_top minus f_bot, then the
/// rest, each group in ascending order.
inline std::vector<int> three_group_sigma(const std::vector<int>& f_bot,
                                          const std::vector<int>& f_top, int n) {
  std::vector<int> sigma(n, -1);
  int next = 0;
  for (int c : f_bot) sigma[c] = next++;
  for (int c : f_top)
    if (sigma[c] < 0) sigma[c] = next++;
  for (int c = 0; c < n; ++c)
    if (sigma[c] < 0) sigma[c] = next++;
  return sigma;
}

inline bool columns_all_zero(const AciMatrix& M, const std::vector<int>& cols) {
  for (int c : cols)
    if (!M.column_is_zero(c)) return false;
  return true;
}

}  // namespace detail

/// Constructs a WST-decomposition: enumerate factor sets (semifactor sets
/// when M is FmR), take f_bot and f_top, and arrange with at most two sweeps,
/// splitting on the FmR status, the shape, and all-zero f_bot columns.
inline WstDecomposition wst_decompose(const AciMatrix& M, const SearchBudget& budget = {}) {
  const int m = M.rows(), n = M.cols();
  const FieldSpec& f = M.field();
  const bool fmr = is_full_max_rank(M, budget);
  FactorLattice lat = enumerate_sets(M, fmr ? SetKind::Semifactor : SetKind::Factor, budget);
  require(!lat.members.empty(), Err::InternalAssertionFailed,
          "every ACI-matrix has a factor or a semifactor set");
  const std::vector<int>&fb = lat.f_bot, &ft = lat.f_top;
  const int h = static_cast<int>(fb.size()), k = static_cast<int>(ft.size());

  ConstMatrix R = ConstMatrix::identity(m, f);
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  AciMatrix A0 = M;
  int r1 = 0, r2 = 0, r3 = 0, c1 = 0, c2 = 0, c3 = 0;

  if (fmr) {
    Shape sh = M.shape();
    if (sh.tag == Shape::Tag::Square) {
      require(h == 0 && k == n, Err::InternalAssertionFailed,
              "square FmR must have f_bot empty and f_top full");
      r2 = m;
      c2 = n;
    } else if (sh.tag == Shape::Tag::Tall) {
      require(h == 0, Err::InternalAssertionFailed, "tall FmR must have f_bot empty");
      if (k == 0) {
        r3 = m;
        c3 = n;
      } else {
        sigma = ColumnSelector(ft, n).sigma();
        A0 = permute_columns(M, sigma);
        detail::SinkResult sk = detail::sweep_and_sink(A0, k);
        R = sk.R;
        A0 = sk.out;
        require(m - sk.zero_count == k, Err::InternalAssertionFailed,
                "Medium zero block must leave a square S");
        r2 = k;
        r3 = m - k;
        c2 = k;
        c3 = n - k;
      }
    } else {  // wide
      require(k == n, Err::InternalAssertionFailed, "wide FmR must have f_top full");
      if (h == n) {
        r1 = m;
        c1 = n;
      } else {
        require(h >= 1, Err::InternalAssertionFailed,
                "wide FmR cannot have an empty semifactor set");
        sigma = ColumnSelector(fb, n).sigma();
        A0 = permute_columns(M, sigma);
        if (detail::columns_all_zero(M, fb)) {
          r2 = m;  // W is wide degenerate 0 x h
          c1 = h;
          c2 = n - h;
        } else {
          detail::SinkResult sk = detail::sweep_and_sink(A0, h);
          R = sk.R;
          A0 = sk.out;
          require(sk.zero_count == n - h, Err::InternalAssertionFailed,
                  "Medium zero block must leave a square S");
          r1 = m - sk.zero_count;
          r2 = sk.zero_count;
          c1 = h;
          c2 = n - h;
        }
      }
    }
  } else {
    require(h >= 1, Err::InternalAssertionFailed, "the empty set is never a factor set");
    sigma = detail::three_group_sigma(fb, ft, n);
    A0 = permute_columns(M, sigma);
    if (detail::columns_all_zero(M, fb)) {
      if (h < k) {
        detail::SinkResult sk = detail::sweep_and_sink(A0, k);
        R = sk.R;
        A0 = sk.out;
        require(m - sk.zero_count == k - h, Err::InternalAssertionFailed,
                "zero-column case must leave a square S");
        r2 = m - sk.zero_count;
        r3 = sk.zero_count;
        c1 = h;
        c2 = k - h;
        c3 = n - k;
      } else {
        r3 = m;
        c1 = h;
        c3 = n - h;
      }
    } else if (h < k) {
      detail::SinkResult first = detail::sweep_and_sink(A0, k);
      detail::SinkResult second = detail::sweep_and_sink(first.out, h);
      R = second.R.multiply(first.R);
      A0 = second.out;
      r1 = m - second.zero_count;
      r3 = first.zero_count;
      r2 = m - r1 - r3;
      c1 = h;
      c2 = k - h;
      c3 = n - k;
      require(r2 == c2, Err::InternalAssertionFailed, "S block must come out square");
    } else {
      detail::SinkResult sk = detail::sweep_and_sink(A0, h);
      R = sk.R;
      A0 = sk.out;
      r1 = m - sk.zero_count;
      r3 = sk.zero_count;
      c1 = h;
      c3 = n - h;
    }
  }

  WstDecomposition d{std::move(R),
                     std::move(sigma),
                     A0,
                     r1,
                     c1,
                     r2,
                     c2,
                     r3,
                     c3,
                     block(A0, 0, r1, 0, c1),
                     block(A0, r1, r1 + r2, c1, c1 + c2),
                     block(A0, r1 + r2, m, c1 + c2, n),
                     block(A0, 0, r1, c1, c1 + c2),
                     block(A0, 0, r1, c1 + c2, n),
                     block(A0, r1, r1 + r2, c1 + c2, n),
                     fb,
                     ft,
                     fmr};

  // Postconditions of the construction; any violation is a bug.
  auto check = [&](bool ok, const char* what) {
    require(ok, Err::InternalAssertionFailed, std::string("WST postcondition failed: ") + what);
  };
  for (int i = r1; i < m; ++i)
    for (int j = 0; j < c1; ++j) check(A0.entry(i, j).is_zero(), "zero block below W");
  for (int i = r1 + r2; i < m; ++i)
    for (int j = c1; j < c1 + c2; ++j) check(A0.entry(i, j).is_zero(), "zero block below S");
  Shape ws = d.W.shape(), ss = d.S.shape(), ts = d.T.shape();
  check(ws.is_void || (ws.tag == Shape::Tag::Wide && is_full_row_max_rank(d.W, budget)),
        "W wide FRmR or void");
  check(ss.is_void || (ss.tag == Shape::Tag::Square && is_full_max_rank(d.S, budget)),
        "S square FmR or void");
  check(ts.is_void || (ts.tag == Shape::Tag::Tall && is_full_col_max_rank(d.T, budget)),
        "T tall FCmR or void");
  check(d.s_cols == k - h, "cols(S) = #f_top - #f_bot");
  check(max_rank(M, budget).first == d.max_rank_formula(),
        "maxRank = rows(W) + rows(S) + cols(T)");
  check(d.R.is_nonsingular(), "R nonsingular");
  return d;
}

/// Recomputes R*M*Q and checks block equality, the zero blocks, the three
/// block predicates, nonsingularity of R, and the maxRank formula.
inline bool verify_wst(const AciMatrix& M, const WstDecomposition& d,
                       const SearchBudget& budget = {}) {
  const int m = M.rows(), n = M.cols();
  if (d.w_rows + d.s_rows + d.t_rows != m || d.w_cols + d.s_cols + d.t_cols != n) return false;
  if (d.R.rows() != m || d.R.cols() != m || !d.R.is_nonsingular()) return false;
  if (!is_valid_permutation(d.q_sigma, n)) return false;

  AciMatrix product = permute_columns(left_multiply(d.R, M), d.q_sigma);
  if (!product.same_entries(d.arranged)) return false;

  const int r1 = d.w_rows, r2 = d.s_rows, c1 = d.w_cols, c2 = d.s_cols;
  for (int i = r1; i < m; ++i)
    for (int j = 0; j < c1; ++j)
      if (!d.arranged.entry(i, j).is_zero()) return false;
  for (int i = r1 + r2; i < m; ++i)
    for (int j = c1; j < c1 + c2; ++j)
      if (!d.arranged.entry(i, j).is_zero()) return false;

  if (!block(d.arranged, 0, r1, 0, c1).same_entries(d.W)) return false;
  if (!block(d.arranged, r1, r1 + r2, c1, c1 + c2).same_entries(d.S)) return false;
  if (!block(d.arranged, r1 + r2, m, c1 + c2, n).same_entries(d.T)) return false;

  Shape ws = d.W.shape(), ss = d.S.shape(), ts = d.T.shape();
  if (!(ws.is_void || (ws.tag == Shape::Tag::Wide && is_full_row_max_rank(d.W, budget))))
    return false;
  if (!(ss.is_void || (ss.tag == Shape::Tag::Square && is_full_max_rank(d.S, budget))))
    return false;
  if (!(ts.is_void || (ts.tag == Shape::Tag::Tall && is_full_col_max_rank(d.T, budget))))
    return false;
  return max_rank(M, budget).first == d.max_rank_formula();
}

}  // namespace aci
