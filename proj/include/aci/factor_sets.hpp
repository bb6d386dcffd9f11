#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "aci/sweep.hpp"

namespace aci {

enum class SetKind { Factor, Semifactor };

inline const char* set_kind_name(SetKind k) { return k == SetKind::Factor ? "factor" : "semifactor"; }

/// An F-decomposition (or F-semidecomposition): arranged = R * M * Q_F with a
/// bottom-left r x s zero block (s = #F), A FRmR and C FCmR. The blocks refer
/// to arranged = [A B; 0 C].
struct FDecomposition {
  std::vector<int> F;
  ConstMatrix R;
  std::vector<int> q_sigma;
  AciMatrix arranged;
  int r = 0, s = 0;
  SetKind kind = SetKind::Factor;
  AciMatrix A, B, C;
};

/// Result of testing one column subset: either the decomposition or the
/// condition that failed. A refusal is an answer, not an error.
struct FSetOutcome {
  std::optional<FDecomposition> dec;
  std::string refusal;

  bool accepted() const { return dec.has_value(); }
};

namespace detail {

/// Sweeps with respect to F after moving F to the front, then sinks the
/// scope-zero rows to the bottom by a stable partition. The sweep leaves the
/// surviving scope-restricted rows linearly independent, which makes this one
/// arrangement decisive: F is a factor (semifactor) set iff it classifies
/// Big (Medium) with A FRmR and C FCmR.
inline FSetOutcome test_column_set(const AciMatrix& M, const std::vector<int>& F, SetKind kind,
                                   const SearchBudget& budget) {
  const int m = M.rows(), n = M.cols();
  ColumnSelector sel(F, n);
  const int s = sel.size();
  AciMatrix P = permute_columns(M, sel);
  std::vector<int> scope(s);
  std::iota(scope.begin(), scope.end(), 0);
  SweepResult sw = sweep_bottom_to_top(P, scope);

  std::vector<int> perm(m);  // old row -> new position, stable partition
  int next = 0;
  for (int i = 0; i < m; ++i)
    if (!sw.zero_rows.count(i)) perm[i] = next++;
  const int r = m - next;
  for (int i = 0; i < m; ++i)
    if (sw.zero_rows.count(i)) perm[i] = next++;

  FDecomposition d{sel.f(),
                   ConstMatrix::row_permutation(perm, M.field()).multiply(sw.R),
                   sel.sigma(),
                   permute_rows(sw.swept, perm),
                   r,
                   s,
                   kind,
                   AciMatrix(0, 0, M.field(), {}, {}),
                   AciMatrix(0, 0, M.field(), {}, {}),
                   AciMatrix(0, 0, M.field(), {}, {})};
  d.A = block(d.arranged, 0, m - r, 0, s);
  d.B = block(d.arranged, 0, m - r, s, n);
  d.C = block(d.arranged, m - r, m, s, n);

  ZeroBlockReport zb = classify_zero_block(d.arranged, r, s);
  require(zb.block_zero, Err::InternalAssertionFailed, "sweep left a nonzero bottom block");
  const ZeroBlockClass want =
      kind == SetKind::Factor ? ZeroBlockClass::Big : ZeroBlockClass::Medium;
  FSetOutcome out;
  if (zb.cls != want) {
    out.refusal = std::string("zero block is ") + zero_block_class_name(zb.cls) + ", needs " +
                  zero_block_class_name(want);
    return out;
  }
  if (!is_full_row_max_rank(d.A, budget)) {
    out.refusal = "A is not FRmR";
    return out;
  }
  if (!is_full_col_max_rank(d.C, budget)) {
    out.refusal = "C is not FCmR";
    return out;
  }
  out.dec = std::move(d);
  return out;
}

}  // namespace detail

/// Tests whether F is a factor set of M (Big zero block, A FRmR, C FCmR).
inline FSetOutcome is_factor_set(const AciMatrix& M, const std::vector<int>& F,
                                 const SearchBudget& budget = {}) {
  return detail::test_column_set(M, F, SetKind::Factor, budget);
}

/// Tests whether F is a semifactor set of M (Medium zero block, A FRmR, C FCmR).
inline FSetOutcome is_semifactor_set(const AciMatrix& M, const std::vector<int>& F,
                                     const SearchBudget& budget = {}) {
  return detail::test_column_set(M, F, SetKind::Semifactor, budget);
}

constexpr int kMaxEnumerationColumns = 12;

/// The lattice of all factor (or semifactor) sets, found by exhausting the
/// 2^n column subsets. f_bot and f_top are the intersection and union of the
/// members; the members are closed under union and intersection, so both
/// bounds are members themselves when any exist.
struct FactorLattice {
  SetKind kind = SetKind::Factor;
  std::vector<std::vector<int>> members;  // sorted by size, then lexicographically
  std::vector<int> f_bot, f_top;
  bool fmr = false;
  bool prop_consistent = false;  // members nonempty exactly when the kind allows
};

inline FactorLattice enumerate_sets(const AciMatrix& M, SetKind kind,
                                    const SearchBudget& budget = {}) {
  const int n = M.cols();
  require(n <= kMaxEnumerationColumns, Err::TooManyColumns,
          "subset enumeration is limited to " + std::to_string(kMaxEnumerationColumns) +
              " columns");
  FactorLattice lat;
  lat.kind = kind;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> F;
    for (int c = 0; c < n; ++c)
      if (mask & (1u << c)) F.push_back(c);
    if (detail::test_column_set(M, F, kind, budget).accepted()) lat.members.push_back(F);
  }
  std::sort(lat.members.begin(), lat.members.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  if (!lat.members.empty()) {
    lat.f_bot = lat.members.front();
    lat.f_top = lat.members.front();
    for (const auto& F : lat.members) {
      std::vector<int> nb, nt;
      std::set_intersection(lat.f_bot.begin(), lat.f_bot.end(), F.begin(), F.end(),
                            std::back_inserter(nb));
      std::set_union(lat.f_top.begin(), lat.f_top.end(), F.begin(), F.end(),
                     std::back_inserter(nt));
      lat.f_bot = std::move(nb);
      lat.f_top = std::move(nt);
    }
  }
  lat.fmr = is_full_max_rank(M, budget);
  const bool expect_nonempty = kind == SetKind::Factor ? !lat.fmr : lat.fmr;
  lat.prop_consistent = lat.members.empty() != expect_nonempty;
  return lat;
}

/// A witness for maxRank(M) <= rho: nonsingular R and permutation Q with a
/// bottom-left r x s zero block in R*M*Q and rho = (m-r) + (n-s).
struct ZeroBlockWitness {
  ConstMatrix R;
  std::vector<int> q_sigma;
  AciMatrix arranged;
  int r = 0, s = 0;
};

/// Constructs the witness via a factor set, shrinking its zero block to meet
/// the arithmetic constraint. Refusal (nullopt) means maxRank(M) > rho.
inline std::optional<ZeroBlockWitness> zero_block_witness(const AciMatrix& M, int rho,
                                                          const SearchBudget& budget = {}) {
  const int m = M.rows(), n = M.cols();
  require(0 <= rho && rho < std::min(m, n), Err::IndexOutOfRange,
          "rho must satisfy 0 <= rho < min(m, n)");
  if (max_rank(M, budget).first > rho) return std::nullopt;
  FactorLattice lat = enumerate_sets(M, SetKind::Factor, budget);
  require(!lat.members.empty(), Err::InternalAssertionFailed,
          "a matrix with maxRank below min(m, n) must have a factor set");
  FSetOutcome out = is_factor_set(M, lat.members.front(), budget);
  require(out.accepted(), Err::InternalAssertionFailed, "enumerated member failed its retest");
  const FDecomposition& d = *out.dec;
  const int need = m + n - rho;  // r + s for the reported block
  int r = std::min(d.r, need - 1);
  int s = need - r;
  require(r >= 1 && s >= 1 && s <= d.s, Err::InternalAssertionFailed,
          "zero block cannot be padded to the requested rho");
  return ZeroBlockWitness{d.R, d.q_sigma, d.arranged, r, s};
}

}  // namespace aci
