#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aci/matrix.hpp"
#include "aci/polynomial.hpp"

namespace aci {

struct SearchBudget {
  long long max_completions = 1LL << 20;
  std::uint64_t rng_seed = 42;
  int random_tries = 512;
};

enum class RankMethod { Exhaustive, SymbolicWitness, SymbolicOnly };

inline const char* rank_method_name(RankMethod m) {
  switch (m) {
    case RankMethod::Exhaustive: return "exhaustive";
    case RankMethod::SymbolicWitness: return "symbolic+witness";
    case RankMethod::SymbolicOnly: return "symbolic-only";
  }
  return "?";
}

/// Rank, maxRank and minRank of an ACI-matrix over all completions, with
/// witnessing completions where available.
struct RankReport {
  std::set<int> rank_set;
  int max_rank = 0;
  int min_rank = 0;
  std::optional<Completion> max_witness;
  std::optional<Completion> min_witness;
  RankMethod method = RankMethod::Exhaustive;
};

namespace detail {

// Evaluation plan for fast completion ranks: per entry a constant residue and
// (slot, coefficient) pairs, slots indexing the registry in ascending id order.
struct EvalPlan {
  int m, n;
  std::int64_t p;
  struct Entry {
    std::int64_t c;
    std::vector<std::pair<int, std::int64_t>> terms;
  };
  std::vector<Entry> entries;
  std::vector<int> ids;  // slot -> id

  explicit EvalPlan(const AciMatrix& M) : m(M.rows()), n(M.cols()) {
    p = M.field().characteristic();
    for (const auto& x : M.registry()) ids.push_back(x.id);
    entries.reserve(static_cast<size_t>(m) * n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        Entry e;
        e.c = M.entry(i, j).constant().residue();
        for (const auto& [id, c] : M.entry(i, j).terms()) {
          int slot = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
          e.terms.emplace_back(slot, c.residue());
        }
        entries.push_back(std::move(e));
      }
  }

  void evaluate(const std::vector<std::int64_t>& vals, std::vector<std::int64_t>& out) const {
    for (size_t k = 0; k < entries.size(); ++k) {
      std::int64_t v = entries[k].c;
      for (const auto& [slot, c] : entries[k].terms) v += c * vals[slot];
      out[k] = v % p;
    }
  }
};

inline int rank_mod_p(std::vector<std::int64_t>& a, int m, int n, std::int64_t p) {
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int pivot = -1;
    for (int i = r; i < m; ++i)
      if (a[static_cast<size_t>(i) * n + col] % p != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r)
      for (int j = col; j < n; ++j)
        std::swap(a[static_cast<size_t>(pivot) * n + j], a[static_cast<size_t>(r) * n + j]);
    // Normalize pivot row, then eliminate below.
    std::int64_t inv = 1, base = a[static_cast<size_t>(r) * n + col] % p, e = p - 2;
    base = (base % p + p) % p;
    while (e > 0) {
      if (e & 1) inv = inv * base % p;
      base = base * base % p;
      e >>= 1;
    }
    for (int j = col; j < n; ++j) {
      auto& x = a[static_cast<size_t>(r) * n + j];
      x = (x % p + p) % p * inv % p;
    }
    for (int i = r + 1; i < m; ++i) {
      std::int64_t f = (a[static_cast<size_t>(i) * n + col] % p + p) % p;
      if (f == 0) continue;
      for (int j = col; j < n; ++j) {
        auto& x = a[static_cast<size_t>(i) * n + j];
        x = ((x - f * a[static_cast<size_t>(r) * n + j]) % p + p) % p;
      }
    }
    ++r;
  }
  return r;
}

/// GF(2) rank with rows packed into 64-bit words.
inline int rank_gf2(const std::vector<std::int64_t>& a, int m, int n) {
  const int words = (n + 63) / 64;
  std::vector<std::uint64_t> rows(static_cast<size_t>(m) * words, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if ((a[static_cast<size_t>(i) * n + j] & 1) != 0)
        rows[static_cast<size_t>(i) * words + j / 64] |= 1ULL << (j % 64);
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    const int w = col / 64;
    const std::uint64_t bit = 1ULL << (col % 64);
    int pivot = -1;
    for (int i = r; i < m; ++i)
      if (rows[static_cast<size_t>(i) * words + w] & bit) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    for (int k = 0; k < words; ++k)
      std::swap(rows[static_cast<size_t>(pivot) * words + k], rows[static_cast<size_t>(r) * words + k]);
    for (int i = r + 1; i < m; ++i)
      if (rows[static_cast<size_t>(i) * words + w] & bit)
        for (int k = 0; k < words; ++k)
          rows[static_cast<size_t>(i) * words + k] ^= rows[static_cast<size_t>(r) * words + k];
    ++r;
  }
  return r;
}

inline Completion completion_from_digits(const AciMatrix& M, const std::vector<std::int64_t>& vals) {
  Completion c;
  size_t slot = 0;
  for (const auto& x : M.registry()) c.set(x.id, Scalar::from_integer(M.field(), vals[slot++]));
  return c;
}

}  // namespace detail

/// Enumerates every completion over GF(p) in lexicographic order by
/// indeterminate id and collects the exact Rank set. Witnesses are the
/// lexicographically smallest completions attaining the extremes.
inline RankReport rank_set_exhaustive(const AciMatrix& M, const SearchBudget& budget = {}) {
  require(M.field().is_prime_field(), Err::InfiniteField,
          "exhaustive enumeration needs a finite field");
  const int k = static_cast<int>(M.registry().size());
  const std::int64_t p = M.field().characteristic();
  long long total = 1;
  for (int i = 0; i < k; ++i) {
    if (total > budget.max_completions / p) {
      total = budget.max_completions + 1;
      break;
    }
    total *= p;
  }
  require(total <= budget.max_completions, Err::BudgetExceeded,
          "p^k = " + M.field().to_string() + "^" + std::to_string(k) +
              " completions exceed the budget");

  detail::EvalPlan plan(M);
  std::vector<std::int64_t> vals(k, 0), grid(static_cast<size_t>(M.rows()) * M.cols());
  RankReport rep;
  rep.method = RankMethod::Exhaustive;
  const int cap = std::min(M.rows(), M.cols());
  bool first = true;
  while (true) {
    plan.evaluate(vals, grid);
    int r = p == 2 ? detail::rank_gf2(grid, M.rows(), M.cols())
                   : detail::rank_mod_p(grid, M.rows(), M.cols(), p);
    rep.rank_set.insert(r);
    if (first) {
      rep.max_rank = rep.min_rank = r;
      rep.max_witness = rep.min_witness = detail::completion_from_digits(M, vals);
      first = false;
    } else {
      if (r > rep.max_rank) {
        rep.max_rank = r;
        rep.max_witness = detail::completion_from_digits(M, vals);
      }
      if (r < rep.min_rank) {
        rep.min_rank = r;
        rep.min_witness = detail::completion_from_digits(M, vals);
      }
    }
    if (rep.min_rank == 0 && rep.max_rank == cap && static_cast<int>(rep.rank_set.size()) == cap + 1)
      break;  // the set is all of {0, ..., min(m, n)}; nothing new can appear
    // Odometer: last id varies fastest, so enumeration is lexicographic.
    int d = k - 1;
    while (d >= 0 && vals[d] == p - 1) vals[d--] = 0;
    if (d < 0) break;
    ++vals[d];
  }
  return rep;
}

/// Rank of M over the fraction field F(x_1, ..., x_k), by fraction-free
/// Bareiss elimination with exact polynomial arithmetic. Always an upper
/// bound for maxRank; equality holds whenever |F| > min(m, n).
inline int symbolic_rank(const AciMatrix& M) {
  const int m = M.rows(), n = M.cols();
  std::vector<Poly> w;
  w.reserve(static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) w.push_back(Poly::from_affine(M.entry(i, j)));
  auto at = [&](int i, int j) -> Poly& { return w[static_cast<size_t>(i) * n + j]; };
  Poly prev = Poly::constant(Scalar::one(M.field()));
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int pivot = -1;
    for (int i = r; i < m; ++i)
      if (!at(i, col).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r)
      for (int j = col; j < n; ++j) std::swap(at(pivot, j), at(r, j));
    for (int i = r + 1; i < m; ++i) {
      for (int j = col + 1; j < n; ++j)
        at(i, j) = (at(i, j) * at(r, col) - at(i, col) * at(r, j)).exact_div(prev);
      at(i, col) = Poly(M.field());
    }
    prev = at(r, col);
    ++r;
  }
  return r;
}

namespace detail {

/// Deterministic witness values 0, 1, -1, 2, -2, ... (0, 1, 2, ... over GF(p)).
inline Scalar witness_value(const FieldSpec& f, int index) {
  if (f.is_prime_field()) return Scalar::from_integer(f, index % f.characteristic());
  int half = (index + 1) / 2;
  return Scalar::from_integer(f, index % 2 == 1 ? half : -half);
}

}  // namespace detail

/// maxRank with a witnessing completion. Strategy ladder: symbolic rank first;
/// over the rationals a deterministic small-value search pins a witness (one
/// exists because every minor has per-variable degree at most one); over GF(p)
/// with p > min(m, n) a seeded random search runs before falling back to
/// exhaustive enumeration; small fields enumerate within budget.
inline std::pair<int, std::optional<Completion>> max_rank(const AciMatrix& M,
                                                          const SearchBudget& budget = {}) {
  const int u = symbolic_rank(M);
  if (M.registry().empty()) return {u, Completion{}};

  if (!M.field().is_prime_field()) {
    // Fix indeterminates one at a time, keeping the symbolic rank at u.
    const int values = std::min(M.rows(), M.cols()) + 1;
    AciMatrix cur = M;
    Completion wit;
    std::vector<Indeterminate> order(M.registry().begin(), M.registry().end());
    for (const auto& x : order) {
      bool fixed = false;
      for (int t = 0; t < values && !fixed; ++t) {
        Scalar v = detail::witness_value(M.field(), t);
        AciMatrix next = substitute(cur, x.id, v);
        if (symbolic_rank(next) == u) {
          cur = std::move(next);
          wit.set(x.id, v);
          fixed = true;
        }
      }
      require(fixed, Err::InternalAssertionFailed, "rational witness search exhausted its grid");
    }
    require(complete(M, wit).rank() == u, Err::InternalAssertionFailed,
            "rational witness does not attain the symbolic rank");
    return {u, wit};
  }

  const std::int64_t p = M.field().characteristic();
  if (p > std::min(M.rows(), M.cols())) {
    std::mt19937_64 rng(budget.rng_seed);
    std::uniform_int_distribution<std::int64_t> dist(0, p - 1);
    detail::EvalPlan plan(M);
    std::vector<std::int64_t> vals(M.registry().size());
    std::vector<std::int64_t> grid(static_cast<size_t>(M.rows()) * M.cols());
    for (int t = 0; t < budget.random_tries; ++t) {
      for (auto& v : vals) v = dist(rng);
      plan.evaluate(vals, grid);
      int r = p == 2 ? detail::rank_gf2(grid, M.rows(), M.cols())
                     : detail::rank_mod_p(grid, M.rows(), M.cols(), p);
      if (r == u) return {u, detail::completion_from_digits(M, vals)};
    }
  }
  RankReport rep = rank_set_exhaustive(M, budget);
  return {rep.max_rank, rep.max_witness};
}

/// Exact minRank with its lexicographically smallest witness (finite fields).
inline std::pair<int, Completion> min_rank_exhaustive(const AciMatrix& M,
                                                      const SearchBudget& budget = {}) {
  RankReport rep = rank_set_exhaustive(M, budget);
  return {rep.min_rank, *rep.min_witness};
}

/// Full Row maxRank: maxRank(M) = rows(M). By the degenerate conventions a
/// tall degenerate matrix is FRmR and the void is FRmR.
inline bool is_full_row_max_rank(const AciMatrix& M, const SearchBudget& budget = {}) {
  if (M.rows() == 0 || M.cols() == 0) return true;
  return max_rank(M, budget).first == M.rows();
}

/// Full Column maxRank: maxRank(M) = cols(M); wide degenerate and void
/// matrices count as FCmR.
inline bool is_full_col_max_rank(const AciMatrix& M, const SearchBudget& budget = {}) {
  if (M.rows() == 0 || M.cols() == 0) return true;
  return max_rank(M, budget).first == M.cols();
}

/// Full maxRank: some completion has full rank.
inline bool is_full_max_rank(const AciMatrix& M, const SearchBudget& budget = {}) {
  if (M.rows() == 0 || M.cols() == 0) return true;
  return max_rank(M, budget).first == std::min(M.rows(), M.cols());
}

}  // namespace aci
