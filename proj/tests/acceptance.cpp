// Acceptance suite: one pass/fail line per criterion. Every expected value is
// pinned here; tolerances are exact equality throughout.

#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include "aci/canonical.hpp"
#include "fixtures.hpp"

using namespace aci;
using fixtures::make;

namespace {

int g_failures = 0;

void criterion(int k, const std::string& what, const std::function<bool()>& body) {
  bool ok = false;
  std::string note;
  try {
    ok = body();
  } catch (const std::exception& e) {
    note = std::string(" (") + e.what() + ")";
  }
  std::printf("CRITERION %2d: %s  %s%s\n", k, ok ? "PASS" : "FAIL", what.c_str(), note.c_str());
  if (!ok) ++g_failures;
}

bool expect(bool cond, const char* what) {
  if (!cond) std::printf("    failed: %s\n", what);
  return cond;
}

// 1. Showcase 5x5 example: maxRank 4 symbolically over the rationals and by
//    exhausting the 2^9 and 3^9 completions over GF(2) and GF(3).
bool c1() {
  bool ok = true;
  ok &= expect(symbolic_rank(fixtures::showcase(fixtures::Q())) == 4, "symbolic rank over Q");
  ok &= expect(max_rank(fixtures::showcase(fixtures::Q())).first == 4, "maxRank ladder over Q");
  RankReport g2 = rank_set_exhaustive(fixtures::showcase(FieldSpec::gf(2)));
  ok &= expect(g2.method == RankMethod::Exhaustive && g2.max_rank == 4, "exhaustive over GF(2)");
  RankReport g3 = rank_set_exhaustive(fixtures::showcase(FieldSpec::gf(3)));
  ok &= expect(g3.method == RankMethod::Exhaustive && g3.max_rank == 4, "exhaustive over GF(3)");
  return ok;
}

// 2. Showcase WST decomposition: block dimensions 1x2, 2x2, 2x1, formula 4,
//    and the verifier accepts.
bool c2() {
  AciMatrix M = fixtures::showcase(fixtures::Q());
  WstDecomposition d = wst_decompose(M);
  bool ok = true;
  ok &= expect(d.w_rows == 1 && d.w_cols == 2, "W is 1x2");
  ok &= expect(d.s_rows == 2 && d.s_cols == 2, "S is 2x2");
  ok &= expect(d.t_rows == 2 && d.t_cols == 1, "T is 2x1");
  ok &= expect(d.max_rank_formula() == 4, "rows(W)+rows(S)+cols(T) = 4");
  ok &= expect(verify_wst(M, d), "verify_wst");
  return ok;
}

// 3. Remark matrix: independent rows, maxRank 2, not FRmR, over Q and GF(5).
bool c3() {
  bool ok = true;
  for (const FieldSpec& f : {fixtures::Q(), FieldSpec::gf(5)}) {
    AciMatrix M = fixtures::remark_matrix(f);
    ok &= expect(rows_linearly_independent(M), "independent rows");
    ok &= expect(max_rank(M).first == 2, "maxRank 2");
    ok &= expect(!is_full_row_max_rank(M), "not FRmR");
  }
  return ok;
}

// 4. Sweep example: both displayed sweeps reproduced entry for entry over Q,
//    with the final entry read as 2z-3.
bool c4() {
  AciMatrix M = fixtures::sweep_example();
  bool ok = true;
  SweepResult full = sweep_bottom_to_top(M);
  ok &= expect(full.swept.same_entries(make(
                   fixtures::Q(),
                   {{"x+2", "1", "z"}, {"0", "0", "0"}, {"x", "4y", "z-2"}, {"1", "4y", "2z-3"}})),
               "full-scope sweep display");
  SweepResult f2 = sweep_bottom_to_top(M, std::vector<int>{1});
  ok &= expect(f2.swept.same_entries(make(fixtures::Q(), {{"x+2", "1", "z"},
                                                          {"x-1", "0", "1-z"},
                                                          {"x-1", "0", "1-z"},
                                                          {"1", "4y", "2z-3"}})),
               "scope {2} sweep display");
  ok &= expect(left_multiply(full.R, M).same_entries(full.swept), "R accounts for the sweep");
  if (ok)
    std::printf("    note: bottom row is never an elimination target; final entry pinned to 2z-3\n");
  return ok;
}

// 5. Zero-block witness equivalence on 200 random matrices: for each
//    rho < min(m, n), a witness exists iff the exhaustive maxRank is <= rho.
bool c5() {
  fixtures::RandomAci rnd(101);
  bool ok = true;
  for (int t = 0; t < 200; ++t) {
    FieldSpec f = t % 2 ? FieldSpec::gf(2) : FieldSpec::gf(3);
    int m = rnd.uniform(1, 4), n = rnd.uniform(1, 4);
    AciMatrix M = rnd.matrix(f, m, n, 4);
    int oracle = fixtures::oracle_max_rank(M);
    for (int rho = 0; rho < std::min(m, n); ++rho) {
      auto wit = zero_block_witness(M, rho);
      if (wit.has_value() != (oracle <= rho)) {
        std::printf("    mismatch at trial %d rho %d\n", t, rho);
        return false;
      }
      if (wit) {
        ok &= expect(wit->r >= 1 && wit->s >= 1, "positive r, s");
        ok &= expect((m - wit->r) + (n - wit->s) == rho, "rho = (m-r)+(n-s)");
        ok &= expect(classify_zero_block(wit->arranged, wit->r, wit->s).block_zero, "zero block");
        ok &= expect(wit->R.is_nonsingular(), "R nonsingular");
        if (!ok) return false;
      }
    }
  }
  return ok;
}

// 6. maxRank additivity on 200 composed blocks with Big or Medium zero
//    blocks: equality with rows(A)+cols(C) iff A FRmR and C FCmR.
bool c6() {
  fixtures::RandomAci rnd(103);
  int seen = 0;
  for (int t = 0; t < 4000 && seen < 200; ++t) {
    FieldSpec f = t % 2 ? FieldSpec::gf(2) : FieldSpec::gf(3);
    int ar = rnd.uniform(1, 2), ac = rnd.uniform(1, 3);
    int cr = rnd.uniform(1, 3), cc = rnd.uniform(1, 2);
    if (cr + ac < std::max(ar + cr, ac + cc)) continue;  // zero block too small
    AciMatrix A = fixtures::renamed(rnd.matrix(f, ar, ac, 2), "a");
    AciMatrix C = fixtures::renamed(rnd.matrix(f, cr, cc, 2), "c");
    AciMatrix B = fixtures::renamed(rnd.matrix(f, ar, cc, 2), "b");
    AciMatrix M = compose_block(A, B, C);
    ++seen;
    bool full = is_full_row_max_rank(A) && is_full_col_max_rank(C);
    bool equal = fixtures::oracle_max_rank(M) == ar + cc;
    if (full != equal) {
      std::printf("    mismatch at trial %d\n", t);
      return false;
    }
  }
  return expect(seen == 200, "generated 200 composed fixtures");
}

// 7. Factor/semifactor lattices on 100 random matrices: existence matches
//    FmR status, closure under union and intersection, pairwise overlap for
//    factor sets (and semifactor sets of wide matrices), and the two tall
//    fixtures exhibiting the disjoint semifactor sets {1} and {2}.
bool c7() {
  fixtures::RandomAci rnd(107);
  for (int t = 0; t < 100; ++t) {
    FieldSpec f = t % 2 ? FieldSpec::gf(2) : FieldSpec::gf(3);
    AciMatrix M = rnd.matrix(f, rnd.uniform(1, 4), rnd.uniform(1, 5), 3);
    for (SetKind kind : {SetKind::Factor, SetKind::Semifactor}) {
      FactorLattice lat = enumerate_sets(M, kind);
      if (!lat.prop_consistent) {
        std::printf("    existence/FmR mismatch at trial %d\n", t);
        return false;
      }
      std::set<std::vector<int>> members(lat.members.begin(), lat.members.end());
      for (const auto& X : lat.members)
        for (const auto& Y : lat.members) {
          std::vector<int> u, i;
          std::set_union(X.begin(), X.end(), Y.begin(), Y.end(), std::back_inserter(u));
          std::set_intersection(X.begin(), X.end(), Y.begin(), Y.end(), std::back_inserter(i));
          if (!members.count(u) || !members.count(i)) {
            std::printf("    closure failure at trial %d\n", t);
            return false;
          }
          if (kind == SetKind::Factor && i.empty()) {
            std::printf("    disjoint factor sets at trial %d\n", t);
            return false;
          }
          if (kind == SetKind::Semifactor && M.shape().tag == Shape::Tag::Wide && i.empty()) {
            std::printf("    disjoint semifactor sets on a wide matrix at trial %d\n", t);
            return false;
          }
        }
    }
  }
  bool ok = true;
  AciMatrix T1 = fixtures::disjoint_semifactor_matrix(fixtures::Q());
  ok &= expect(is_semifactor_set(T1, {0}).accepted() && is_semifactor_set(T1, {1}).accepted(),
               "disjoint semifactor sets {1}, {2} on the tall example");
  AciMatrix T2 = fixtures::overlapping_semifactor_matrix(fixtures::Q());
  ok &= expect(is_semifactor_set(T2, {0, 1}).accepted() && is_semifactor_set(T2, {1, 2}).accepted(),
               "overlapping semifactor sets on the second tall example");
  return ok;
}

// 8. WST invariant-level uniqueness: 50 random matrices, 5 random
//    re-equivalencings each; block dimensions and block Rank sets agree, and
//    the maxRank formula matches the exhaustive oracle.
bool c8() {
  fixtures::RandomAci rnd(109);
  for (int t = 0; t < 50; ++t) {
    FieldSpec f = t % 2 ? FieldSpec::gf(2) : FieldSpec::gf(3);
    AciMatrix M = rnd.matrix(f, rnd.uniform(1, 3), rnd.uniform(1, 3), 3);
    WstDecomposition base = wst_decompose(M);
    if (base.max_rank_formula() != fixtures::oracle_max_rank(M)) {
      std::printf("    maxRank formula mismatch at trial %d\n", t);
      return false;
    }
    auto wsets = fixtures::oracle_rank_set(base.W);
    auto ssets = fixtures::oracle_rank_set(base.S);
    auto tsets = fixtures::oracle_rank_set(base.T);
    for (int e = 0; e < 5; ++e) {
      AciMatrix N = permute_columns(left_multiply(rnd.nonsingular(f, M.rows()), M),
                                    rnd.permutation(M.cols()));
      WstDecomposition d = wst_decompose(N);
      bool same = d.w_rows == base.w_rows && d.w_cols == base.w_cols &&
                  d.s_rows == base.s_rows && d.s_cols == base.s_cols &&
                  d.t_rows == base.t_rows && d.t_cols == base.t_cols &&
                  fixtures::oracle_rank_set(d.W) == wsets &&
                  fixtures::oracle_rank_set(d.S) == ssets &&
                  fixtures::oracle_rank_set(d.T) == tsets;
      if (!same) {
        std::printf("    invariant mismatch at trial %d re-equivalencing %d\n", t, e);
        return false;
      }
    }
  }
  return true;
}

// 9. Canonical-form round trip on 100 template-generated constantRank
//    matrices over GF(p), p >= max(m, n+1): detection with the template rho,
//    tag and (r, s) recovery, verifier acceptance. Conversely, 100 random
//    non-constantRank matrices are rejected with witness pairs.
bool c9() {
  fixtures::RandomAci rnd(113);
  SearchBudget budget;
  budget.max_completions = 1LL << 22;
  int tag_counts[6] = {0, 0, 0, 0, 0, 0};
  int made = 0;
  while (made < 100) {
    FieldSpec f = made % 7 == 3 ? FieldSpec::gf(11) : FieldSpec::gf(7);
    const int cap = f.characteristic() == 7 ? 7 : 5;  // keep p^k inside the budget
    const int kind = made % 5;
    AciMatrix M = fixtures::identity_matrix(f, 1);
    FormTag want = FormTag::SquareII;
    int want_rho = 0, want_r = 0, want_s = 0;
    if (kind == 0) {
      int m = rnd.uniform(1, 4), n = rnd.uniform(m + 1, 5);
      M = fixtures::template_wide(rnd, f, m, n);
      want = FormTag::WideI;
      want_rho = m;
    } else if (kind == 1) {
      int n = rnd.uniform(1, 5);
      M = fixtures::template_square(rnd, f, n);
      want = FormTag::SquareII;
      want_rho = n;
    } else if (kind == 2) {
      int n = rnd.uniform(1, 4), m = rnd.uniform(n + 1, 5);
      M = fixtures::template_tall(rnd, f, m, n);
      want = FormTag::TallIII;
      want_rho = n;
    } else if (kind == 3) {
      int m = rnd.uniform(2, 5), n = rnd.uniform(2, 5);
      int rho = rnd.uniform(1, std::min(m, n) - 1);
      int r = rnd.uniform(std::max(1, m + n - rho - n), std::min(m, m + n - rho - 1));
      int s = m + n - rho - r;
      int a = m - r, b = n - s;
      if (a * (s - a) + (r - b) * b > cap) continue;
      M = fixtures::template_deficient(rnd, f, m, n, r, s);
      want = FormTag::DeficientIV;
      want_rho = rho;
      want_r = r;
      want_s = s;
    } else {
      int wr = rnd.uniform(0, 1), sz = rnd.uniform(1, 2), tcc = rnd.uniform(0, 1);
      int wc = wr == 0 ? rnd.uniform(0, 2) : wr + rnd.uniform(1, 2);
      int trr = tcc == 0 ? rnd.uniform(0, 2) : tcc + rnd.uniform(1, 2);
      if (wr == 0 && wc == 0 && tcc == 0 && trr == 0) continue;
      if (wr * (wc - wr) + (trr - tcc) * tcc > cap) continue;
      M = fixtures::template_refined(rnd, f, wr, wc, sz, trr, tcc);
      if (M.rows() == 0 || M.cols() == 0 || M.is_zero_matrix()) continue;
      want_rho = wr + sz + tcc;
      const int m = M.rows(), n = M.cols();
      want = want_rho == m ? (m == n ? FormTag::SquareII : FormTag::WideI)
                           : (want_rho == n ? FormTag::TallIII : FormTag::DeficientIV);
      want_r = sz + trr;
      want_s = wc;
      CanonicalForm ref = refined_canonical_form(M, budget);
      if (ref.tag != FormTag::RefinedWst || !verify_canonical_form(M, ref, budget)) {
        std::printf("    refined form failed on a refined template\n");
        return false;
      }
    }
    if (static_cast<int>(M.registry().size()) > cap) continue;
    ++made;
    ConstantRankResult res = is_constant_rank(M, budget);
    if (!res.constant || *res.rho != want_rho) {
      std::printf("    detection failed at fixture %d (kind %d)\n", made, kind);
      return false;
    }
    CanonicalForm cf = canonical_form(M, budget);
    if (cf.tag != want) {
      std::printf("    tag mismatch at fixture %d: got %s\n", made, form_tag_name(cf.tag));
      return false;
    }
    if (cf.rho != want_rho) return false;
    if (want == FormTag::DeficientIV && (cf.r != want_r || cf.s != want_s)) {
      std::printf("    (r,s) mismatch at fixture %d: got (%d,%d) want (%d,%d)\n", made, cf.r,
                  cf.s, want_r, want_s);
      return false;
    }
    if (!verify_canonical_form(M, cf, budget)) {
      std::printf("    verifier rejected fixture %d\n", made);
      return false;
    }
    tag_counts[static_cast<int>(cf.tag)]++;
  }
  std::printf("    tags seen: wide-i %d, square-ii %d, tall-iii %d, deficient-iv %d\n",
              tag_counts[static_cast<int>(FormTag::WideI)],
              tag_counts[static_cast<int>(FormTag::SquareII)],
              tag_counts[static_cast<int>(FormTag::TallIII)],
              tag_counts[static_cast<int>(FormTag::DeficientIV)]);
  if (tag_counts[static_cast<int>(FormTag::DeficientIV)] < 10) {
    std::printf("    too few deficient-iv fixtures generated\n");
    return false;
  }
  int rejected = 0;
  for (int t = 0; t < 4000 && rejected < 100; ++t) {
    FieldSpec f = t % 3 == 0 ? FieldSpec::gf(2) : t % 3 == 1 ? FieldSpec::gf(3) : FieldSpec::gf(5);
    AciMatrix M = rnd.matrix(f, rnd.uniform(1, 4), rnd.uniform(1, 4), 4);
    ConstantRankResult res = is_constant_rank(M);
    if (res.constant) continue;
    ++rejected;
    if (!res.witnesses) return false;
    if (complete(M, res.witnesses->low).rank() != res.witnesses->low_rank) return false;
    if (complete(M, res.witnesses->high).rank() != res.witnesses->high_rank) return false;
    if (res.witnesses->low_rank >= res.witnesses->high_rank) return false;
  }
  return expect(rejected == 100, "found 100 non-constantRank rejections");
}

// 10. Oracle consistency: symbolic rank dominates the exhaustive maxRank on
//     every random fixture, with equality whenever p > min(m, n).
bool c10() {
  fixtures::RandomAci rnd(127);
  for (int t = 0; t < 120; ++t) {
    std::uint32_t ps[] = {2, 3, 5, 7};
    FieldSpec f = FieldSpec::gf(ps[t % 4]);
    int m = rnd.uniform(1, 4), n = rnd.uniform(1, 4);
    AciMatrix M = rnd.matrix(f, m, n, 4);
    int sym = symbolic_rank(M);
    int ex = rank_set_exhaustive(M).max_rank;
    if (sym < ex) {
      std::printf("    symbolic < exhaustive at trial %d\n", t);
      return false;
    }
    if (static_cast<int>(f.characteristic()) > std::min(m, n) && sym != ex) {
      std::printf("    equality expected at trial %d\n", t);
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  criterion(1, "showcase example maxRank 4 (symbolic over Q; exhaustive over GF(2), GF(3))", c1);
  criterion(2, "showcase WST decomposition: blocks 1x2, 2x2, 2x1 and verified", c2);
  criterion(3, "remark matrix: independent rows, maxRank 2, not FRmR (Q, GF(5))", c3);
  criterion(4, "sweep example reproduced entry for entry (both scopes)", c4);
  criterion(5, "zero-block witness iff exhaustive maxRank <= rho (200 random)", c5);
  criterion(6, "maxRank additivity iff A FRmR and C FCmR (200 composed)", c6);
  criterion(7, "factor/semifactor lattices: existence, closure, overlap (100 random)", c7);
  criterion(8, "WST uniqueness invariants under re-equivalencing (50 x 5)", c8);
  criterion(9, "canonical form round trip (100 templates) and 100 rejections", c9);
  criterion(10, "symbolic rank dominates exhaustive maxRank; equality for p > min(m,n)", c10);
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
