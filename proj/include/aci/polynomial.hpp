#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "aci/affine.hpp"

namespace aci {

/// Monomial as a sparse exponent vector sorted by variable id.
struct Monomial {
  std::vector<std::pair<int, int>> vars;  // (id, exponent > 0)

  int degree() const {
    int d = 0;
    for (const auto& [id, e] : vars) d += e;
    return d;
  }

  bool operator==(const Monomial& o) const { return vars == o.vars; }

  Monomial times(const Monomial& o) const {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < vars.size() || j < o.vars.size()) {
      if (j == o.vars.size() || (i < vars.size() && vars[i].first < o.vars[j].first))
        r.vars.push_back(vars[i++]);
      else if (i == vars.size() || o.vars[j].first < vars[i].first)
        r.vars.push_back(o.vars[j++]);
      else {
        r.vars.emplace_back(vars[i].first, vars[i].second + o.vars[j].second);
        ++i, ++j;
      }
    }
    return r;
  }

  bool divides(const Monomial& o) const {
    size_t j = 0;
    for (const auto& [id, e] : vars) {
      while (j < o.vars.size() && o.vars[j].first < id) ++j;
      if (j == o.vars.size() || o.vars[j].first != id || o.vars[j].second < e) return false;
    }
    return true;
  }

  Monomial divided_by(const Monomial& o) const {
    Monomial r;
    size_t j = 0;
    for (size_t i = 0; i < vars.size(); ++i) {
      int e = vars[i].second;
      if (j < o.vars.size() && o.vars[j].first == vars[i].first) {
        e -= o.vars[j].second;
        ++j;
      }
      if (e > 0) r.vars.emplace_back(vars[i].first, e);
    }
    return r;
  }
};

/// Graded lexicographic order: compare total degree, then exponent vectors
/// lexicographically with smaller variable ids more significant.
inline bool grlex_less(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  size_t i = 0, j = 0;
  while (i < a.vars.size() && j < b.vars.size()) {
    if (a.vars[i].first != b.vars[j].first)
      // The smaller id has a positive exponent on exactly one side; that side
      // is lexicographically greater.
      return a.vars[i].first > b.vars[j].first;
    if (a.vars[i].second != b.vars[j].second) return a.vars[i].second < b.vars[j].second;
    ++i, ++j;
  }
  return i == a.vars.size() && j != b.vars.size() ? true : false;
}

/// Sparse multivariate polynomial over the ground field, terms sorted in
/// descending graded-lex order with nonzero coefficients.
class Poly {
 public:
  explicit Poly(const FieldSpec& f) : field_(f) {}

  static Poly constant(const Scalar& c) {
    Poly p(c.field());
    if (!c.is_zero()) p.terms_.push_back({Monomial{}, c});
    return p;
  }

  static Poly from_affine(const AffineForm& e) {
    Poly p(e.field());
    for (auto it = e.terms().rbegin(); it != e.terms().rend(); ++it)
      p.terms_.push_back({Monomial{{{it->first, 1}}}, it->second});
    // Terms arrive in descending id order; same-degree grlex puts smaller ids
    // first, so sort to restore the invariant.
    std::sort(p.terms_.begin(), p.terms_.end(),
              [](const auto& a, const auto& b) { return grlex_less(b.first, a.first); });
    if (!e.constant().is_zero()) p.terms_.push_back({Monomial{}, e.constant()});
    return p;
  }

  const FieldSpec& field() const { return field_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.vars.empty()); }
  const std::vector<std::pair<Monomial, Scalar>>& terms() const { return terms_; }

  const std::pair<Monomial, Scalar>& leading() const { return terms_.front(); }

  Poly operator+(const Poly& o) const { return merged(o, false); }
  Poly operator-(const Poly& o) const { return merged(o, true); }

  Poly operator*(const Poly& o) const {
    Poly r(field_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) r.accumulate(ma.times(mb), ca * cb);
    return r;
  }

  Poly operator-() const {
    Poly r(field_);
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) r.terms_.push_back({m, -c});
    return r;
  }

  /// Exact division; the caller guarantees divisibility (Bareiss elimination).
  Poly exact_div(const Poly& d) const {
    require(!d.is_zero(), Err::DivisionByZero, "polynomial division by zero");
    Poly rem = *this;
    Poly q(field_);
    while (!rem.is_zero()) {
      const auto& [lm, lc] = rem.leading();
      require(d.leading().first.divides(lm), Err::InternalAssertionFailed,
              "inexact polynomial division in fraction-free elimination");
      Monomial qm = lm.divided_by(d.leading().first);
      Scalar qc = lc / d.leading().second;
      q.accumulate(qm, qc);
      Poly t(field_);
      t.terms_.push_back({qm, qc});
      rem = rem - t * d;
    }
    return q;
  }

  Poly substituted(int id, const Scalar& v) const {
    Poly r(field_);
    for (const auto& [m, c] : terms_) {
      Scalar nc = c;
      Monomial nm;
      for (const auto& [vid, e] : m.vars) {
        if (vid == id) {
          for (int t = 0; t < e; ++t) nc = nc * v;
        } else {
          nm.vars.emplace_back(vid, e);
        }
      }
      r.accumulate(nm, nc);
    }
    return r;
  }

  std::vector<int> variables() const {
    std::vector<int> ids;
    for (const auto& [m, c] : terms_)
      for (const auto& [id, e] : m.vars) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

 private:
  Poly merged(const Poly& o, bool subtract) const {
    Poly r(field_);
    size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
      bool take_a;
      if (i == terms_.size())
        take_a = false;
      else if (j == o.terms_.size())
        take_a = true;
      else if (terms_[i].first == o.terms_[j].first) {
        Scalar c = subtract ? terms_[i].second - o.terms_[j].second
                            : terms_[i].second + o.terms_[j].second;
        if (!c.is_zero()) r.terms_.push_back({terms_[i].first, c});
        ++i, ++j;
        continue;
      } else {
        take_a = grlex_less(o.terms_[j].first, terms_[i].first);
      }
      if (take_a)
        r.terms_.push_back(terms_[i++]);
      else
        r.terms_.push_back({o.terms_[j].first, subtract ? -o.terms_[j].second : o.terms_[j].second}),
            ++j;
    }
    return r;
  }

  void accumulate(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const auto& t, const Monomial& x) { return grlex_less(x, t.first); });
    if (it != terms_.end() && it->first == m) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    } else {
      terms_.insert(it, {m, c});
    }
  }

  FieldSpec field_;
  std::vector<std::pair<Monomial, Scalar>> terms_;
};

}  // namespace aci
