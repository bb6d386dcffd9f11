#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "aci/field.hpp"

namespace aci {

/// One indeterminate of an ACI-matrix. Column-disjointness is the defining
/// invariant: owner_column is the only column the indeterminate may appear in.
struct Indeterminate {
  int id = -1;
  std::string name;
  int owner_column = -1;

  bool operator==(const Indeterminate& o) const {
    return id == o.id && name == o.name && owner_column == o.owner_column;
  }
};

/// A degree-at-most-one polynomial: constant plus a sparse list of
/// (indeterminate id, nonzero coefficient) terms sorted by id. Products of
/// indeterminates are not representable, so degree <= 1 holds by construction.
class AffineForm {
 public:
  explicit AffineForm(Scalar constant) : constant_(std::move(constant)) {}

  static AffineForm zero(const FieldSpec& f) { return AffineForm(Scalar::zero(f)); }

  const Scalar& constant() const { return constant_; }
  const std::vector<std::pair<int, Scalar>>& terms() const { return terms_; }
  const FieldSpec& field() const { return constant_.field(); }

  bool is_zero() const { return constant_.is_zero() && terms_.empty(); }
  bool is_constant() const { return terms_.empty(); }

  Scalar coeff(int id) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                               [](const auto& t, int v) { return t.first < v; });
    if (it != terms_.end() && it->first == id) return it->second;
    return Scalar::zero(field());
  }

  /// Adds c*x_id, dropping the term if the merged coefficient cancels.
  void add_term(int id, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                               [](const auto& t, int v) { return t.first < v; });
    if (it != terms_.end() && it->first == id) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    } else {
      terms_.insert(it, {id, c});
    }
  }

  void add_constant(const Scalar& c) { constant_ = constant_ + c; }

  AffineForm operator+(const AffineForm& o) const {
    AffineForm r = *this;
    r.constant_ = r.constant_ + o.constant_;
    for (const auto& [id, c] : o.terms_) r.add_term(id, c);
    return r;
  }

  AffineForm operator-(const AffineForm& o) const {
    AffineForm r = *this;
    r.constant_ = r.constant_ - o.constant_;
    for (const auto& [id, c] : o.terms_) r.add_term(id, -c);
    return r;
  }

  AffineForm scaled(const Scalar& c) const {
    if (c.is_zero()) return AffineForm::zero(field());
    AffineForm r(constant_ * c);
    r.terms_.reserve(terms_.size());
    for (const auto& [id, k] : terms_) r.terms_.emplace_back(id, k * c);
    return r;
  }

  /// Substitutes x_id := v, folding the term into the constant.
  AffineForm substituted(int id, const Scalar& v) const {
    AffineForm r(constant_);
    for (const auto& [tid, c] : terms_) {
      if (tid == id)
        r.constant_ = r.constant_ + c * v;
      else
        r.terms_.emplace_back(tid, c);
    }
    return r;
  }

  bool operator==(const AffineForm& o) const {
    return constant_ == o.constant_ && terms_ == o.terms_;
  }
  bool operator!=(const AffineForm& o) const { return !(*this == o); }

 private:
  Scalar constant_;
  std::vector<std::pair<int, Scalar>> terms_;
};

}  // namespace aci
