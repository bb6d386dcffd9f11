#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "aci/errors.hpp"

namespace aci {

namespace mp = boost::multiprecision;
using BigInt = mp::cpp_int;
using BigRat = mp::cpp_rational;

enum class FieldKind { Prime, Rational };

/// The ground field: a prime field GF(p) with p <= 2^16, or the exact rationals.
class FieldSpec {
 public:
  static FieldSpec gf(std::uint32_t p) {
    require(p >= 2 && p <= 65536, Err::UnknownField, "prime must be in [2, 2^16]");
    require(is_prime(p), Err::UnknownField, "gf(" + std::to_string(p) + "): not a prime");
    return FieldSpec(FieldKind::Prime, p);
  }

  static FieldSpec rationals() { return FieldSpec(FieldKind::Rational, 0); }

  /// Accepts the exact spellings used by CLI and .aci files: "gf(p)" or "rational".
  static FieldSpec parse(const std::string& text) {
    if (text == "rational") return rationals();
    if (text.size() > 4 && text.substr(0, 3) == "gf(" && text.back() == ')') {
      const std::string body = text.substr(3, text.size() - 4);
      require(!body.empty() && body.find_first_not_of("0123456789") == std::string::npos,
              Err::UnknownField, "bad field spec '" + text + "'");
      unsigned long long p = std::stoull(body);
      require(p <= 65536, Err::UnknownField, "prime must be <= 2^16");
      return gf(static_cast<std::uint32_t>(p));
    }
    fail(Err::UnknownField, "bad field spec '" + text + "' (expected gf(p) or rational)");
  }

  FieldKind kind() const { return kind_; }
  bool is_prime_field() const { return kind_ == FieldKind::Prime; }
  std::uint32_t characteristic() const { return p_; }

  std::string to_string() const {
    return is_prime_field() ? "gf(" + std::to_string(p_) + ")" : "rational";
  }

  bool operator==(const FieldSpec& o) const { return kind_ == o.kind_ && p_ == o.p_; }
  bool operator!=(const FieldSpec& o) const { return !(*this == o); }

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  FieldSpec(FieldKind kind, std::uint32_t p) : kind_(kind), p_(p) {}

  FieldKind kind_;
  std::uint32_t p_;
};

/// An element of the ground field in canonical form: residue in [0,p) for
/// prime fields, reduced fraction with positive denominator for rationals.
class Scalar {
 public:
  Scalar() : field_(FieldSpec::rationals()), res_(0) {}

  static Scalar zero(const FieldSpec& f) { return Scalar(f); }
  static Scalar one(const FieldSpec& f) { return from_integer(f, 1); }

  static Scalar from_integer(const FieldSpec& f, long long v) {
    Scalar s(f);
    if (f.is_prime_field()) {
      long long p = f.characteristic();
      s.res_ = ((v % p) + p) % p;
    } else {
      s.rat_ = v;
    }
    return s;
  }

  static Scalar from_big(const FieldSpec& f, const BigInt& num, const BigInt& den = 1) {
    Scalar s(f);
    if (f.is_prime_field()) {
      require(den == 1, Err::UnknownField, "fraction literal over a prime field");
      BigInt p = f.characteristic();
      BigInt r = num % p;
      if (r < 0) r += p;
      s.res_ = static_cast<std::int64_t>(r);
    } else {
      require(den != 0, Err::DivisionByZero, "zero denominator");
      s.rat_ = BigRat(num, den);
    }
    return s;
  }

  static Scalar from_rational(const FieldSpec& f, const BigRat& r) {
    require(!f.is_prime_field(), Err::UnknownField, "rational value over a prime field");
    Scalar s(f);
    s.rat_ = r;
    return s;
  }

  const FieldSpec& field() const { return field_; }
  bool is_zero() const { return field_.is_prime_field() ? res_ == 0 : rat_.is_zero(); }
  std::int64_t residue() const { return res_; }
  const BigRat& rational() const { return rat_; }

  Scalar operator+(const Scalar& o) const {
    check(o);
    Scalar s(field_);
    if (field_.is_prime_field())
      s.res_ = (res_ + o.res_) % field_.characteristic();
    else
      s.rat_ = rat_ + o.rat_;
    return s;
  }

  Scalar operator-(const Scalar& o) const {
    check(o);
    Scalar s(field_);
    if (field_.is_prime_field()) {
      long long p = field_.characteristic();
      s.res_ = ((res_ - o.res_) % p + p) % p;
    } else {
      s.rat_ = rat_ - o.rat_;
    }
    return s;
  }

  Scalar operator*(const Scalar& o) const {
    check(o);
    Scalar s(field_);
    if (field_.is_prime_field())
      s.res_ = (res_ * o.res_) % field_.characteristic();
    else
      s.rat_ = rat_ * o.rat_;
    return s;
  }

  Scalar operator/(const Scalar& o) const {
    require(!o.is_zero(), Err::DivisionByZero, "division by zero");
    return *this * o.inverse();
  }

  Scalar operator-() const {
    Scalar s(field_);
    if (field_.is_prime_field()) {
      long long p = field_.characteristic();
      s.res_ = (p - res_) % p;
    } else {
      s.rat_ = -rat_;
    }
    return s;
  }

  Scalar inverse() const {
    require(!is_zero(), Err::DivisionByZero, "inverse of zero");
    Scalar s(field_);
    if (field_.is_prime_field()) {
      s.res_ = pow_mod(res_, field_.characteristic() - 2, field_.characteristic());
    } else {
      s.rat_ = 1 / rat_;
    }
    return s;
  }

  bool operator==(const Scalar& o) const {
    return field_ == o.field_ && (field_.is_prime_field() ? res_ == o.res_ : rat_ == o.rat_);
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string to_string() const {
    if (field_.is_prime_field()) return std::to_string(res_);
    return rat_.str();
  }

 private:
  explicit Scalar(const FieldSpec& f) : field_(f), res_(0) {}

  void check(const Scalar& o) const {
    require(field_ == o.field_, Err::MixedFields,
            "operands from " + field_.to_string() + " and " + o.field_.to_string());
  }

  static std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t p) {
    std::int64_t r = 1 % p;
    b %= p;
    while (e > 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }

  FieldSpec field_;
  std::int64_t res_;
  BigRat rat_;
};

enum class ArithOp { Add, Sub, Mul, Div };

inline Scalar scalar_arith(const Scalar& a, const Scalar& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
  }
  fail(Err::InternalAssertionFailed, "bad ArithOp");
}

/// Elements of GF(p) in the fixed order 0, 1, ..., p-1.
inline std::vector<Scalar> enumerate_elements(const FieldSpec& f) {
  require(f.is_prime_field(), Err::InfiniteField, "cannot enumerate the rationals");
  std::vector<Scalar> out;
  out.reserve(f.characteristic());
  for (std::uint32_t v = 0; v < f.characteristic(); ++v)
    out.push_back(Scalar::from_integer(f, v));
  return out;
}

}  // namespace aci
