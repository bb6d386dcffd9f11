#pragma once

#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aci/matrix.hpp"

namespace aci {

/// Interns indeterminate names while a matrix document is assembled.
/// Column ownership is fixed at first sight; a second column asking for the
/// same name is the ColumnSharing violation of the ACI definition.
class RegistryBuilder {
 public:
  int intern(const std::string& name, int column) {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) {
      int id = static_cast<int>(list_.size());
      by_name_.emplace(name, id);
      list_.push_back({id, name, column});
      return id;
    }
    require(list_[it->second].owner_column == column, Err::ColumnSharing,
            "indeterminate '" + name + "' appears in columns " +
                std::to_string(list_[it->second].owner_column + 1) + " and " +
                std::to_string(column + 1));
    return it->second;
  }

  const std::vector<Indeterminate>& list() const { return list_; }

 private:
  std::map<std::string, int> by_name_;
  std::vector<Indeterminate> list_;
};

namespace detail {

struct Token {
  enum class Kind { Integer, Identifier, Plus, Minus, Star, Slash, End };
  Kind kind;
  std::string text;
  size_t pos;
};

inline std::vector<Token> lex_entry(const std::string& text) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Token::Kind::Integer, text.substr(start, i - start), start});
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
      out.push_back({Token::Kind::Identifier, text.substr(start, i - start), start});
    } else if (c == '+') {
      out.push_back({Token::Kind::Plus, "+", i++});
    } else if (c == '-') {
      out.push_back({Token::Kind::Minus, "-", i++});
    } else if (c == '*') {
      out.push_back({Token::Kind::Star, "*", i++});
    } else if (c == '/') {
      out.push_back({Token::Kind::Slash, "/", i++});
    } else {
      fail(Err::SyntaxError,
           "unexpected character '" + std::string(1, c) + "' at position " + std::to_string(i));
    }
  }
  out.push_back({Token::Kind::End, "", text.size()});
  return out;
}

}  // namespace detail

/// Parses one matrix entry under the grammar
///   expression := sign? term (('+'|'-') term)*
///   term       := coefficient ('*'? identifier)? | identifier
///   coefficient:= integer ('/' integer)?        (fractions only over rationals)
/// registering indeterminates into `reg` with the given owner column.
inline AffineForm parse_entry(const std::string& text, const FieldSpec& field,
                              RegistryBuilder& reg, int column) {
  using detail::Token;
  std::vector<Token> toks = detail::lex_entry(text);
  size_t at = 0;
  auto peek = [&]() -> const Token& { return toks[at]; };
  auto expect_err = [&](const std::string& what) {
    fail(Err::SyntaxError, "in '" + text + "' at position " + std::to_string(peek().pos) +
                               ": expected " + what);
  };

  AffineForm form = AffineForm::zero(field);
  bool first = true;
  while (true) {
    if (peek().kind == Token::Kind::End) {
      if (first) expect_err("an entry expression");
      break;
    }
    bool negative = false;
    if (first) {
      if (peek().kind == Token::Kind::Plus || peek().kind == Token::Kind::Minus) {
        negative = peek().kind == Token::Kind::Minus;
        ++at;
      }
    } else {
      if (peek().kind == Token::Kind::Plus) {
        ++at;
      } else if (peek().kind == Token::Kind::Minus) {
        negative = true;
        ++at;
      } else if (peek().kind == Token::Kind::Star) {
        fail(Err::NonAffine, "in '" + text + "': product of two indeterminates");
      } else {
        expect_err("'+', '-', or end of entry");
      }
    }
    first = false;

    Scalar coeff = Scalar::one(field);
    bool saw_coeff = false;
    if (peek().kind == Token::Kind::Integer) {
      BigInt num(peek().text);
      ++at;
      if (peek().kind == Token::Kind::Slash) {
        require(!field.is_prime_field(), Err::SyntaxError,
                "in '" + text + "': fraction literal is only valid over the rationals");
        ++at;
        if (peek().kind != Token::Kind::Integer) expect_err("denominator");
        BigInt den(peek().text);
        require(den != 0, Err::DivisionByZero, "in '" + text + "': zero denominator");
        ++at;
        coeff = Scalar::from_big(field, num, den);
      } else {
        coeff = Scalar::from_big(field, num);
      }
      saw_coeff = true;
      if (peek().kind == Token::Kind::Star) {
        ++at;
        if (peek().kind != Token::Kind::Identifier) expect_err("identifier after '*'");
      }
    }
    if (peek().kind == Token::Kind::Identifier) {
      std::string name = peek().text;
      ++at;
      int id = reg.intern(name, column);
      form.add_term(id, negative ? -coeff : coeff);
    } else if (saw_coeff) {
      form.add_constant(negative ? -coeff : coeff);
    } else {
      expect_err("coefficient or identifier");
    }
  }
  return form;
}

/// Canonical rendering: terms in ascending id order, constant last, no spaces.
/// The output reparses to an equal form under the entry grammar.
inline std::string form_to_string(const AffineForm& e, const AciMatrix& owner) {
  const FieldSpec& f = e.field();
  if (e.is_zero()) return "0";
  std::string out;
  auto append = [&](bool neg, const std::string& body) {
    if (out.empty())
      out += neg ? "-" : "";
    else
      out += neg ? "-" : "+";
    out += body;
  };
  for (const auto& [id, c] : e.terms()) {
    const std::string& name = owner.find(id)->name;
    if (f.is_prime_field()) {
      if (c == Scalar::one(f))
        append(false, name);
      else
        append(false, c.to_string() + name);
    } else {
      BigRat r = c.rational();
      bool neg = r < 0;
      if (neg) r = -r;
      if (r == 1)
        append(neg, name);
      else if (mp::denominator(r) == 1)
        append(neg, BigInt(mp::numerator(r)).str() + name);
      else
        append(neg, BigRat(r).str() + "*" + name);
    }
  }
  if (!e.constant().is_zero() || e.terms().empty()) {
    const Scalar& c = e.constant();
    if (f.is_prime_field()) {
      append(false, c.to_string());
    } else {
      BigRat r = c.rational();
      bool neg = r < 0;
      if (neg) r = -r;
      append(neg, BigRat(r).str());
    }
  }
  return out;
}

inline std::vector<std::vector<std::string>> matrix_to_strings(const AciMatrix& M) {
  std::vector<std::vector<std::string>> out(M.rows(), std::vector<std::string>(M.cols()));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) out[i][j] = form_to_string(M.entry(i, j), M);
  return out;
}

}  // namespace aci
