#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aci/parse.hpp"

namespace aci {

/// A parsed .aci file: the field line, an optional name, and the entry grid
/// as text. Degenerate matrices carry an explicit dims header instead of rows.
///
/// Format:
///   # comments and blank lines are skipped
///   field: gf(p) | rational
///   name: optional label
///   dims: M x N            (required when M = 0 or N = 0)
///   one row per line, entries separated by commas
struct MatrixDocument {
  FieldSpec field = FieldSpec::rationals();
  std::optional<std::string> name;
  std::optional<std::pair<int, int>> dims;
  std::vector<std::vector<std::string>> rows;

  AciMatrix to_matrix() const {
    int m, n;
    if (dims) {
      m = dims->first;
      n = dims->second;
      require(m >= 0 && n >= 0, Err::DimensionMismatch, "negative dims");
      require(rows.empty() || static_cast<int>(rows.size()) == m, Err::DimensionMismatch,
              "dims header disagrees with the number of rows");
    } else {
      require(!rows.empty(), Err::SyntaxError, "matrix document has no rows and no dims header");
      m = static_cast<int>(rows.size());
      n = static_cast<int>(rows.front().size());
    }
    std::vector<AffineForm> entries;
    RegistryBuilder reg;
    if (!rows.empty()) {
      for (const auto& row : rows) {
        require(static_cast<int>(row.size()) == n, Err::DimensionMismatch,
                "rows of different lengths");
        for (int j = 0; j < n; ++j) entries.push_back(parse_entry(row[j], field, reg, j));
      }
    }
    if (m > 0 && n > 0)
      require(!rows.empty(), Err::DimensionMismatch, "dims promise entries but none follow");
    return AciMatrix::validate(m, n, field, std::move(entries), reg.list());
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline MatrixDocument read_document(std::istream& in,
                                    const std::optional<std::string>& field_override = {}) {
  MatrixDocument doc;
  bool field_seen = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    auto starts = [&](const char* p) { return t.rfind(p, 0) == 0; };
    if (!field_seen) {
      require(starts("field:"), Err::SyntaxError,
              "line " + std::to_string(lineno) + ": expected 'field: gf(p)|rational' first");
      doc.field = FieldSpec::parse(detail::trim(t.substr(6)));
      field_seen = true;
      continue;
    }
    if (starts("name:")) {
      doc.name = detail::trim(t.substr(5));
      continue;
    }
    if (starts("dims:")) {
      std::string body = detail::trim(t.substr(5));
      size_t x = body.find('x');
      require(x != std::string::npos, Err::SyntaxError,
              "line " + std::to_string(lineno) + ": dims must look like 'M x N'");
      try {
        doc.dims = {std::stoi(detail::trim(body.substr(0, x))),
                    std::stoi(detail::trim(body.substr(x + 1)))};
      } catch (const std::exception&) {
        fail(Err::SyntaxError, "line " + std::to_string(lineno) + ": bad dims header");
      }
      continue;
    }
    std::vector<std::string> row;
    std::string cell;
    std::stringstream ss(t);
    while (std::getline(ss, cell, ',')) {
      cell = detail::trim(cell);
      require(!cell.empty(), Err::SyntaxError,
              "line " + std::to_string(lineno) + ": empty entry");
      row.push_back(cell);
    }
    doc.rows.push_back(std::move(row));
  }
  require(field_seen, Err::SyntaxError, "missing 'field:' header");
  if (field_override) doc.field = FieldSpec::parse(*field_override);
  return doc;
}

inline std::string write_document(const AciMatrix& M, const std::optional<std::string>& name = {}) {
  std::string out = "field: " + M.field().to_string() + "\n";
  if (name) out += "name: " + *name + "\n";
  if (M.rows() == 0 || M.cols() == 0)
    out += "dims: " + std::to_string(M.rows()) + " x " + std::to_string(M.cols()) + "\n";
  for (int i = 0; i < M.rows(); ++i) {
    for (int j = 0; j < M.cols(); ++j) {
      if (j) out += ", ";
      out += form_to_string(M.entry(i, j), M);
    }
    out += "\n";
  }
  return out;
}

}  // namespace aci
