#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "aci/canonical.hpp"
#include "aci/document.hpp"

namespace aci {

using Json = nlohmann::json;

/// Report serialization. Objects keep sorted keys and scalars print through
/// the canonical entry grammar, so output is byte-stable for fixed inputs,
/// seed, and budget. Column indices are 1-based on the wire, matching the
/// notation of the literature.
namespace report {

inline Json columns_1based(const std::vector<int>& xs) {
  Json a = Json::array();
  for (int x : xs) a.push_back(x + 1);
  return a;
}

inline Json matrix_grid(const AciMatrix& M) {
  Json rows = Json::array();
  for (const auto& row : matrix_to_strings(M)) {
    Json r = Json::array();
    for (const auto& s : row) r.push_back(s);
    rows.push_back(r);
  }
  return rows;
}

inline Json const_grid(const ConstMatrix& M) {
  Json rows = Json::array();
  for (int i = 0; i < M.rows(); ++i) {
    Json r = Json::array();
    for (int j = 0; j < M.cols(); ++j) r.push_back(M.at(i, j).to_string());
    rows.push_back(r);
  }
  return rows;
}

inline Json completion_json(const Completion& c, const AciMatrix& M) {
  Json o = Json::object();
  for (const auto& [id, v] : c.values()) o[M.find(id)->name] = v.to_string();
  return o;
}

inline Json rank_report(const RankReport& rep, const AciMatrix& M) {
  Json o;
  o["method"] = rank_method_name(rep.method);
  o["max_rank"] = rep.max_rank;
  if (rep.method == RankMethod::Exhaustive) {
    o["min_rank"] = rep.min_rank;
    Json set = Json::array();
    for (int r : rep.rank_set) set.push_back(r);
    o["rank_set"] = set;
  }
  if (rep.max_witness) o["max_witness"] = completion_json(*rep.max_witness, M);
  if (rep.method == RankMethod::Exhaustive && rep.min_witness)
    o["min_witness"] = completion_json(*rep.min_witness, M);
  return o;
}

inline Json block_json(const AciMatrix& B) {
  Json o;
  o["rows"] = B.rows();
  o["cols"] = B.cols();
  o["shape"] = B.shape().to_string();
  o["entries"] = matrix_grid(B);
  return o;
}

inline Json wst_json(const WstDecomposition& d) {
  Json o;
  o["w"] = block_json(d.W);
  o["s"] = block_json(d.S);
  o["t"] = block_json(d.T);
  o["f_bot"] = columns_1based(d.f_bot);
  o["f_top"] = columns_1based(d.f_top);
  o["max_rank"] = d.max_rank_formula();
  o["fmr"] = d.fmr;
  o["r_transform"] = const_grid(d.R);
  o["q_sigma"] = columns_1based(d.q_sigma);
  o["arranged"] = matrix_grid(d.arranged);
  return o;
}

inline Json lattice_json(const FactorLattice& lat) {
  Json o;
  o["kind"] = set_kind_name(lat.kind);
  Json members = Json::array();
  for (const auto& F : lat.members) members.push_back(columns_1based(F));
  o["members"] = members;
  o["f_bot"] = columns_1based(lat.f_bot);
  o["f_top"] = columns_1based(lat.f_top);
  o["fmr"] = lat.fmr;
  o["prop_consistent"] = lat.prop_consistent;
  return o;
}

inline Json canonical_json(const CanonicalForm& cf) {
  Json o;
  o["tag"] = form_tag_name(cf.tag);
  o["rho"] = cf.rho;
  if (cf.tag == FormTag::DeficientIV) {
    o["r"] = cf.r;
    o["s"] = cf.s;
  }
  if (cf.outside_theorem) o["outside_theorem"] = true;
  Json dims;
  dims["w"] = {cf.w_rows, cf.w_cols};
  dims["s"] = {cf.s_rows, cf.s_cols};
  dims["t"] = {cf.t_rows, cf.t_cols};
  o["block_dims"] = dims;
  o["arranged"] = matrix_grid(cf.arranged);
  o["r_transform"] = const_grid(cf.R);
  o["q_sigma"] = columns_1based(cf.q_sigma);
  return o;
}

inline Json envelope(const std::string& command, const std::string& input_name,
                     const Json& result, const std::vector<std::string>& diagnostics) {
  Json o;
  o["schema"] = 1;
  o["command"] = command;
  o["input"] = input_name;
  o["result"] = result;
  Json d = Json::array();
  for (const auto& s : diagnostics) d.push_back(s);
  o["diagnostics"] = d;
  return o;
}

}  // namespace report
}  // namespace aci
