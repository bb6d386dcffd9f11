// Command-line surface for ACI-matrix rank analysis and WST-decomposition.
//
// Exit codes: 0 success, 1 refusal (e.g. the matrix is not constantRank, or
// no zero-block witness exists for the requested rho), 2 input errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "aci/report.hpp"

namespace {

struct CommonOpts {
  std::string input;
  std::string field_override;
  bool json = false;
  long long budget = 1LL << 20;
  std::uint64_t seed = 42;
  int tries = 512;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--input", o.input, "path to an .aci matrix file")->required();
  cmd->add_option("--field", o.field_override, "override the file's field, e.g. gf(5) or rational");
  cmd->add_flag("--json", o.json, "emit a JSON report instead of text");
  cmd->add_option("--budget", o.budget, "cap on exhaustive completion enumeration");
  cmd->add_option("--seed", o.seed, "seed for randomized witness search");
  cmd->add_option("--tries", o.tries, "random witness attempts before exhaustive fallback");
}

aci::SearchBudget budget_of(const CommonOpts& o) {
  aci::SearchBudget b;
  b.max_completions = o.budget;
  b.rng_seed = o.seed;
  b.random_tries = o.tries;
  return b;
}

struct Loaded {
  aci::AciMatrix matrix;
  std::string name;
};

Loaded load(const CommonOpts& o) {
  std::ifstream in(o.input);
  aci::require(in.good(), aci::Err::SyntaxError, "cannot open '" + o.input + "'");
  std::optional<std::string> ov;
  if (!o.field_override.empty()) ov = o.field_override;
  aci::MatrixDocument doc = aci::read_document(in, ov);
  return {doc.to_matrix(), doc.name.value_or(o.input)};
}

void emit(const CommonOpts& o, const std::string& command, const std::string& input_name,
          const aci::Json& result, const std::vector<std::string>& diagnostics,
          const std::string& text) {
  if (o.json)
    std::cout << aci::report::envelope(command, input_name, result, diagnostics).dump(2) << "\n";
  else {
    std::cout << text;
    for (const auto& d : diagnostics) std::cout << "note: " << d << "\n";
  }
}

std::string describe_sets(const std::vector<std::vector<int>>& members) {
  std::string s;
  for (const auto& F : members) {
    s += "{";
    for (size_t i = 0; i < F.size(); ++i) s += (i ? "," : "") + std::to_string(F[i] + 1);
    s += "} ";
  }
  if (s.empty()) s = "(none)";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank analysis and WST-decomposition of ACI-matrices"};
  app.require_subcommand(1);

  CommonOpts vo, ro, wo, fo, zo, co;
  int zo_rho = 0;
  std::string fo_kind = "factor";

  CLI::App* validate = app.add_subcommand("validate", "check a matrix file against the ACI rules");
  add_common(validate, vo);
  CLI::App* rank = app.add_subcommand("rank", "Rank set / maxRank / minRank analysis");
  add_common(rank, ro);
  CLI::App* wst = app.add_subcommand("wst", "WST-decomposition");
  add_common(wst, wo);
  CLI::App* fsets = app.add_subcommand("factor-sets", "enumerate factor or semifactor sets");
  add_common(fsets, fo);
  fsets->add_option("--kind", fo_kind, "factor | semifactor")
      ->check(CLI::IsMember({"factor", "semifactor"}));
  CLI::App* zb = app.add_subcommand("zero-block", "witness for maxRank <= rho");
  add_common(zb, zo);
  zb->add_option("--rho", zo_rho, "target rank bound")->required();
  CLI::App* cr = app.add_subcommand("constant-rank", "constantRank decision and canonical form");
  add_common(cr, co);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      Loaded in = load(vo);
      aci::Json res;
      res["valid"] = true;
      res["rows"] = in.matrix.rows();
      res["cols"] = in.matrix.cols();
      res["shape"] = in.matrix.shape().to_string();
      res["field"] = in.matrix.field().to_string();
      aci::Json names = aci::Json::array();
      for (const auto& x : in.matrix.registry()) names.push_back(x.name);
      res["indeterminates"] = names;
      emit(vo, "validate", in.name, res, {},
           "valid " + std::to_string(in.matrix.rows()) + "x" + std::to_string(in.matrix.cols()) +
               " (" + in.matrix.shape().to_string() + ") over " + in.matrix.field().to_string() +
               ", " + std::to_string(in.matrix.registry().size()) + " indeterminate(s)\n");
      return 0;
    }

    if (rank->parsed()) {
      Loaded in = load(ro);
      aci::SearchBudget b = budget_of(ro);
      aci::RankReport rep;
      if (in.matrix.field().is_prime_field()) {
        long long total = 1;
        bool fits = true;
        for (size_t i = 0; i < in.matrix.registry().size() && fits; ++i) {
          if (total > b.max_completions / in.matrix.field().characteristic())
            fits = false;
          else
            total *= in.matrix.field().characteristic();
        }
        if (fits) {
          rep = aci::rank_set_exhaustive(in.matrix, b);
        } else {
          auto [u, wit] = aci::max_rank(in.matrix, b);
          rep.max_rank = u;
          rep.max_witness = wit;
          rep.method = aci::RankMethod::SymbolicWitness;
        }
      } else {
        auto [u, wit] = aci::max_rank(in.matrix, b);
        rep.max_rank = u;
        rep.max_witness = wit;
        rep.method = aci::RankMethod::SymbolicWitness;
      }
      std::string text = "maxrank " + std::to_string(rep.max_rank);
      if (rep.method == aci::RankMethod::Exhaustive) {
        text += ", minrank " + std::to_string(rep.min_rank) + ", rank set {";
        bool firstv = true;
        for (int r : rep.rank_set) {
          text += (firstv ? "" : ",") + std::to_string(r);
          firstv = false;
        }
        text += "}";
      }
      text += " [" + std::string(aci::rank_method_name(rep.method)) + "]\n";
      emit(ro, "rank", in.name, aci::report::rank_report(rep, in.matrix), {}, text);
      return 0;
    }

    if (wst->parsed()) {
      Loaded in = load(wo);
      aci::SearchBudget b = budget_of(wo);
      aci::WstDecomposition d = aci::wst_decompose(in.matrix, b);
      std::vector<std::string> diags;
      if (!aci::verify_wst(in.matrix, d, b)) diags.push_back("verification failed");
      std::string text = "W " + std::to_string(d.w_rows) + "x" + std::to_string(d.w_cols) + ", S " +
                         std::to_string(d.s_rows) + "x" + std::to_string(d.s_cols) + ", T " +
                         std::to_string(d.t_rows) + "x" + std::to_string(d.t_cols) + ", maxrank " +
                         std::to_string(d.max_rank_formula()) + "\n";
      emit(wo, "wst", in.name, aci::report::wst_json(d), diags, text);
      return diags.empty() ? 0 : 1;
    }

    if (fsets->parsed()) {
      Loaded in = load(fo);
      aci::SetKind kind = fo_kind == "factor" ? aci::SetKind::Factor : aci::SetKind::Semifactor;
      aci::FactorLattice lat = aci::enumerate_sets(in.matrix, kind, budget_of(fo));
      std::vector<std::string> diags;
      if (lat.members.empty())
        diags.push_back(std::string("no ") + aci::set_kind_name(kind) + " sets: matrix is " +
                        (lat.fmr ? "FmR" : "not FmR"));
      std::string text = std::string(aci::set_kind_name(kind)) + " sets: " +
                         describe_sets(lat.members) + "\n";
      if (!lat.members.empty())
        text += "f_bot " + describe_sets({lat.f_bot}) + ", f_top " + describe_sets({lat.f_top}) +
                "\n";
      emit(fo, "factor-sets", in.name, aci::report::lattice_json(lat), diags, text);
      return 0;
    }

    if (zb->parsed()) {
      Loaded in = load(zo);
      aci::SearchBudget b = budget_of(zo);
      auto wit = aci::zero_block_witness(in.matrix, zo_rho, b);
      if (!wit) {
        aci::Json res;
        res["refused"] = true;
        res["reason"] = "maxRank exceeds rho";
        res["max_rank"] = aci::max_rank(in.matrix, b).first;
        emit(zo, "zero-block", in.name, res, {"refusal: maxRank exceeds rho"},
             "refused: maxRank " + std::to_string(aci::max_rank(in.matrix, b).first) +
                 " exceeds rho " + std::to_string(zo_rho) + "\n");
        return 1;
      }
      aci::Json res;
      res["r"] = wit->r;
      res["s"] = wit->s;
      res["rho"] = zo_rho;
      res["r_transform"] = aci::report::const_grid(wit->R);
      res["q_sigma"] = aci::report::columns_1based(wit->q_sigma);
      res["arranged"] = aci::report::matrix_grid(wit->arranged);
      emit(zo, "zero-block", in.name, res, {},
           "witness: zero block " + std::to_string(wit->r) + "x" + std::to_string(wit->s) +
               " with (m-r)+(n-s) = " + std::to_string(zo_rho) + "\n");
      return 0;
    }

    if (cr->parsed()) {
      Loaded in = load(co);
      aci::SearchBudget b = budget_of(co);
      aci::ConstantRankResult res = aci::is_constant_rank(in.matrix, b);
      if (!res.constant) {
        aci::Json j;
        j["constant"] = false;
        if (res.witnesses) {
          j["low_rank"] = res.witnesses->low_rank;
          j["high_rank"] = res.witnesses->high_rank;
          j["low_witness"] = aci::report::completion_json(res.witnesses->low, in.matrix);
          j["high_witness"] = aci::report::completion_json(res.witnesses->high, in.matrix);
        }
        emit(co, "constant-rank", in.name, j, {"refusal: not constantRank"},
             "not constantRank: completions of rank " +
                 std::to_string(res.witnesses ? res.witnesses->low_rank : -1) + " and " +
                 std::to_string(res.witnesses ? res.witnesses->high_rank : -1) + " exist\n");
        return 1;
      }
      aci::Json j;
      j["constant"] = true;
      j["rho"] = *res.rho;
      std::string text = "constantRank, rho " + std::to_string(*res.rho) + "\n";
      if (!in.matrix.field().is_prime_field() ||
          in.matrix.field().characteristic() >=
              static_cast<std::uint32_t>(std::max(in.matrix.rows(), in.matrix.cols() + 1))) {
        aci::CanonicalForm cf = aci::canonical_form(in.matrix, b);
        j["canonical"] = aci::report::canonical_json(cf);
        text += "canonical form: " + std::string(aci::form_tag_name(cf.tag)) + "\n";
      }
      emit(co, "constant-rank", in.name, j, {}, text);
      return 0;
    }
  } catch (const aci::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
