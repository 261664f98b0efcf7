#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slicekit/certify.hpp"
#include "slicekit/jsonutil.hpp"

using namespace slicekit;
using nlohmann::ordered_json;

namespace {

KnotExpr load_expr(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open knot file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::domain_error("knot file " + path + " is not valid JSON: " + e.what());
  }
  return expr_from_json(j);
}

SeifertMatrix load_matrix(const std::string& path) {
  KnotExpr e = load_expr(path);
  return realize(e);
}

void emit(const ordered_json& j, const std::string& output) {
  if (output.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(output);
  if (!out) throw std::domain_error("cannot open output file: " + output);
  out << j.dump(2) << "\n";
}

Z parse_z(const std::string& s) {
  try {
    return Z(s);
  } catch (const std::invalid_argument&) {
    throw std::domain_error("not an integer: " + s);
  }
}

Q parse_q(const std::string& s) {
  try {
    return q_from_string(s);
  } catch (const std::invalid_argument&) {
    throw std::domain_error("not a rational: " + s);
  }
}

DLedger resolve_ledger(const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty()) {
    const char* env = std::getenv("SLICEKIT_LEDGER");
    if (env) path = env;
  }
  if (path.empty()) return DLedger{};
  return load_ledger(path);
}

SeifertMatrix builtin(const std::vector<std::vector<long>>& rows) {
  MatZ m(static_cast<int>(rows.size()), static_cast<int>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows.size(); ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return SeifertMatrix(m);
}

int run(int argc, char** argv) {
  CLI::App app{"Exact slicing obstructions from Seifert data"};
  app.require_subcommand(1);

  std::string output;

  // alexander
  auto* alex_cmd = app.add_subcommand("alexander", "Alexander polynomial of a knot expression");
  std::string alex_file;
  alex_cmd->add_option("file", alex_file, "knot expression JSON")->required();
  alex_cmd->add_option("-o,--output", output, "write JSON here instead of stdout");

  // cover
  auto* cover_cmd = app.add_subcommand("cover", "branched cover homology of a knot expression");
  std::string cover_file;
  int cover_q = 3;
  cover_cmd->add_option("file", cover_file, "knot expression JSON")->required();
  cover_cmd->add_option("-q,--q", cover_q, "cover degree (odd prime power)");
  cover_cmd->add_option("-o,--output", output, "write JSON here instead of stdout");

  // metabolizers
  auto* met_cmd = app.add_subcommand("metabolizers", "equivariant metabolizers of the cover");
  std::string met_file;
  int met_q = 3;
  long long met_budget = 100000000;
  int met_workers = 1;
  bool met_all = false;
  met_cmd->add_option("file", met_file, "knot expression JSON")->required();
  met_cmd->add_option("-q,--q", met_q, "cover degree (odd prime power)");
  met_cmd->add_option("--budget", met_budget, "enumeration budget");
  met_cmd->add_option("--workers", met_workers, "worker threads (output-invariant)");
  met_cmd->add_flag("--all", met_all, "list all metabolizers, not only equivariant ones");
  met_cmd->add_option("-o,--output", output, "write JSON here instead of stdout");

  // signature
  auto* sig_cmd = app.add_subcommand("signature", "Levine-Tristram signatures of a knot expression");
  std::string sig_file;
  std::vector<std::string> sig_points;
  sig_cmd->add_option("file", sig_file, "knot expression JSON")->required();
  sig_cmd->add_option("at", sig_points, "sample points as rationals a/b in (0, 1/2]");
  sig_cmd->add_option("-o,--output", output, "write JSON here instead of stdout");

  // dnorm
  auto* dn_cmd = app.add_subcommand("dnorm", "d-norm test with witness");
  std::string dn_n, dn_d;
  dn_cmd->add_option("n", dn_n, "integer to test")->required();
  dn_cmd->add_option("d", dn_d, "modulus")->required();
  dn_cmd->add_option("-o,--output", output, "write JSON here instead of stdout");

  // family
  auto* fam_cmd = app.add_subcommand("family", "prime pair family elements");
  int fam_count = 1;
  long fam_scan = 1000000;
  fam_cmd->add_option("--count", fam_count, "number of elements")->required();
  fam_cmd->add_option("--scan-bound", fam_scan, "largest m scanned per element");
  fam_cmd->add_option("-o,--output", output, "write JSON here instead of stdout");

  // obstruct
  auto* ob_cmd = app.add_subcommand("obstruct", "slicing obstruction certificates");
  ob_cmd->require_subcommand(1);

  auto* ob_single = ob_cmd->add_subcommand("single", "sweep one knot expression");
  std::string os_file, os_ledger;
  int os_q = 3;
  long long os_budget = 100000000;
  int os_workers = 1;
  bool os_swap = false;
  ob_single->add_option("file", os_file, "knot expression JSON")->required();
  ob_single->add_option("-q,--q", os_q, "cover degree (odd prime power)");
  ob_single->add_option("--ledger", os_ledger, "citation ledger JSON (default $SLICEKIT_LEDGER)");
  ob_single->add_option("--budget", os_budget, "metabolizer enumeration budget");
  ob_single->add_option("--workers", os_workers, "worker threads (output-invariant)");
  ob_single->add_flag("--swap-roles", os_swap, "swap the band roles of the eigenlines");
  ob_single->add_option("-o,--output", output, "write JSON here instead of stdout");

  auto* ob_comb = ob_cmd->add_subcommand("combination", "sweep a_i * (K(n_i) # -r(K(n_i)))");
  std::vector<std::string> oc_coeffs;
  std::string oc_ledger, oc_ja, oc_jb;
  long oc_scan = 1000000;
  long long oc_budget = 100000000;
  int oc_workers = 1;
  bool oc_swap = false;
  ob_comb->add_option("--coeffs", oc_coeffs, "coefficients a_1 a_2 ... (0 skips an element)")
      ->required();
  ob_comb->add_option("--j-alpha", oc_ja, "Seifert file for the index-1 band companion");
  ob_comb->add_option("--j-beta", oc_jb, "Seifert file for the index-0 band companion");
  ob_comb->add_option("--ledger", oc_ledger, "citation ledger JSON (default $SLICEKIT_LEDGER)");
  ob_comb->add_option("--scan-bound", oc_scan, "family scan bound");
  ob_comb->add_option("--budget", oc_budget, "metabolizer enumeration budget");
  ob_comb->add_option("--workers", oc_workers, "worker threads (output-invariant)");
  ob_comb->add_flag("--swap-roles", oc_swap, "swap the band roles of the eigenlines");
  ob_comb->add_option("-o,--output", output, "write JSON here instead of stdout");

  // verify-reduction
  auto* vr_cmd = app.add_subcommand("verify-reduction",
                                    "drop trivial-Alexander summands and compare everything");
  std::string vr_file;
  int vr_q = 3;
  long long vr_budget = 100000000;
  int vr_workers = 1;
  vr_cmd->add_option("file", vr_file, "knot expression JSON")->required();
  vr_cmd->add_option("-q,--q", vr_q, "cover degree (odd prime power)");
  vr_cmd->add_option("--budget", vr_budget, "metabolizer enumeration budget");
  vr_cmd->add_option("--workers", vr_workers, "worker threads (output-invariant)");
  vr_cmd->add_option("-o,--output", output, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*alex_cmd) {
    KnotExpr e = load_expr(alex_file);
    AlexanderPolynomial a = alexander(realize(e));
    ordered_json j;
    j["knot"] = describe_expr(e);
    ordered_json co = ordered_json::array();
    for (const Z& z : a.coefficients()) co.push_back(z_to_json(z));
    j["coefficients"] = co;
    j["degree"] = a.degree();
    j["at_one"] = z_to_json(a.at_one());
    j["trivial"] = a.is_trivial();
    emit(j, output);
    return 0;
  }

  if (*cover_cmd) {
    KnotExpr e = load_expr(cover_file);
    AssembledCover ac = assemble_cover(e, cover_q);
    ordered_json j;
    j["knot"] = describe_expr(e);
    j["q"] = ac.q;
    j["order"] = z_to_json(ac.group.order);
    ordered_json fac = ordered_json::array();
    for (const Z& d : ac.group.factors) fac.push_back(z_to_json(d));
    j["invariant_factors"] = fac;
    ordered_json summands = ordered_json::array();
    for (const CopyAssembly& c : ac.copies) {
      ordered_json s;
      s["label"] = c.label;
      s["generators"] = c.size;
      if (c.rn) s["model_parameter"] = *c.rn;
      summands.push_back(s);
    }
    j["summands"] = summands;
    ordered_json deck = ordered_json::array();
    for (int i = 0; i < ac.group.deck.rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (int k = 0; k < ac.group.deck.cols(); ++k) row.push_back(z_to_json(ac.group.deck.at(i, k)));
      deck.push_back(row);
    }
    j["deck"] = deck;
    ordered_json link = ordered_json::array();
    for (int i = 0; i < ac.group.linking.rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (int k = 0; k < ac.group.linking.cols(); ++k)
        row.push_back(q_to_json(ac.group.linking.at(i, k)));
      link.push_back(row);
    }
    j["linking"] = link;
    emit(j, output);
    return 0;
  }

  if (*met_cmd) {
    KnotExpr e = load_expr(met_file);
    AssembledCover ac = assemble_cover(e, met_q);
    std::vector<Metabolizer> all = enumerate_metabolizers(ac.group, met_budget, met_workers);
    long long total = static_cast<long long>(all.size());
    std::vector<Metabolizer> eq = equivariant_filter(ac.group, std::move(all));
    ordered_json j;
    j["knot"] = describe_expr(e);
    j["q"] = ac.q;
    j["total"] = total;
    j["equivariant"] = static_cast<long long>(eq.size());
    ordered_json ms = ordered_json::array();
    if (met_all) {
      std::vector<Metabolizer> again = enumerate_metabolizers(ac.group, met_budget, met_workers);
      for (const Metabolizer& m : again) ms.push_back(metabolizer_to_json(m));
    } else {
      for (const Metabolizer& m : eq) ms.push_back(metabolizer_to_json(m));
    }
    j["metabolizers"] = ms;
    emit(j, output);
    return 0;
  }

  if (*sig_cmd) {
    KnotExpr e = load_expr(sig_file);
    SeifertMatrix v = realize(e);
    std::vector<Q> pts;
    if (sig_points.empty())
      pts = {Q(1, 8), Q(1, 4), Q(3, 8), Q(1, 2)};
    else
      for (const std::string& s : sig_points) pts.push_back(parse_q(s));
    ordered_json j;
    j["knot"] = describe_expr(e);
    ordered_json vals = ordered_json::array();
    for (const Q& r : pts) {
      ordered_json pj;
      pj["r"] = q_to_json(r);
      try {
        pj["sigma"] = levine_tristram(v, r);
      } catch (const std::domain_error& err) {
        pj["error"] = err.what();
      }
      vals.push_back(pj);
    }
    j["values"] = vals;
    emit(j, output);
    return 0;
  }

  if (*dn_cmd) {
    DNormCertificate c = is_d_norm(parse_z(dn_n), parse_z(dn_d));
    ordered_json j;
    j["n"] = z_to_json(c.n);
    j["d"] = z_to_json(c.d);
    j["verdict"] = c.verdict;
    if (c.witness) {
      ordered_json w;
      w["p"] = z_to_json(c.witness->p);
      w["order"] = static_cast<long long>(c.witness->order);
      w["exponent"] = c.witness->exponent;
      j["witness"] = w;
    } else {
      j["witness"] = nullptr;
    }
    emit(j, output);
    return 0;
  }

  if (*fam_cmd) {
    if (fam_count < 1) throw std::domain_error("count must be >= 1");
    PrimePairFamily f = generate_family(fam_count, fam_scan);
    ordered_json j = ordered_json::array();
    for (const FamilyElement& el : f.elements) {
      ordered_json ej;
      ej["n"] = z_to_json(el.n);
      ej["p"] = z_to_json(el.p);
      ej["q"] = z_to_json(el.q);
      j.push_back(ej);
    }
    emit(j, output);
    return 0;
  }

  if (*ob_single) {
    KnotExpr e = load_expr(os_file);
    DLedger ledger = resolve_ledger(os_ledger);
    ObstructOptions opt;
    opt.budget = os_budget;
    opt.workers = os_workers;
    opt.swap_roles = os_swap;
    ObstructionCertificate cert = obstruct_single(e, os_q, ledger, opt);
    emit(cert.to_json(), output);
    return 0;
  }

  if (*ob_comb) {
    DLedger ledger = resolve_ledger(oc_ledger);
    std::vector<Z> coeffs;
    for (const std::string& s : oc_coeffs) coeffs.push_back(parse_z(s));
    SeifertMatrix ja = oc_ja.empty() ? builtin({{-1, 1}, {0, -1}}) : load_matrix(oc_ja);
    SeifertMatrix jb = oc_jb.empty() ? builtin({{-1, 1}, {0, 0}}) : load_matrix(oc_jb);
    PrimePairFamily fam = generate_family(static_cast<int>(coeffs.size()), oc_scan);
    ObstructOptions opt;
    opt.budget = oc_budget;
    opt.workers = oc_workers;
    opt.swap_roles = oc_swap;
    ObstructionCertificate cert = obstruct_combination(fam, coeffs, ja, jb, ledger, opt);
    emit(cert.to_json(), output);
    return 0;
  }

  if (*vr_cmd) {
    KnotExpr e = load_expr(vr_file);
    ObstructOptions opt;
    opt.budget = vr_budget;
    opt.workers = vr_workers;
    ReductionReport r = verify_reduction_lemma(e, vr_q, opt);
    emit(r.report, output);
    return r.all_equal ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    ordered_json err;
    err["error"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 1;
  }
}
