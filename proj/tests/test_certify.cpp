#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <string>

#include "doctest.h"
#include "slicekit/certify.hpp"
#include "slicekit/primegen.hpp"

using namespace slicekit;
using nlohmann::ordered_json;

namespace {

SeifertMatrix mk(const std::vector<std::vector<int>>& rows) {
  int n = static_cast<int>(rows.size());
  MatZ m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
  return SeifertMatrix(m);
}

const SeifertMatrix jmat = mk({{-1, 1}, {0, 5}});
const SeifertMatrix dmat = mk({{-1, 1}, {0, 0}});
const SeifertMatrix trefoil = mk({{-1, 1}, {0, -1}});

SatelliteKnot k1() {
  SatelliteKnot k;
  k.label = "R(D,J)";
  k.pattern = rn_model(1);
  k.companions.push_back(Companion{0, jmat, "J"});
  k.companions.push_back(Companion{1, dmat, "D"});
  k.validate();
  return k;
}

KnotExpr k1_sum() {
  KnotTerm plain, flipped;
  plain.knot = k1();
  flipped.knot = k1();
  flipped.reversed = true;
  flipped.mirrored = true;
  KnotExpr e;
  e.terms.push_back(plain);
  e.terms.push_back(flipped);
  return e;
}

DLedger test_ledger() {
  return ledger_from_json(nlohmann::json::parse(R"json([
    {"knot": "R(D,U)", "q": 3, "orbit": "4-eigenspace orbit",
     "bound": {"op": "<=", "value": "-3/2"},
     "citation": "[MR3109864] Appendix A"},
    {"knot": "K(n=1)|Ja=U", "q": 3, "orbit": "2-eigenspace orbit",
     "invariant": "d", "bound": {"op": "!=0"},
     "citation": "[MR3109864] p. 2141"},
    {"knot": "R(D,J)", "q": 3, "orbit": "4-eigenspace orbit",
     "invariant": "eta", "bound": {"op": "=", "value": 0},
     "citation": "[MR679066, MR1201584] flat disk complement"}
  ])json"));
}

std::map<std::string, int> kill_kinds(const ObstructionCertificate& c) {
  std::map<std::string, int> out;
  for (const MetabolizerVerdict& v : c.sweep) out[v.kill.killed_by]++;
  return out;
}

}  // namespace

TEST_CASE("expression descriptions") {
  CHECK(describe_expr(KnotExpr{}) == "0");
  CHECK(describe_expr(k1_sum()) == "R(D,J) # -r(R(D,J))");
  KnotExpr e;
  KnotTerm t;
  t.knot = k1();
  t.mirrored = true;
  e.terms.push_back(t);
  CHECK(describe_expr(e) == "-R(D,J)");
  e.terms[0].mirrored = false;
  e.terms[0].reversed = true;
  CHECK(describe_expr(e) == "r(R(D,J))");
}

TEST_CASE("cover assembly of the doubled knot") {
  AssembledCover ac = assemble_cover(k1_sum(), 3);
  CHECK(ac.q == 3);
  CHECK(ac.group.order == 2401);
  REQUIRE(ac.group.factors.size() == 4);
  for (const Z& f : ac.group.factors) CHECK(f == 7);
  REQUIRE(ac.copies.size() == 2);

  const CopyAssembly& a = ac.copies[0];
  CHECK(a.label == "R(D,J)");
  CHECK(a.offset == 0);
  CHECK(a.size == 2);
  CHECK(!a.net_reversed);
  CHECK(!a.net_mirrored);
  REQUIRE(a.rn.has_value());
  CHECK(*a.rn == 1);
  REQUIRE(a.companions.size() == 2);
  CHECK(a.companions[0].label == "J");
  CHECK(a.companions[1].label == "D");

  const CopyAssembly& b = ac.copies[1];
  CHECK(b.offset == 2);
  CHECK(b.size == 2);
  CHECK(b.net_reversed);
  CHECK(b.net_mirrored);
}

TEST_CASE("stored orientation variants fold into the net flags") {
  auto one_term = [](const SeifertMatrix& stored, bool rev, bool mir) {
    SatelliteKnot k;
    k.pattern = stored;
    k.label = "X";
    KnotTerm t;
    t.knot = k;
    t.reversed = rev;
    t.mirrored = mir;
    KnotExpr e;
    e.terms.push_back(t);
    return assemble_cover(e, 3).copies[0];
  };
  SeifertMatrix r1 = rn_model(1);

  CopyAssembly plain = one_term(r1, false, false);
  CHECK(*plain.rn == 1);
  CHECK(!plain.net_reversed);
  CHECK(!plain.net_mirrored);

  // a transposed matrix with the reversal flag set is the original knot
  CopyAssembly folded = one_term(r1.reversed(), true, false);
  CHECK(*folded.rn == 1);
  CHECK(!folded.net_reversed);
  CHECK(!folded.net_mirrored);

  CopyAssembly rev_only = one_term(r1.reversed(), false, false);
  CHECK(*rev_only.rn == 1);
  CHECK(rev_only.net_reversed);
  CHECK(!rev_only.net_mirrored);

  CopyAssembly mir_fold = one_term(r1.mirrored(), false, true);
  CHECK(*mir_fold.rn == 1);
  CHECK(!mir_fold.net_reversed);
  CHECK(!mir_fold.net_mirrored);

  // negation is reversal plus mirror
  CopyAssembly neg = one_term(r1.negated(), false, false);
  CHECK(*neg.rn == 1);
  CHECK(neg.net_reversed);
  CHECK(neg.net_mirrored);
}

TEST_CASE("assembly rejects bad cover degrees") {
  CHECK_THROWS_AS(assemble_cover(k1_sum(), 4), std::domain_error);
  CHECK_THROWS_AS(assemble_cover(k1_sum(), 6), std::domain_error);
  CHECK_NOTHROW(assemble_cover(k1_sum(), 5));
}

TEST_CASE("doubled knot with the ledger: every metabolizer dies") {
  ObstructionCertificate cert = obstruct_single(k1_sum(), 3, test_ledger());
  CHECK(cert.verdict == "obstructed");
  CHECK(cert.total_metabolizers == 16);
  REQUIRE(cert.sweep.size() == 10);

  auto kinds = kill_kinds(cert);
  CHECK(kinds["cg-discriminant"] == 9);
  CHECK(kinds["ledger-d"] == 1);
  CHECK(kinds["none"] == 0);

  int eta_cites = 0;
  for (const MetabolizerVerdict& v : cert.sweep) {
    if (v.kill.killed_by == "cg-discriminant") {
      REQUIRE(v.kill.detail.contains("norm_witness"));
      CHECK(v.kill.detail["norm_witness"]["p"] == 13);
      CHECK(v.kill.detail["norm_witness"]["order"] == 2);
      Z prod(v.kill.detail["product"].get<long>());
      CHECK(prod % 1261 == 0);
      for (const std::string& c : v.kill.citations)
        if (c.rfind("[MR679066", 0) == 0) ++eta_cites;
    }
    if (v.kill.killed_by == "ledger-d") {
      CHECK(v.family == "mixed-pure-pair(beta2,beta)");
      CHECK(v.kill.detail["character"] == ordered_json::array({1, 5, 0, 0}));
      CHECK(v.kill.detail["lookup"] == "R(D,U)");
      CHECK(v.kill.detail["orbit"] == "4-eigenspace orbit");
      CHECK(v.kill.detail["invariant"] == "dbar");
      CHECK(!v.kill.detail.contains("sign_folded"));
      REQUIRE(!v.kill.citations.empty());
      CHECK(v.kill.citations[0] == "[MR3109864] Appendix A");
    }
  }
  // the vanishing Casson-Gordon citation decorates the six graph kills
  CHECK(eta_cites == 6);

  std::map<std::string, int> fam;
  for (const MetabolizerVerdict& v : cert.sweep) fam[v.family]++;
  CHECK(fam["pure-2-eigenspace"] == 1);
  CHECK(fam["pure-4-eigenspace"] == 1);
  CHECK(fam["mixed-pure-pair(alpha,alpha2)"] == 1);
  CHECK(fam["mixed-pure-pair(beta2,beta)"] == 1);
}

TEST_CASE("without the ledger exactly one family survives") {
  ObstructionCertificate cert = obstruct_single(k1_sum(), 3, DLedger{});
  CHECK(cert.verdict == "inconclusive");
  auto kinds = kill_kinds(cert);
  CHECK(kinds["cg-discriminant"] == 9);
  CHECK(kinds["none"] == 1);
  for (const MetabolizerVerdict& v : cert.sweep)
    if (v.kill.killed_by == "none") CHECK(v.family == "mixed-pure-pair(beta2,beta)");
}

TEST_CASE("swapped band roles move the ledger kill to the reversed copy") {
  ObstructOptions opt;
  opt.swap_roles = true;
  ObstructionCertificate cert = obstruct_single(k1_sum(), 3, test_ledger(), opt);
  CHECK(cert.verdict == "obstructed");
  bool found = false;
  for (const MetabolizerVerdict& v : cert.sweep) {
    if (v.kill.killed_by != "ledger-d") continue;
    found = true;
    CHECK(v.kill.detail["character"] == ordered_json::array({0, 0, 1, 5}));
    CHECK(v.kill.detail["sign_folded"] == true);
    CHECK(v.kill.detail["lookup"] == "R(D,U)");
  }
  CHECK(found);
  bool noted = false;
  for (const std::string& n : cert.notes)
    if (n.find("swapped by request") != std::string::npos) noted = true;
  CHECK(noted);
}

TEST_CASE("a single copy is obstructed by discriminant plus ledger") {
  KnotExpr e;
  KnotTerm t;
  t.knot = k1();
  e.terms.push_back(t);
  ObstructionCertificate cert = obstruct_single(e, 3, test_ledger());
  CHECK(cert.verdict == "obstructed");
  CHECK(cert.total_metabolizers == 2);
  REQUIRE(cert.sweep.size() == 2);
  auto kinds = kill_kinds(cert);
  CHECK(kinds["cg-discriminant"] == 1);
  CHECK(kinds["ledger-d"] == 1);
  for (const MetabolizerVerdict& v : cert.sweep)
    if (v.kill.killed_by == "cg-discriminant")
      CHECK(v.kill.detail["product"] == 1261);
}

TEST_CASE("abstentions") {
  KnotExpr unknot;
  KnotTerm ut;
  ut.knot.label = "U";
  unknot.terms.push_back(ut);
  ObstructionCertificate cu = obstruct_single(unknot, 3, DLedger{});
  CHECK(cu.verdict == "inconclusive: no obstruction needed");

  KnotExpr tre;
  KnotTerm tt;
  tt.knot.pattern = trefoil;
  tt.knot.label = "trefoil";
  tre.terms.push_back(tt);
  ObstructionCertificate ct = obstruct_single(tre, 3, DLedger{});
  CHECK(ct.verdict == "inconclusive: theorem hypothesis fails (cover homology has even order)");

  // deeper covers have homology but no band framing
  KnotExpr r1;
  KnotTerm rt;
  rt.knot.pattern = rn_model(1);
  rt.knot.label = "R1";
  r1.terms.push_back(rt);
  ObstructionCertificate c9 = obstruct_single(r1, 9, DLedger{});
  CHECK(c9.verdict == "inconclusive");
  bool unframed = false;
  for (const std::string& n : c9.notes)
    if (n.find("prime 7 left unframed") != std::string::npos) unframed = true;
  CHECK(unframed);
}

TEST_CASE("enumeration budget propagates") {
  ObstructOptions opt;
  opt.budget = 3;
  CHECK_THROWS_AS(obstruct_single(k1_sum(), 3, DLedger{}, opt), std::domain_error);
}

TEST_CASE("combination certificate for a single family coefficient") {
  PrimePairFamily fam = generate_family(1);
  ObstructionCertificate cert =
      obstruct_combination(fam, {Z(1)}, trefoil, dmat, test_ledger());
  CHECK(cert.verdict == "obstructed");
  CHECK(cert.knot == "1*(K(n=1) # -r(K(n=1)))");
  REQUIRE(cert.components.size() == 1);

  const ObstructionCertificate& comp = cert.components[0];
  CHECK(comp.verdict == "obstructed");
  CHECK(comp.knot == "K(n=1) # -r(K(n=1))");
  CHECK(comp.total_metabolizers == 16);
  REQUIRE(comp.sweep.size() == 10);
  auto kinds = kill_kinds(comp);
  CHECK(kinds["cg-signature"] == 9);
  CHECK(kinds["ledger-d"] == 1);

  REQUIRE(!comp.gate.is_null());
  CHECK(comp.gate["n"] == 1);
  CHECK(comp.gate["coefficient"] == 1);
  REQUIRE(comp.gate["checks"].size() == 1);
  CHECK(comp.gate["checks"][0]["p"] == 7);
  CHECK(comp.gate["checks"][0]["c"] == 2);
  CHECK(comp.gate["checks"][0]["negative_multiplier"] == 1);

  for (const MetabolizerVerdict& v : comp.sweep) {
    if (v.kill.killed_by == "cg-signature") {
      CHECK(v.kill.detail["total"].get<long long>() != 0);
      CHECK(v.kill.detail["total"].get<long long>() % 2 == 0);
    } else {
      CHECK(v.kill.detail["character"] == ordered_json::array({1, 3, 0, 0}));
      CHECK(v.kill.detail["orbit"] == "2-eigenspace orbit");
      CHECK(v.kill.detail["invariant"] == "d");
      CHECK(v.kill.detail["lookup"] == "K(n=1)|Ja=U");
    }
  }
}

TEST_CASE("negative coefficients examine the mirror") {
  PrimePairFamily fam = generate_family(1);
  ObstructionCertificate cert =
      obstruct_combination(fam, {Z(-1)}, trefoil, dmat, test_ledger());
  CHECK(cert.verdict == "obstructed");
  CHECK(cert.knot == "-1*(K(n=1) # -r(K(n=1)))");
  REQUIRE(cert.components.size() == 1);
  const ObstructionCertificate& comp = cert.components[0];
  bool folded = false;
  for (const MetabolizerVerdict& v : comp.sweep)
    if (v.kill.killed_by == "ledger-d" && v.kill.detail.contains("sign_folded")) folded = true;
  CHECK(folded);
  bool noted = false;
  for (const std::string& n : comp.notes)
    if (n.find("negative coefficient") != std::string::npos) noted = true;
  CHECK(noted);
}

TEST_CASE("zero coefficients leave nothing to obstruct") {
  PrimePairFamily fam = generate_family(2);
  ObstructionCertificate cert =
      obstruct_combination(fam, {Z(0), Z(0)}, trefoil, dmat, test_ledger());
  CHECK(cert.verdict == "inconclusive: nothing to obstruct");
  CHECK(cert.knot == "0");
  CHECK(cert.components.empty());
}

TEST_CASE("zero-signature companions trip the gate") {
  PrimePairFamily fam = generate_family(1);
  ObstructionCertificate cert =
      obstruct_combination(fam, {Z(1)}, jmat, dmat, DLedger{});
  CHECK(cert.verdict == "inconclusive");
  REQUIRE(cert.components.size() == 1);
  CHECK(cert.components[0].verdict ==
        "inconclusive: signature hypothesis fails (no multiplier with a negative orbit sum)");
  CHECK(cert.components[0].gate["checks"][0]["negative_multiplier"].is_null());
}

TEST_CASE("combination input validation") {
  PrimePairFamily fam = generate_family(1);
  CHECK_THROWS_AS(obstruct_combination(fam, {Z(3)}, trefoil, dmat, DLedger{}),
                  std::domain_error);
  CHECK_THROWS_AS(obstruct_combination(fam, {Z(1), Z(1)}, trefoil, dmat, DLedger{}),
                  std::domain_error);
}

TEST_CASE("deleting trivial-Alexander summands changes no reduction input") {
  KnotExpr e;
  KnotTerm t1, t2;
  t1.knot = k1();
  t2.knot.pattern = dmat;
  t2.knot.label = "D";
  e.terms.push_back(t1);
  e.terms.push_back(t2);

  ReductionReport rr = verify_reduction_lemma(e, 3);
  CHECK(rr.all_equal);
  CHECK(rr.report["all_equal"] == true);
  CHECK(rr.report["deleted_summands"] == ordered_json::array({"D"}));
  REQUIRE(rr.report["checks"].size() == 13);
  for (const auto& c : rr.report["checks"]) CHECK(c["equal"] == true);
}

TEST_CASE("certificates are deterministic across runs and workers") {
  ObstructionCertificate a = obstruct_single(k1_sum(), 3, test_ledger());
  ObstructionCertificate b = obstruct_single(k1_sum(), 3, test_ledger());
  ObstructOptions two;
  two.workers = 2;
  ObstructionCertificate c = obstruct_single(k1_sum(), 3, test_ledger(), two);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.to_json().dump() == c.to_json().dump());
}
