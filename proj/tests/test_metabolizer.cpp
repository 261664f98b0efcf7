#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "slicekit/certify.hpp"
#include "slicekit/metabolizer.hpp"

using namespace slicekit;

namespace {

// Synthetic rational homology sphere data: factors, diagonal-free linking
// given as an explicit matrix of fractions, deck defaulting to the identity.
CoverHomology synthetic(const std::vector<long>& factors,
                        const std::vector<std::vector<Q>>& lk) {
  CoverHomology h;
  h.q = 3;
  h.order = 1;
  for (long f : factors) {
    h.factors.push_back(f);
    h.order *= f;
  }
  int n = static_cast<int>(factors.size());
  h.deck = MatZ::identity(n);
  h.linking = MatQ(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h.linking.at(i, j) = lk[i][j];
  return h;
}

std::set<std::vector<std::vector<Z>>> element_sets(const std::vector<Metabolizer>& ms) {
  std::set<std::vector<std::vector<Z>>> out;
  for (const Metabolizer& m : ms) out.insert(m.elements);
  return out;
}

KnotExpr k1_sum_expr() {
  SatelliteKnot k;
  k.label = "R(D,J)";
  k.pattern = rn_model(1);
  MatZ j(2, 2), d(2, 2);
  j.at(0, 0) = -1;
  j.at(0, 1) = 1;
  j.at(1, 1) = 5;
  d.at(0, 0) = -1;
  d.at(0, 1) = 1;
  k.companions.push_back(Companion{0, SeifertMatrix(j), "J"});
  k.companions.push_back(Companion{1, SeifertMatrix(d), "D"});
  k.validate();
  KnotTerm plain, flipped;
  plain.knot = k;
  flipped.knot = k;
  flipped.reversed = true;
  flipped.mirrored = true;
  KnotExpr e;
  e.terms.push_back(plain);
  e.terms.push_back(flipped);
  return e;
}

}  // namespace

TEST_CASE("hyperbolic plane over Z3 has two metabolizers") {
  CoverHomology h = synthetic({3, 3}, {{Q(0), Q(1, 3)}, {Q(1, 3), Q(0)}});
  std::vector<Metabolizer> ms = enumerate_metabolizers(h);
  CHECK(ms.size() == 2);
  // the two isotropic lines are the axes
  std::set<std::vector<std::vector<Z>>> expected{
      {{Z(0), Z(0)}, {Z(1), Z(0)}, {Z(2), Z(0)}},
      {{Z(0), Z(0)}, {Z(0), Z(1)}, {Z(0), Z(2)}}};
  CHECK(element_sets(ms) == expected);
  for (const Metabolizer& m : ms) {
    REQUIRE(m.generators.size() == 1);
    CHECK(m.elements.size() == 3);
    CHECK_NOTHROW(assert_metabolizer(h, m));
  }
}

TEST_CASE("diagonal form with equal squares splits along x = +-y") {
  CoverHomology h = synthetic({5, 5}, {{Q(1, 5), Q(0)}, {Q(0), Q(4, 5)}});
  // x^2 + 4y^2 = 0 mod 5 along y = +-2x... solutions to 1 + 4t^2 = 0: t^2 = 1
  std::vector<Metabolizer> ms = enumerate_metabolizers(h);
  CHECK(ms.size() == 2);
}

TEST_CASE("anisotropic diagonal form has no metabolizer") {
  // x^2 + 2y^2 = 0 mod 5 has no nonzero solution: -2 = 3 is not a square
  CoverHomology h = synthetic({5, 5}, {{Q(1, 5), Q(0)}, {Q(0), Q(2, 5)}});
  CHECK(enumerate_metabolizers(h).empty());
}

TEST_CASE("optimized enumerator agrees with the subgroup-lattice scan") {
  std::vector<CoverHomology> cases;
  cases.push_back(synthetic({3, 3}, {{Q(0), Q(1, 3)}, {Q(1, 3), Q(0)}}));
  cases.push_back(synthetic({5, 5}, {{Q(1, 5), Q(0)}, {Q(0), Q(4, 5)}}));
  cases.push_back(synthetic({5, 5}, {{Q(1, 5), Q(0)}, {Q(0), Q(2, 5)}}));
  cases.push_back(synthetic({9, 9}, {{Q(0), Q(1, 9)}, {Q(1, 9), Q(0)}}));
  cases.push_back(synthetic({3, 3, 3, 3}, {{Q(0), Q(1, 3), Q(0), Q(0)},
                                           {Q(1, 3), Q(0), Q(0), Q(0)},
                                           {Q(0), Q(0), Q(0), Q(2, 3)},
                                           {Q(0), Q(0), Q(2, 3), Q(0)}}));
  cases.push_back(synthetic({15, 15}, {{Q(0), Q(1, 15)}, {Q(1, 15), Q(0)}}));
  cases.push_back(synthetic({3, 3, 9}, {{Q(1, 3), Q(0), Q(0)},
                                        {Q(0), Q(2, 3), Q(0)},
                                        {Q(0), Q(0), Q(1, 9)}}));
  for (const CoverHomology& h : cases) {
    CAPTURE(h.order.get_str());
    std::vector<Metabolizer> fast = enumerate_metabolizers(h);
    std::vector<Metabolizer> slow = brute_force_metabolizers(h);
    CHECK(element_sets(fast) == element_sets(slow));
  }
}

TEST_CASE("two orthogonal hyperbolic planes over Z3 carry eight metabolizers") {
  CoverHomology h = synthetic({3, 3, 3, 3}, {{Q(0), Q(1, 3), Q(0), Q(0)},
                                             {Q(1, 3), Q(0), Q(0), Q(0)},
                                             {Q(0), Q(0), Q(0), Q(2, 3)},
                                             {Q(0), Q(0), Q(2, 3), Q(0)}});
  // split form in dimension 4: 2(q + 1) maximal isotropic subspaces
  CHECK(enumerate_metabolizers(h).size() == 8);
}

TEST_CASE("hyperbolic Z9 x Z9: the non-elementary route finds all three") {
  CoverHomology h = synthetic({9, 9}, {{Q(0), Q(1, 9)}, {Q(1, 9), Q(0)}});
  // two cyclic axes plus the elementary subgroup 3Z9 x 3Z9
  CHECK(enumerate_metabolizers(h).size() == 3);
}

TEST_CASE("mixed-exponent group Z3 x Z3 x Z9") {
  // diag(1/3, 2/3, 1/9): the only isotropic order-3 piece of the Z9 summand
  // is 3Z9, and the small block contributes the two lines x = +-y
  CoverHomology h = synthetic({3, 3, 9}, {{Q(1, 3), Q(0), Q(0)},
                                          {Q(0), Q(2, 3), Q(0)},
                                          {Q(0), Q(0), Q(1, 9)}});
  CHECK(enumerate_metabolizers(h).size() == 2);
}

TEST_CASE("non-square order admits no metabolizer") {
  CoverHomology h = synthetic({3, 9}, {{Q(1, 3), Q(0)}, {Q(0), Q(4, 9)}});
  CHECK_THROWS_AS(enumerate_metabolizers(h), std::domain_error);
}

TEST_CASE("brute force guard") {
  CoverHomology big = synthetic({7, 7, 7, 7}, {{Q(0), Q(1, 7), Q(0), Q(0)},
                                               {Q(1, 7), Q(0), Q(0), Q(0)},
                                               {Q(0), Q(0), Q(0), Q(6, 7)},
                                               {Q(0), Q(0), Q(6, 7), Q(0)}});
  CHECK_THROWS_AS(brute_force_metabolizers(big), std::domain_error);
}

TEST_CASE("budget is enforced") {
  CoverHomology h = synthetic({7, 7, 7, 7}, {{Q(0), Q(1, 7), Q(0), Q(0)},
                                             {Q(1, 7), Q(0), Q(0), Q(0)},
                                             {Q(0), Q(0), Q(0), Q(6, 7)},
                                             {Q(0), Q(0), Q(6, 7), Q(0)}});
  CHECK_THROWS_AS(enumerate_metabolizers(h, 3), std::domain_error);
}

TEST_CASE("assembled K1 # -r(K1) cover: counts, families, equivariance") {
  AssembledCover ac = assemble_cover(k1_sum_expr(), 3);
  REQUIRE(ac.group.factors.size() == 4);
  for (const Z& f : ac.group.factors) CHECK(f == 7);

  std::vector<Metabolizer> all = enumerate_metabolizers(ac.group);
  // maximal isotropic subspaces of a split 4-dimensional form over F_7:
  // the two rulings of the Klein quadric, 2(7+1) lines
  CHECK(all.size() == 16);

  std::vector<Metabolizer> eq = equivariant_filter(ac.group, std::move(all));
  CHECK(eq.size() == 10);
  for (const Metabolizer& m : eq) {
    CHECK(m.equivariant);
    CHECK(m.elements.size() == 49);
    CHECK_NOTHROW(assert_metabolizer(ac.group, m));
    // deck-closure: T(m) stays inside
    for (const auto& el : m.elements) {
      Character img = apply_deck(ac.group, Character{el});
      CHECK(metabolizer_contains(m, ac.group, img));
    }
    REQUIRE(!m.eigen_split.empty());
    int total_dim = 0;
    for (const auto& [p, lambda, dim] : m.eigen_split) {
      CHECK(p == 7);
      CHECK((lambda * lambda + lambda + 1) % 7 == 0);
      total_dim += dim;
    }
    CHECK(total_dim == 2);
  }

  // worker count must not change the result
  std::vector<Metabolizer> again = enumerate_metabolizers(ac.group, 100000000, 2);
  CHECK(element_sets(again).size() == 16);
  std::vector<Metabolizer> eq2 = equivariant_filter(ac.group, std::move(again));
  CHECK(element_sets(eq2) == element_sets(eq));
}

TEST_CASE("classification of the ten equivariant metabolizers") {
  DLedger empty;
  ObstructionCertificate cert = obstruct_single(k1_sum_expr(), 3, empty);
  std::map<std::string, int> fam;
  for (const auto& v : cert.sweep) fam[v.family]++;
  CHECK(fam["pure-2-eigenspace"] == 1);
  CHECK(fam["pure-4-eigenspace"] == 1);
  CHECK(fam["mixed-pure-pair(alpha,alpha2)"] == 1);
  CHECK(fam["mixed-pure-pair(beta2,beta)"] == 1);
  int graphs = 0;
  for (const auto& [tag, n] : fam)
    if (tag.rfind("graph-type(r=", 0) == 0) graphs += n;
  CHECK(graphs == 6);
  // the graph parameters run over all of F_7^*
  for (int r = 1; r <= 6; ++r)
    CHECK(fam["graph-type(r=" + std::to_string(r) + ")"] == 1);
}

TEST_CASE("metabolizer JSON shape") {
  CoverHomology h = synthetic({3, 3}, {{Q(0), Q(1, 3)}, {Q(1, 3), Q(0)}});
  std::vector<Metabolizer> ms = enumerate_metabolizers(h);
  REQUIRE(!ms.empty());
  auto j = metabolizer_to_json(ms[0]);
  CHECK(j.contains("generators"));
  CHECK(j["order"] == 3);
  CHECK(j.contains("equivariant"));
}
