#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "slicekit/cover.hpp"

namespace slicekit {

// Self-annihilating subgroup M = M^perp of the linking form. `elements` is
// the full sorted element list (coefficient vectors over the canonical
// generators); it is the identity used for deduplication and membership.
struct Metabolizer {
  std::vector<Character> generators;
  std::vector<std::vector<Z>> elements;
  bool equivariant = false;
  // (p, eigenvalue, dim of intersection with that eigenspace), filled by
  // equivariant_filter for elementary primary parts.
  std::vector<std::tuple<Z, Z, int>> eigen_split;
};

// Only the group data of CoverHomology (factors, order, linking, deck, q) is
// consulted here, so synthetic forms can be fed in by tests.
std::vector<Metabolizer> enumerate_metabolizers(const CoverHomology& h,
                                                long long budget = 100000000,
                                                int workers = 1);

std::vector<Metabolizer> equivariant_filter(const CoverHomology& h,
                                            std::vector<Metabolizer> ms);

// Full subgroup-lattice scan with literal M = M^perp checks. Guarded to
// |H| <= 625.
std::vector<Metabolizer> brute_force_metabolizers(const CoverHomology& h);

// Order and pairwise-linking assertions, run on every enumerator output.
void assert_metabolizer(const CoverHomology& h, const Metabolizer& m);

bool metabolizer_contains(const Metabolizer& m, const CoverHomology& h, const Character& x);

// Named eigenline basis of a two-summand configuration: alpha/beta span the
// first copy's lines, alpha2/beta2 the reversed copy's.
struct EigenFrame {
  Z p;
  Z lambda2, lambda4;  // eigenvalue of <alpha, beta2> resp. <beta, alpha2>
  Character alpha, beta, alpha2, beta2;
};

struct MetabolizerFamily {
  std::string tag;  // pure-2-eigenspace | pure-4-eigenspace | mixed-pure-pair | graph-type
  std::optional<Z> r;
  // For mixed-pure-pair: which axis lines, as labels from
  // {alpha, beta, alpha2, beta2}.
  std::vector<std::string> axes;
};

MetabolizerFamily classify(const Metabolizer& m, const CoverHomology& h, const EigenFrame& f);

nlohmann::ordered_json metabolizer_to_json(const Metabolizer& m);

}  // namespace slicekit
