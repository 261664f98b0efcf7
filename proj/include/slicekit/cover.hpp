#pragma once

#include <utility>
#include <vector>

#include "json.hpp"
#include "slicekit/seifert.hpp"

namespace slicekit {

bool is_odd_prime_power(int q);

// Presentation of H_1 of the q-fold cyclic branched cover: block circulant
// with V on the diagonal and -V^T on the (cyclically wrapped) superdiagonal.
// Generators are ordered copy-major; the deck transformation acts as the
// block shift recorded in `shift`.
struct CoverPresentation {
  int q = 0;
  int block = 0;  // 2g
  MatZ matrix;
  MatZ shift;
  std::vector<std::pair<int, int>> labels;  // (copy index, surface generator)
};

CoverPresentation cover_presentation(const SeifertMatrix& v, int q);

// Group element written over the canonical (torsion) generators.
struct Character {
  std::vector<Z> coeffs;
};

struct CoverHomology {
  int q = 0;
  std::vector<Z> factors;  // invariant factors > 1, each dividing the next
  Z order = 1;
  // Full SNF transforms of the presentation matrix (u * A * v diagonal) and
  // the indices of the torsion canonical generators inside that coordinate
  // system.
  MatZ u, u_inv;
  std::vector<int> torsion_index;
  MatZ deck;     // deck action on torsion generators, entry (i,j) in [0, d_i)
  MatQ linking;  // lk(g_i, g_j) in [0,1)
};

// Throws std::domain_error("not a rational homology sphere") when det = 0.
CoverHomology homology(const CoverPresentation& p);

std::vector<Z> reduce_coeffs(const CoverHomology& h, std::vector<Z> c);
bool is_zero_character(const CoverHomology& h, const Character& x);
Z character_order(const CoverHomology& h, const Character& x);
Character char_add(const CoverHomology& h, const Character& x, const Character& y);
Character char_scale(const CoverHomology& h, const Character& x, const Z& s);
Character apply_deck(const CoverHomology& h, const Character& x);
Q linking_pair(const CoverHomology& h, const Character& x, const Character& y);

// The subgroup killed by p, as an action problem: basis h_i = (d_i/p) g_i
// over the generators with p | d_i, and the deck action mod p on that basis.
struct PTorsion {
  Z p;
  bool elementary = true;  // p-primary part has exponent p
  std::vector<int> indices;
  MatZ action;
};

PTorsion p_torsion(const CoverHomology& h, const Z& p);

struct Eigenspace {
  Z eigenvalue;  // mod p
  std::vector<Character> basis;
};

// Splits the p-primary part into deck eigenspaces. Requires the p-primary
// part elementary abelian and the action diagonalizable over Z_p with
// eigenvalues among the nontrivial q-th roots of unity mod p.
std::vector<Eigenspace> eigenspaces(const CoverHomology& h, const Z& p);

// Deck eigenvalues on the p-torsion subgroup; works even when the p-primary
// part is not elementary abelian.
std::vector<Z> deck_eigenvalues_mod_p(const CoverHomology& h, const Z& p);

nlohmann::ordered_json cover_report(const CoverHomology& h);

}  // namespace slicekit
