#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "slicekit/seifert.hpp"

namespace slicekit {

// Levine-Tristram signature at omega = e^{2*pi*i*r}, exact. Throws
// std::domain_error("singular at root of Delta") when omega is a root of the
// Alexander polynomial.
int levine_tristram(const SeifertMatrix& v, const Q& r);

// One character coordinate of the three-term signature sum: the orbit
// multipliers are {b, c*b, c^2*b} mod p, each folded into (0, 1/2] via the
// symmetry sigma_r = sigma_{1-r}.
struct CGSignatureQuery {
  SeifertMatrix companion;
  Z p;
  Z c;  // deck eigenvalue, c^3 = 1 mod p, c != 1
  Z b;  // nonzero multiplier mod p
};

int signature_sum(const CGSignatureQuery& query);

// Smallest b in 1..p-1 whose orbit {b/p, cb/p, c^2 b/p} contains a strictly
// negative signature value, if any.
std::optional<Z> exists_negative_b(const SeifertMatrix& v, const Z& p, const Z& c);

struct DiscriminantResult {
  Z product;  // exact root product over the q-th roots of unity
  bool square = false;
  Z root = 0;  // set when square
};

DiscriminantResult discriminant(const AlexanderPolynomial& poly, int q);

struct DNormWitness {
  Z p;
  int exponent = 0;
  long order = 0;  // multiplicative order of p mod d (even for a witness)
};

struct DNormCertificate {
  Z n, d;
  bool verdict = false;
  std::optional<DNormWitness> witness;
};

// n is a d-norm when every odd-exponent prime factor of n coprime to d has
// odd multiplicative order mod d.
DNormCertificate is_d_norm(const Z& n, const Z& d);

struct LedgerBound {
  std::string op;  // "=", "<=", ">=", "!=0"
  Q value = 0;     // unused for "!=0"
};

struct LedgerEntry {
  std::string knot;
  int q = 0;
  std::string orbit;       // "*" matches any orbit descriptor
  std::string invariant;   // "d", "dbar" (default), or "eta"
  LedgerBound bound;
  std::string citation;
};

struct DLedger {
  std::vector<LedgerEntry> entries;
};

DLedger ledger_from_json(const nlohmann::json& j);
DLedger load_ledger(const std::string& path);

std::optional<LedgerEntry> ledger_lookup(const DLedger& l, const std::string& knot, int q,
                                         const std::string& orbit,
                                         const std::string& invariant = "dbar");

// The stored bound as an interval [lo, hi] (open bounds absent). For "!=0"
// both ends are absent; callers use the flag.
struct BoundInterval {
  std::optional<Q> lo, hi;
  bool nonzero = false;
};

BoundInterval bound_interval(const LedgerBound& b);

nlohmann::ordered_json dnorm_to_json(const DNormCertificate& c);

}  // namespace slicekit
