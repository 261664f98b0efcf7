#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "slicekit/mat.hpp"

namespace slicekit {

// Deterministic Miller-Rabin below 2^64; above that a Baillie-PSW style
// probable-prime test with 25 extra rounds.
bool is_certified_prime(const Z& n);

// Complete factorization with trial division to 10^6 and a step-budgeted
// Brent rho. Throws std::domain_error("factorization budget exhausted") when
// a cofactor cannot be split within budget.
std::vector<std::pair<Z, int>> factorize(const Z& n);

struct SemiprimeCheck {
  bool accept = false;
  Z p = 0, q = 0;  // q = 1 when v itself is prime
};

// Accepts v exactly when it is prime or a product of two distinct primes.
// Composites that resist the rho budget are rejected.
SemiprimeCheck factor_semiprime_check(const Z& v);

struct FamilyElement {
  Z n, p, q;
  Z m0;
  Z p_before;  // product of primes in use before this element was found
};

struct PrimePairFamily {
  std::vector<FamilyElement> elements;
  std::vector<Z> used_primes;
  Z product = 1;
};

// Scans m = 1, 2, ... for the least m0 with 3P^2 m^2 - 3Pm + 1 prime or a
// product of two fresh distinct primes; appends and returns the new element.
FamilyElement next_family_element(PrimePairFamily& f, long scan_bound = 1000000);

PrimePairFamily generate_family(int k, long scan_bound = 1000000);

void validate_family(const PrimePairFamily& f);

nlohmann::ordered_json family_element_to_json(const FamilyElement& e);

}  // namespace slicekit
