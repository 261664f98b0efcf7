#include "slicekit/primegen.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

#include "slicekit/jsonutil.hpp"
#include "slicekit/modp.hpp"

namespace slicekit {

namespace {

constexpr unsigned long kTrialBound = 1000000;
constexpr long kRhoStepsPerSeed = 20000;
constexpr int kRhoSeeds = 8;

bool miller_rabin_round(const Z& n, const Z& base, const Z& d, unsigned long s) {
  Z x = mod_pow(mod_floor(base, n), d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = mod_floor(x * x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool miller_rabin(const Z& n, const std::vector<Z>& bases) {
  Z d = n - 1;
  unsigned long s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (const Z& b : bases) {
    if (mod_floor(b, n) == 0) continue;
    if (!miller_rabin_round(n, b, d, s)) return false;
  }
  return true;
}

// Primes up to the trial bound, grouped into batches whose product fits a
// single limb. One big-number remainder per batch replaces one divisibility
// test per prime.
struct TrialTables {
  std::vector<unsigned long> primes;
  std::vector<unsigned long> batch_product;
  std::vector<std::pair<size_t, size_t>> batch_span;  // [begin, end) into primes
};

const TrialTables& trial_tables() {
  static const TrialTables tables = [] {
    TrialTables t;
    std::vector<bool> composite(kTrialBound + 1, false);
    for (unsigned long i = 2; i <= kTrialBound; ++i) {
      if (composite[i]) continue;
      t.primes.push_back(i);
      for (unsigned long j = i * i; j <= kTrialBound; j += i) composite[j] = true;
    }
    size_t i = 0;
    while (i < t.primes.size()) {
      unsigned long prod = 1;
      size_t begin = i;
      while (i < t.primes.size() && prod <= ULONG_MAX / t.primes[i]) prod *= t.primes[i++];
      t.batch_product.push_back(prod);
      t.batch_span.emplace_back(begin, i);
    }
    return t;
  }();
  return tables;
}

Z brent_rho(const Z& n, long max_steps, long c_seed) {
  // Brent's cycle detection with batched gcds; deterministic parameters.
  Z y = 2, c = c_seed, m = 128;
  Z g = 1, r = 1, q = 1, x = 0, ys = 0;
  long steps = 0;
  auto f = [&](const Z& v) { return mod_floor(v * v + c, n); };
  while (g == 1) {
    x = y;
    for (Z i = 0; i < r; ++i) y = f(y);
    Z k = 0;
    while (k < r && g == 1) {
      ys = y;
      Z lim = r - k;
      if (m < lim) lim = m;
      for (Z i = 0; i < lim; ++i) {
        y = f(y);
        q = mod_floor(q * (x - y), n);
        if (++steps > max_steps) return 0;
      }
      g = gcd(q, n);
      k += m;
    }
    r *= 2;
    if (steps > max_steps) return 0;
  }
  if (g == n) {
    // Backtrack one step at a time.
    do {
      ys = f(ys);
      g = gcd(abs(x - ys), n);
      if (++steps > max_steps * 2) return 0;
    } while (g == 1);
  }
  if (g == n) return 0;
  return g;
}

}  // namespace

bool is_certified_prime(const Z& n) {
  if (n < 2) return false;
  static const unsigned long small_primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                               23, 29, 31, 37, 41, 43, 47};
  for (unsigned long p : small_primes) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  Z limit;
  mpz_ui_pow_ui(limit.get_mpz_t(), 2, 64);
  if (n < limit) {
    // Deterministic base set for the 64-bit range.
    static const std::vector<Z> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    return miller_rabin(n, bases);
  }
  if (mpz_probab_prime_p(n.get_mpz_t(), 5) == 0) return false;
  static const std::vector<Z> bases{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  return miller_rabin(n, bases);
}

namespace {

// Splits a composite with no factor below the trial bound; 0 on budget
// exhaustion. The step budget shrinks with the input size: an iteration on a
// thousands-of-bits number costs far more, while the reachable factor range
// (roughly the square of the step count) does not grow with the input.
Z rho_split(const Z& n) {
  size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  long steps = kRhoStepsPerSeed;
  if (bits > 2048)
    steps = 1000;
  else if (bits > 512)
    steps = 5000;
  for (int seed = 1; seed <= kRhoSeeds; ++seed) {
    Z g = brent_rho(n, steps, seed);
    if (g > 1 && g < n) return g;
  }
  return 0;
}

void factor_rec(const Z& n, std::vector<Z>& primes) {
  if (n == 1) return;
  if (is_certified_prime(n)) {
    primes.push_back(n);
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Z r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    factor_rec(r, primes);
    factor_rec(r, primes);
    return;
  }
  Z g = rho_split(n);
  if (g == 0) throw std::domain_error("factorization budget exhausted");
  factor_rec(g, primes);
  factor_rec(n / g, primes);
}

}  // namespace

std::vector<std::pair<Z, int>> factorize(const Z& n) {
  if (n < 1) throw std::domain_error("factorize requires a positive integer");
  Z rest = n;
  std::vector<Z> primes;
  for (unsigned long d = 2; d <= kTrialBound; d = (d == 2 ? 3 : d + 2)) {
    if (Z(d) * d > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
      primes.emplace_back(d);
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
    }
  }
  if (rest > 1) factor_rec(rest, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<Z, int>> out;
  for (const Z& p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.emplace_back(p, 1);
  }
  return out;
}

SemiprimeCheck factor_semiprime_check(const Z& v) {
  SemiprimeCheck rej;
  if (v < 2) return rej;
  Z rest = v;
  std::vector<Z> small;
  const TrialTables& tt = trial_tables();
  for (size_t bi = 0; bi < tt.batch_product.size(); ++bi) {
    unsigned long first = tt.primes[tt.batch_span[bi].first];
    if (Z(first) * first > rest) break;
    unsigned long r = mpz_fdiv_ui(rest.get_mpz_t(), tt.batch_product[bi]);
    for (size_t i = tt.batch_span[bi].first; i < tt.batch_span[bi].second; ++i) {
      unsigned long d = tt.primes[i];
      if (r % d != 0) continue;
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
      if (mpz_divisible_ui_p(rest.get_mpz_t(), d)) return rej;  // square factor
      small.emplace_back(d);
      if (small.size() > 2) return rej;
      r = mpz_fdiv_ui(rest.get_mpz_t(), tt.batch_product[bi]);
    }
  }
  if (rest == 1) {
    if (small.size() == 1) return {true, small[0], 1};
    if (small.size() == 2) return {true, small[0], small[1]};
    return rej;
  }
  // Two small factors plus a leftover cofactor already exceeds two primes.
  if (small.size() == 2) return rej;
  // One-round triage before the full test.
  if (!miller_rabin(rest, {Z(2)})) {
    // Composite remainder: with any small factor found the count exceeds two.
    if (!small.empty()) return rej;
    if (mpz_perfect_square_p(rest.get_mpz_t())) return rej;
    Z g = rho_split(rest);
    if (g == 0) return rej;  // undecided within budget: conservative reject
    Z other = rest / g;
    if (g == other) return rej;
    if (!is_certified_prime(g) || !is_certified_prime(other)) return rej;
    if (g > other) std::swap(g, other);
    return {true, g, other};
  }
  if (!is_certified_prime(rest)) return rej;
  if (small.empty()) return {true, rest, 1};
  if (small.size() == 1) return {true, small[0], rest};
  return rej;
}

FamilyElement next_family_element(PrimePairFamily& f, long scan_bound) {
  const Z& big_p = f.product;
  for (long m = 1; m <= scan_bound; ++m) {
    Z v = 3 * big_p * big_p * m * m - 3 * big_p * m + 1;
    if (v % 2 == 0) throw std::logic_error("family value must be odd");
    if (v < 2) continue;
    SemiprimeCheck c = factor_semiprime_check(v);
    if (!c.accept) continue;
    bool fresh = true;
    for (const Z& used : f.used_primes)
      if (c.p == used || c.q == used) {
        fresh = false;
        break;
      }
    if (!fresh) continue;
    if (gcd(v, big_p) != 1) throw std::logic_error("family value shares a factor with P");
    FamilyElement e;
    e.n = big_p * m - 1;
    e.p = c.p;
    e.q = c.q;
    e.m0 = m;
    e.p_before = big_p;
    f.elements.push_back(e);
    f.used_primes.push_back(c.p);
    f.product *= c.p;
    if (c.q != 1) {
      f.used_primes.push_back(c.q);
      f.product *= c.q;
    }
    return e;
  }
  throw std::domain_error("family search exhausted the scan bound");
}

PrimePairFamily generate_family(int k, long scan_bound) {
  if (k < 1) throw std::domain_error("family length must be positive");
  PrimePairFamily f;
  for (int i = 0; i < k; ++i) next_family_element(f, scan_bound);
  validate_family(f);
  return f;
}

void validate_family(const PrimePairFamily& f) {
  std::vector<Z> seen;
  for (const FamilyElement& e : f.elements) {
    if (3 * e.n * e.n + 3 * e.n + 1 != e.p * e.q)
      throw std::logic_error("family element fails 3n^2+3n+1 = p*q");
    if (!is_certified_prime(e.p) || e.p % 2 == 0)
      throw std::logic_error("family element p is not an odd prime");
    if (e.q != 1 && (!is_certified_prime(e.q) || e.q % 2 == 0))
      throw std::logic_error("family element q is neither 1 nor an odd prime");
    if (e.p == e.q) throw std::logic_error("family element primes must be distinct");
    for (const Z& s : seen)
      if (s == e.p || (e.q != 1 && s == e.q))
        throw std::logic_error("family primes must be pairwise distinct");
    seen.push_back(e.p);
    if (e.q != 1) seen.push_back(e.q);
  }
  if (!f.elements.empty() && f.elements[0].n != 1)
    throw std::logic_error("family must start at n = 1");
}

nlohmann::ordered_json family_element_to_json(const FamilyElement& e) {
  nlohmann::ordered_json j;
  j["n"] = z_to_json(e.n);
  j["p"] = z_to_json(e.p);
  j["q"] = z_to_json(e.q);
  j["m0"] = z_to_json(e.m0);
  j["P_before"] = z_to_json(e.p_before);
  return j;
}

}  // namespace slicekit
