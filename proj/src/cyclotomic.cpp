#include "slicekit/cyclotomic.hpp"

#include <mpfr.h>

#include <map>
#include <stdexcept>

namespace slicekit {

namespace {

using PolyQ = std::vector<Q>;

PolyQ qtrim(PolyQ p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

PolyQ qmul(const PolyQ& a, const PolyQ& b) {
  if (a.empty() || b.empty()) return {};
  PolyQ r(a.size() + b.size() - 1, Q(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return qtrim(std::move(r));
}

// num = q * den + rem over Q[x].
void qdivmod(PolyQ num, const PolyQ& den, PolyQ& quot, PolyQ& rem) {
  PolyQ d = qtrim(den);
  if (d.empty()) throw std::domain_error("polynomial division by zero");
  num = qtrim(std::move(num));
  if (num.size() < d.size()) {
    quot = {};
    rem = std::move(num);
    return;
  }
  quot.assign(num.size() - d.size() + 1, Q(0));
  Q lead_inv = 1 / d.back();
  for (int i = static_cast<int>(quot.size()) - 1; i >= 0; --i) {
    Q c = num[i + d.size() - 1] * lead_inv;
    quot[i] = c;
    if (c == 0) continue;
    for (size_t j = 0; j < d.size(); ++j) num[i + j] -= c * d[j];
  }
  rem = qtrim(std::move(num));
}

PolyQ cyclotomic_poly(int b) {
  static std::map<int, PolyQ> cache;
  auto it = cache.find(b);
  if (it != cache.end()) return it->second;
  PolyQ num(b + 1, Q(0));
  num[0] = -1;
  num[b] = 1;
  for (int d = 1; d < b; ++d) {
    if (b % d != 0) continue;
    PolyQ quot, rem;
    qdivmod(num, cyclotomic_poly(d), quot, rem);
    if (!rem.empty()) throw std::logic_error("cyclotomic division left a remainder");
    num = std::move(quot);
  }
  cache[b] = num;
  return num;
}

}  // namespace

Cyclotomic make_cyclotomic(int b) {
  if (b < 1) throw std::domain_error("cyclotomic index must be positive");
  Cyclotomic f;
  f.b = b;
  f.phi = cyclotomic_poly(b);
  f.dim = static_cast<int>(f.phi.size()) - 1;
  return f;
}

CElem c_zero(const Cyclotomic& f) { return CElem(f.dim, Q(0)); }

CElem c_from_q(const Cyclotomic& f, const Q& v) {
  CElem e = c_zero(f);
  if (f.dim > 0) e[0] = v;
  return e;
}

namespace {

CElem reduce(const Cyclotomic& f, PolyQ p) {
  PolyQ quot, rem;
  qdivmod(std::move(p), f.phi, quot, rem);
  rem.resize(f.dim, Q(0));
  return rem;
}

}  // namespace

CElem c_zeta_pow(const Cyclotomic& f, long k) {
  long e = ((k % f.b) + f.b) % f.b;
  PolyQ p(e + 1, Q(0));
  p[e] = 1;
  return reduce(f, std::move(p));
}

bool c_is_zero(const CElem& a) {
  for (const Q& c : a)
    if (c != 0) return false;
  return true;
}

CElem c_add(const CElem& a, const CElem& b) {
  CElem r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

CElem c_sub(const CElem& a, const CElem& b) {
  CElem r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

CElem c_neg(CElem a) {
  for (Q& c : a) c = -c;
  return a;
}

CElem c_mul(const Cyclotomic& f, const CElem& a, const CElem& b) {
  return reduce(f, qmul(a, b));
}

CElem c_conj(const Cyclotomic& f, const CElem& a) {
  PolyQ p(f.b, Q(0));
  for (int k = 0; k < f.dim; ++k) {
    if (a[k] == 0) continue;
    p[(f.b - k) % f.b] += a[k];
  }
  return reduce(f, std::move(p));
}

CElem c_inv(const Cyclotomic& f, const CElem& a) {
  if (c_is_zero(a)) throw std::domain_error("division by zero in cyclotomic field");
  // Extended Euclid over Q[x]: s*a + t*phi = gcd (a unit).
  PolyQ r0 = f.phi, r1 = qtrim(a);
  PolyQ s0{}, s1{Q(1)};
  while (!r1.empty()) {
    PolyQ quot, rem;
    qdivmod(r0, r1, quot, rem);
    PolyQ snew = s0;
    PolyQ qs = qmul(quot, s1);
    snew.resize(std::max(snew.size(), qs.size()), Q(0));
    for (size_t i = 0; i < qs.size(); ++i) snew[i] -= qs[i];
    snew = qtrim(std::move(snew));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(snew);
  }
  if (r0.size() != 1) throw std::domain_error("element is a zero divisor");
  Q inv_g = 1 / r0[0];
  for (Q& c : s0) c *= inv_g;
  return reduce(f, std::move(s0));
}

CElem c_eval_poly(const Cyclotomic& f, const std::vector<Z>& poly, long k) {
  CElem acc = c_zero(f);
  CElem zk = c_zeta_pow(f, k);
  for (int i = static_cast<int>(poly.size()) - 1; i >= 0; --i) {
    acc = c_mul(f, acc, zk);
    acc = c_add(acc, c_from_q(f, Q(poly[i])));
  }
  return acc;
}

namespace {

// Accumulates sum_k a_k cos(2*pi*k/b) into [lo, hi] at the given precision.
void real_interval(const Cyclotomic& f, const CElem& a, mpfr_prec_t prec, mpfr_t lo,
                   mpfr_t hi) {
  mpfr_set_zero(lo, 0);
  mpfr_set_zero(hi, 0);
  mpfr_t pi_lo, pi_hi, t_lo, t_hi, mid, cs, w, c_lo, c_hi, term;
  mpfr_inits2(prec, pi_lo, pi_hi, t_lo, t_hi, mid, cs, w, c_lo, c_hi, term, (mpfr_ptr)0);
  mpfr_const_pi(pi_lo, MPFR_RNDD);
  mpfr_const_pi(pi_hi, MPFR_RNDU);
  for (int k = 0; k < f.dim; ++k) {
    if (a[k] == 0) continue;
    // angle = 2*pi*k/b as an interval
    Q frac = Q(2 * k) / Q(f.b);
    mpfr_mul_q(t_lo, pi_lo, frac.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(t_hi, pi_hi, frac.get_mpq_t(), MPFR_RNDU);
    // cos over the interval via the Lipschitz bound around the midpoint
    mpfr_add(mid, t_lo, t_hi, MPFR_RNDN);
    mpfr_div_ui(mid, mid, 2, MPFR_RNDN);
    mpfr_cos(cs, mid, MPFR_RNDN);
    mpfr_sub(w, t_hi, t_lo, MPFR_RNDU);
    mpfr_set_ui_2exp(term, 1, -static_cast<mpfr_exp_t>(prec) + 8, MPFR_RNDU);
    mpfr_add(w, w, term, MPFR_RNDU);
    mpfr_sub(c_lo, cs, w, MPFR_RNDD);
    mpfr_add(c_hi, cs, w, MPFR_RNDU);
    // multiply by the exact rational a_k and accumulate
    if (a[k] > 0) {
      mpfr_mul_q(term, c_lo, a[k].get_mpq_t(), MPFR_RNDD);
      mpfr_add(lo, lo, term, MPFR_RNDD);
      mpfr_mul_q(term, c_hi, a[k].get_mpq_t(), MPFR_RNDU);
      mpfr_add(hi, hi, term, MPFR_RNDU);
    } else {
      mpfr_mul_q(term, c_hi, a[k].get_mpq_t(), MPFR_RNDD);
      mpfr_add(lo, lo, term, MPFR_RNDD);
      mpfr_mul_q(term, c_lo, a[k].get_mpq_t(), MPFR_RNDU);
      mpfr_add(hi, hi, term, MPFR_RNDU);
    }
  }
  mpfr_clears(pi_lo, pi_hi, t_lo, t_hi, mid, cs, w, c_lo, c_hi, term, (mpfr_ptr)0);
}

}  // namespace

int real_sign(const Cyclotomic& f, const CElem& a) {
  if (c_is_zero(a)) return 0;
  for (mpfr_prec_t prec = 128; prec <= 65536; prec *= 2) {
    mpfr_t lo, hi;
    mpfr_inits2(prec, lo, hi, (mpfr_ptr)0);
    real_interval(f, a, prec, lo, hi);
    int s = 0;
    if (mpfr_sgn(lo) > 0)
      s = 1;
    else if (mpfr_sgn(hi) < 0)
      s = -1;
    mpfr_clears(lo, hi, (mpfr_ptr)0);
    if (s != 0) return s;
  }
  throw std::logic_error("sign determination did not converge");
}

}  // namespace slicekit
