#include "slicekit/obstruction.hpp"

#include <fstream>
#include <stdexcept>

#include "slicekit/cyclotomic.hpp"
#include "slicekit/jsonutil.hpp"
#include "slicekit/modp.hpp"
#include "slicekit/primegen.hpp"

namespace slicekit {

int levine_tristram(const SeifertMatrix& v, const Q& r) {
  if (r <= 0 || r >= 1) throw std::domain_error("signature parameter must lie in (0,1)");
  int n = v.size();
  if (n == 0) return 0;
  Q rc = r;
  rc.canonicalize();
  long a = rc.get_num().get_si();
  long b = rc.get_den().get_si();
  Cyclotomic f = make_cyclotomic(static_cast<int>(b));
  CElem omega = c_zeta_pow(f, a);
  CElem omega_bar = c_conj(f, omega);
  // Reject roots of the Alexander polynomial.
  if (c_is_zero(c_eval_poly(f, alexander(v).coefficients(), a)))
    throw std::domain_error("singular at root of Delta");
  CElem one = c_from_q(f, Q(1));
  CElem u = c_sub(one, omega), ub = c_sub(one, omega_bar);
  // w = (1 - omega) V + (1 - conj omega) V^T, Hermitian.
  std::vector<std::vector<CElem>> w(n, std::vector<CElem>(n));
  const MatZ& m = v.entries();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CElem t = c_mul(f, u, c_from_q(f, Q(m.at(i, j))));
      t = c_add(t, c_mul(f, ub, c_from_q(f, Q(m.at(j, i)))));
      w[i][j] = std::move(t);
    }
  // Congruence diagonalization. Pivot signs give the signature.
  int sig = 0;
  for (int k = 0; k < n; ++k) {
    if (c_is_zero(w[k][k])) {
      int sel = -1;
      for (int i = k + 1; i < n; ++i)
        if (!c_is_zero(w[i][i])) {
          sel = i;
          break;
        }
      if (sel >= 0) {
        std::swap(w[k], w[sel]);
        for (int i = 0; i < n; ++i) std::swap(w[i][k], w[i][sel]);
      } else {
        int j = -1;
        for (int t = k + 1; t < n; ++t)
          if (!c_is_zero(w[k][t])) {
            j = t;
            break;
          }
        if (j < 0) throw std::logic_error("hermitian form degenerated during diagonalization");
        // e_k += conj(w_kj) e_j turns the zero diagonal into 2|w_kj|^2 > 0.
        CElem cfac = c_conj(f, w[k][j]);
        for (int t = 0; t < n; ++t) w[k][t] = c_add(w[k][t], c_mul(f, c_conj(f, cfac), w[j][t]));
        for (int t = 0; t < n; ++t) w[t][k] = c_add(w[t][k], c_mul(f, cfac, w[t][j]));
      }
    }
    CElem piv_inv = c_inv(f, w[k][k]);
    for (int i = k + 1; i < n; ++i) {
      if (c_is_zero(w[i][k])) continue;
      CElem fac = c_mul(f, w[i][k], piv_inv);
      CElem fac_bar = c_conj(f, fac);
      for (int t = 0; t < n; ++t) w[i][t] = c_sub(w[i][t], c_mul(f, fac, w[k][t]));
      for (int t = 0; t < n; ++t) w[t][i] = c_sub(w[t][i], c_mul(f, fac_bar, w[t][k]));
    }
    int s = real_sign(f, w[k][k]);
    if (s == 0) throw std::logic_error("zero pivot after diagonalization");
    sig += s;
  }
  return sig;
}

namespace {

Q fold_half(Q r) {
  // sigma_r = sigma_{1-r}; report within (0, 1/2].
  if (r > Q(1, 2)) r = Q(1) - r;
  r.canonicalize();
  return r;
}

}  // namespace

int signature_sum(const CGSignatureQuery& query) {
  const Z& p = query.p;
  if (mod_floor(query.c * query.c * query.c, p) != 1 || mod_floor(query.c, p) == 1)
    throw std::domain_error("multiplier eigenvalue must be a nontrivial cube root of 1 mod p");
  if (mod_floor(query.b, p) == 0) throw std::domain_error("orbit multiplier must be nonzero");
  int total = 0;
  Z mult = mod_floor(query.b, p);
  for (int k = 0; k < 3; ++k) {
    Q r = fold_half(Q(mult) / Q(p));
    total += levine_tristram(query.companion, r);
    mult = mod_floor(mult * query.c, p);
  }
  return total;
}

std::optional<Z> exists_negative_b(const SeifertMatrix& v, const Z& p, const Z& c) {
  for (Z b = 1; b < p; ++b) {
    Z mult = b;
    for (int k = 0; k < 3; ++k) {
      Q r = fold_half(Q(mult) / Q(p));
      int s;
      try {
        s = levine_tristram(v, r);
      } catch (const std::domain_error&) {
        mult = mod_floor(mult * c, p);
        continue;  // singular point: no usable value here
      }
      if (s < 0) return b;
      mult = mod_floor(mult * c, p);
    }
  }
  return std::nullopt;
}

DiscriminantResult discriminant(const AlexanderPolynomial& poly, int q) {
  DiscriminantResult res;
  res.product = root_product(poly, q);
  if (res.product > 0 && mpz_perfect_square_p(res.product.get_mpz_t())) {
    res.square = true;
    mpz_sqrt(res.root.get_mpz_t(), res.product.get_mpz_t());
  }
  return res;
}

namespace {

long multiplicative_order(const Z& a, const Z& d) {
  Z x = mod_floor(a, d);
  if (gcd(x, d) != 1) throw std::domain_error("order undefined: not coprime");
  Z acc = x;
  long k = 1;
  while (acc != 1) {
    acc = mod_floor(acc * x, d);
    ++k;
  }
  return k;
}

}  // namespace

DNormCertificate is_d_norm(const Z& n, const Z& d) {
  if (n < 1 || d < 2) throw std::domain_error("is_d_norm requires n >= 1 and d >= 2");
  DNormCertificate cert;
  cert.n = n;
  cert.d = d;
  cert.verdict = true;
  for (const auto& [p, e] : factorize(n)) {
    if (e % 2 == 0) continue;
    if (gcd(p, d) != 1) continue;
    long ord = multiplicative_order(p, d);
    if (ord % 2 == 0) {
      cert.verdict = false;
      cert.witness = DNormWitness{p, e, ord};
      return cert;
    }
  }
  return cert;
}

DLedger ledger_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::domain_error("ledger file must be a JSON array");
  DLedger l;
  for (const auto& ej : j) {
    LedgerEntry e;
    e.knot = ej.at("knot").get<std::string>();
    e.q = ej.at("q").get<int>();
    e.orbit = ej.at("orbit").get<std::string>();
    e.invariant = ej.contains("invariant") ? ej.at("invariant").get<std::string>() : "dbar";
    if (e.invariant != "d" && e.invariant != "dbar" && e.invariant != "eta")
      throw std::domain_error("ledger invariant must be \"d\", \"dbar\", or \"eta\"");
    const auto& bj = ej.at("bound");
    e.bound.op = bj.at("op").get<std::string>();
    if (e.bound.op != "=" && e.bound.op != "<=" && e.bound.op != ">=" && e.bound.op != "!=0")
      throw std::domain_error("ledger bound op must be one of =, <=, >=, !=0");
    if (e.bound.op != "!=0") {
      if (bj.at("value").is_string())
        e.bound.value = q_from_string(bj.at("value").get<std::string>());
      else
        e.bound.value = Q(bj.at("value").get<long>());
    }
    e.citation = ej.at("citation").get<std::string>();
    if (e.citation.empty()) throw std::domain_error("ledger entries require a citation");
    l.entries.push_back(std::move(e));
  }
  return l;
}

DLedger load_ledger(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open ledger file: " + path);
  nlohmann::json j;
  in >> j;
  return ledger_from_json(j);
}

std::optional<LedgerEntry> ledger_lookup(const DLedger& l, const std::string& knot, int q,
                                         const std::string& orbit, const std::string& invariant) {
  for (const LedgerEntry& e : l.entries) {
    if (e.knot != knot || e.q != q) continue;
    if (e.invariant != invariant) continue;
    if (e.orbit != "*" && e.orbit != orbit) continue;
    return e;
  }
  return std::nullopt;
}

BoundInterval bound_interval(const LedgerBound& b) {
  BoundInterval iv;
  if (b.op == "=") {
    iv.lo = b.value;
    iv.hi = b.value;
  } else if (b.op == "<=") {
    iv.hi = b.value;
  } else if (b.op == ">=") {
    iv.lo = b.value;
  } else {
    iv.nonzero = true;
  }
  return iv;
}

nlohmann::ordered_json dnorm_to_json(const DNormCertificate& c) {
  nlohmann::ordered_json j;
  j["n"] = z_to_json(c.n);
  j["d"] = z_to_json(c.d);
  j["verdict"] = c.verdict;
  if (c.witness) {
    nlohmann::ordered_json w;
    w["p"] = z_to_json(c.witness->p);
    w["exponent"] = c.witness->exponent;
    w["order"] = c.witness->order;
    j["witness"] = w;
  }
  return j;
}

}  // namespace slicekit
