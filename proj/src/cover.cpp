#include "slicekit/cover.hpp"

#include <algorithm>
#include <stdexcept>

#include "slicekit/jsonutil.hpp"
#include "slicekit/modp.hpp"

namespace slicekit {

bool is_odd_prime_power(int q) {
  if (q < 3 || q % 2 == 0) return false;
  int p = 0;
  int m = q;
  for (int d = 3; d * d <= m; d += 2) {
    if (m % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return true;  // q itself prime
  while (m % p == 0) m /= p;
  return m == 1;
}

CoverPresentation cover_presentation(const SeifertMatrix& v, int q) {
  if (!is_odd_prime_power(q)) throw std::domain_error("q must be an odd prime power");
  int g2 = v.size();
  int n = q * g2;
  CoverPresentation p;
  p.q = q;
  p.block = g2;
  p.matrix = MatZ(n, n);
  p.shift = MatZ(n, n);
  const MatZ& vm = v.entries();
  MatZ vt = vm.transposed();
  for (int c = 0; c < q; ++c) {
    int cn = (c + 1) % q;
    for (int i = 0; i < g2; ++i) {
      for (int j = 0; j < g2; ++j) {
        p.matrix.at(c * g2 + i, c * g2 + j) = vm.at(i, j);
        p.matrix.at(c * g2 + i, cn * g2 + j) -= vt.at(i, j);
      }
      p.shift.at(cn * g2 + i, c * g2 + i) = 1;
    }
  }
  for (int c = 0; c < q; ++c)
    for (int i = 0; i < g2; ++i) p.labels.emplace_back(c, i);
  return p;
}

namespace {

void negate_row(MatZ& m, int r) {
  for (int j = 0; j < m.cols(); ++j) m.at(r, j) = -m.at(r, j);
}

void add_row(MatZ& m, int dst, int src, const Z& f) {
  for (int j = 0; j < m.cols(); ++j) m.at(dst, j) += f * m.at(src, j);
}

void add_col(MatZ& m, int dst, int src, const Z& f) {
  for (int i = 0; i < m.rows(); ++i) m.at(i, dst) += f * m.at(i, src);
}

Z fdiv(const Z& a, const Z& b) {
  Z q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

Smith smith_normal_form(MatZ a) {
  int m = a.rows(), n = a.cols();
  MatZ u = MatZ::identity(m), v = MatZ::identity(n);
  int t = 0;
  while (t < std::min(m, n)) {
    // Pivot: smallest absolute nonzero value in the trailing submatrix,
    // row-major tie-break.
    int pi = -1, pj = -1;
    Z best;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j) {
        if (a.at(i, j) == 0) continue;
        Z mag = abs(a.at(i, j));
        if (pi < 0 || mag < best) {
          pi = i;
          pj = j;
          best = mag;
        }
      }
    if (pi < 0) break;
    a.swap_rows(t, pi);
    u.swap_rows(t, pi);
    a.swap_cols(t, pj);
    v.swap_cols(t, pj);
    if (a.at(t, t) < 0) {
      negate_row(a, t);
      negate_row(u, t);
    }
    bool again = true;
    while (again) {
      again = false;
      for (int i = t + 1; i < m; ++i) {
        if (a.at(i, t) == 0) continue;
        Z q = fdiv(a.at(i, t), a.at(t, t));
        add_row(a, i, t, -q);
        add_row(u, i, t, -q);
        if (a.at(i, t) != 0) {
          a.swap_rows(t, i);
          u.swap_rows(t, i);
          again = true;
        }
      }
      if (again) continue;
      for (int j = t + 1; j < n; ++j) {
        if (a.at(t, j) == 0) continue;
        Z q = fdiv(a.at(t, j), a.at(t, t));
        add_col(a, j, t, -q);
        add_col(v, j, t, -q);
        if (a.at(t, j) != 0) {
          a.swap_cols(t, j);
          v.swap_cols(t, j);
          again = true;
        }
      }
      if (again) continue;
      // Divisibility fixup: fold any non-multiple into the pivot row.
      for (int i = t + 1; i < m && !again; ++i)
        for (int j = t + 1; j < n && !again; ++j)
          if (a.at(i, j) % a.at(t, t) != 0) {
            add_row(a, t, i, Z(1));
            add_row(u, t, i, Z(1));
            again = true;
          }
    }
    ++t;
  }
  Smith s;
  s.d = std::move(a);
  s.u = std::move(u);
  s.v = std::move(v);
  return s;
}

namespace {

MatZ integral(const MatQ& m, const char* what) {
  MatZ out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (m.at(i, j).get_den() != 1) throw std::logic_error(what);
      out.at(i, j) = m.at(i, j).get_num();
    }
  return out;
}

}  // namespace

CoverHomology homology(const CoverPresentation& p) {
  CoverHomology h;
  h.q = p.q;
  int n = p.matrix.rows();
  if (n == 0) {
    h.u = MatZ(0, 0);
    h.u_inv = MatZ(0, 0);
    h.deck = MatZ(0, 0);
    h.linking = MatQ(0, 0);
    return h;
  }
  if (det(p.matrix) == 0) throw std::domain_error("not a rational homology sphere");
  Smith s = smith_normal_form(p.matrix);
  h.u = s.u;
  h.u_inv = integral(inverse(to_rational(s.u)), "SNF transform not unimodular");
  for (int i = 0; i < n; ++i) {
    Z d = s.d.at(i, i);
    if (d < 0) throw std::logic_error("negative invariant factor");
    if (d > 1) {
      h.torsion_index.push_back(i);
      h.factors.push_back(d);
      h.order *= d;
    }
  }
  int k = static_cast<int>(h.factors.size());
  // Deck action in canonical coordinates, restricted to torsion generators.
  MatZ deck_full = h.u * p.shift * h.u_inv;
  h.deck = MatZ(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      h.deck.at(i, j) =
          mod_floor(deck_full.at(h.torsion_index[i], h.torsion_index[j]), h.factors[i]);
  // Linking form: lk(x, y) = -x^T A^{-1} (I - S^{-1}) y mod 1 on canonical
  // generators g_i = u_inv e_{t_i}.
  MatQ ainv = inverse(to_rational(p.matrix));
  MatZ ims = MatZ::identity(n) - p.shift.transposed();
  MatQ core = ainv * to_rational(ims);
  MatZ w(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) w.at(i, j) = h.u_inv.at(i, h.torsion_index[j]);
  MatQ wq = to_rational(w);
  MatQ l = wq.transposed() * core * wq;
  h.linking = MatQ(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) h.linking.at(i, j) = mod1(-l.at(i, j));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (h.linking.at(i, j) != h.linking.at(j, i))
        throw std::logic_error("linking form not symmetric");
  return h;
}

std::vector<Z> reduce_coeffs(const CoverHomology& h, std::vector<Z> c) {
  if (c.size() != h.factors.size()) throw std::domain_error("coefficient length mismatch");
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod_floor(c[i], h.factors[i]);
  return c;
}

bool is_zero_character(const CoverHomology& h, const Character& x) {
  std::vector<Z> c = reduce_coeffs(h, x.coeffs);
  return std::all_of(c.begin(), c.end(), [](const Z& z) { return z == 0; });
}

Z character_order(const CoverHomology& h, const Character& x) {
  std::vector<Z> c = reduce_coeffs(h, x.coeffs);
  Z ord = 1;
  for (size_t i = 0; i < c.size(); ++i) {
    Z g = gcd(c[i], h.factors[i]);
    Z oi = h.factors[i] / g;
    ord = lcm(ord, oi);
  }
  return ord;
}

Character char_add(const CoverHomology& h, const Character& x, const Character& y) {
  std::vector<Z> c(h.factors.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = x.coeffs[i] + y.coeffs[i];
  return Character{reduce_coeffs(h, std::move(c))};
}

Character char_scale(const CoverHomology& h, const Character& x, const Z& s) {
  std::vector<Z> c(h.factors.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = x.coeffs[i] * s;
  return Character{reduce_coeffs(h, std::move(c))};
}

Character apply_deck(const CoverHomology& h, const Character& x) {
  int k = static_cast<int>(h.factors.size());
  std::vector<Z> c(k, Z(0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) c[i] += h.deck.at(i, j) * x.coeffs[j];
  return Character{reduce_coeffs(h, std::move(c))};
}

Q linking_pair(const CoverHomology& h, const Character& x, const Character& y) {
  int k = static_cast<int>(h.factors.size());
  Q acc(0);
  for (int i = 0; i < k; ++i) {
    if (x.coeffs[i] == 0) continue;
    for (int j = 0; j < k; ++j) {
      if (y.coeffs[j] == 0) continue;
      acc += Q(x.coeffs[i] * y.coeffs[j]) * h.linking.at(i, j);
    }
  }
  return mod1(acc);
}

PTorsion p_torsion(const CoverHomology& h, const Z& p) {
  PTorsion pt;
  pt.p = p;
  for (size_t i = 0; i < h.factors.size(); ++i)
    if (h.factors[i] % p == 0) {
      pt.indices.push_back(static_cast<int>(i));
      if ((h.factors[i] / p) % p == 0) pt.elementary = false;
    }
  int k = static_cast<int>(pt.indices.size());
  pt.action = MatZ(k, k);
  for (int j = 0; j < k; ++j) {
    int cj = pt.indices[j];
    Z scale_j = h.factors[cj] / p;
    // Image of h_j = (d_j / p) g_j must land back in the p-torsion subgroup.
    for (size_t i = 0; i < h.factors.size(); ++i) {
      Z coeff = mod_floor(h.deck.at(static_cast<int>(i), cj) * scale_j, h.factors[i]);
      if (h.factors[i] % p != 0) {
        if (coeff != 0) throw std::logic_error("deck action does not preserve p-torsion");
        continue;
      }
      Z unit = h.factors[i] / p;
      if (coeff % unit != 0) throw std::logic_error("deck action does not preserve p-torsion");
      auto pos = std::find(pt.indices.begin(), pt.indices.end(), static_cast<int>(i));
      pt.action.at(static_cast<int>(pos - pt.indices.begin()), j) =
          mod_floor(coeff / unit, p);
    }
  }
  return pt;
}

namespace {

// Roots of x^2 + x + 1 mod p via sqrt(-3), Tonelli-Shanks.
std::vector<Z> quadratic_eigenvalues(const Z& p) {
  if (p == 3) return {Z(1)};
  Z disc = mod_floor(Z(-3), p);
  Z ls = mod_pow(disc, (p - 1) / 2, p);
  if (ls != 1) return {};
  // Tonelli-Shanks square root of disc mod p.
  Z qq = p - 1;
  unsigned long ss = 0;
  while (qq % 2 == 0) {
    qq /= 2;
    ++ss;
  }
  Z z = 2;
  while (mod_pow(z, (p - 1) / 2, p) != p - 1) ++z;
  Z m = ss, c = mod_pow(z, qq, p), t = mod_pow(disc, qq, p), r = mod_pow(disc, (qq + 1) / 2, p);
  while (t != 1) {
    Z tt = t;
    Z i = 0;
    while (tt != 1) {
      tt = mod_floor(tt * tt, p);
      ++i;
    }
    Z b = c;
    for (Z e = 0; e < m - i - 1; ++e) b = mod_floor(b * b, p);
    m = i;
    c = mod_floor(b * b, p);
    t = mod_floor(t * c, p);
    r = mod_floor(r * b, p);
  }
  Z inv2 = mod_inverse(Z(2), p);
  Z r1 = mod_floor((r - 1) * inv2, p);
  Z r2 = mod_floor((-r - 1) * inv2, p);
  std::vector<Z> out{r1, r2};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Z> nontrivial_qth_roots(const Z& p, int q) {
  if (q == 3) return quadratic_eigenvalues(p);
  if (p > 1000000) throw std::domain_error("eigenvalue scan bound exceeded");
  std::vector<Z> out;
  for (Z l = 2; l < p; ++l)
    if (mod_pow(l, Z(q), p) == 1) out.push_back(l);
  return out;
}

MatZ action_minus_lambda(const MatZ& a, const Z& lambda, const Z& p) {
  MatZ m = a;
  for (int i = 0; i < m.rows(); ++i) m.at(i, i) = m.at(i, i) - lambda;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) = mod_floor(m.at(i, j), p);
  return m;
}

}  // namespace

std::vector<Eigenspace> eigenspaces(const CoverHomology& h, const Z& p) {
  if (h.order % p != 0) throw std::domain_error("p does not divide the group order");
  PTorsion pt = p_torsion(h, p);
  if (!pt.elementary) throw std::domain_error("p-primary part is not elementary abelian");
  int k = static_cast<int>(pt.indices.size());
  std::vector<Eigenspace> out;
  int total = 0;
  for (const Z& lambda : nontrivial_qth_roots(p, h.q)) {
    auto kb = kernel_mod_p(action_minus_lambda(pt.action, lambda, p), p);
    if (kb.empty()) continue;
    Eigenspace e;
    e.eigenvalue = lambda;
    for (const auto& vec : kb) {
      Character c;
      c.coeffs.assign(h.factors.size(), Z(0));
      for (int i = 0; i < k; ++i)
        c.coeffs[pt.indices[i]] = vec[i] * (h.factors[pt.indices[i]] / p);
      e.basis.push_back(std::move(c));
    }
    total += static_cast<int>(e.basis.size());
    out.push_back(std::move(e));
  }
  if (total != k)
    throw std::domain_error("deck action not diagonalizable over the given prime");
  return out;
}

std::vector<Z> deck_eigenvalues_mod_p(const CoverHomology& h, const Z& p) {
  PTorsion pt = p_torsion(h, p);
  std::vector<Z> out;
  for (const Z& lambda : nontrivial_qth_roots(p, h.q))
    if (!kernel_mod_p(action_minus_lambda(pt.action, lambda, p), p).empty())
      out.push_back(lambda);
  return out;
}

nlohmann::ordered_json cover_report(const CoverHomology& h) {
  nlohmann::ordered_json j;
  j["invariant_factors"] = nlohmann::ordered_json::array();
  for (const Z& d : h.factors) j["invariant_factors"].push_back(z_to_json(d));
  j["order"] = z_to_json(h.order);
  j["deck_matrix"] = nlohmann::ordered_json::array();
  for (int i = 0; i < h.deck.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < h.deck.cols(); ++c) row.push_back(z_to_json(h.deck.at(i, c)));
    j["deck_matrix"].push_back(row);
  }
  j["linking_matrix"] = nlohmann::ordered_json::array();
  for (int i = 0; i < h.linking.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < h.linking.cols(); ++c) row.push_back(q_to_json(h.linking.at(i, c)));
    j["linking_matrix"].push_back(row);
  }
  return j;
}

}  // namespace slicekit
