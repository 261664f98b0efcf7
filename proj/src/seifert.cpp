#include "slicekit/seifert.hpp"

#include <stdexcept>

namespace slicekit {

PolyZ poly_trim(PolyZ p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

int poly_degree(const PolyZ& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i] != 0) return i;
  return -1;
}

PolyZ poly_mul(const PolyZ& a, const PolyZ& b) {
  if (a.empty() || b.empty()) return {};
  PolyZ r(a.size() + b.size() - 1, Z(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return poly_trim(std::move(r));
}

PolyZ poly_divexact(const PolyZ& num, const PolyZ& den) {
  PolyZ n = poly_trim(num), d = poly_trim(den);
  if (d.empty()) throw std::domain_error("polynomial division by zero");
  if (n.empty()) return {};
  if (n.size() < d.size()) throw std::domain_error("inexact polynomial division");
  PolyZ q(n.size() - d.size() + 1, Z(0));
  for (int i = static_cast<int>(q.size()) - 1; i >= 0; --i) {
    Z& lead = n[i + d.size() - 1];
    if (lead % d.back() != 0) throw std::domain_error("inexact polynomial division");
    q[i] = lead / d.back();
    if (q[i] == 0) continue;
    for (size_t j = 0; j < d.size(); ++j) n[i + j] -= q[i] * d[j];
  }
  if (!poly_trim(n).empty()) throw std::domain_error("inexact polynomial division");
  return poly_trim(std::move(q));
}

Z poly_eval(const PolyZ& p, const Z& x) {
  Z acc = 0;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) acc = acc * x + p[i];
  return acc;
}

SeifertMatrix::SeifertMatrix(MatZ entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw std::domain_error("Seifert matrix must be square");
  if (m_.rows() % 2 != 0) throw std::domain_error("Seifert matrix must have even size");
  MatZ j = m_ - m_.transposed();
  Z d = det(j);
  if (d != 1 && d != -1)
    throw std::domain_error("V - V^T must be unimodular for a Seifert matrix");
}

SeifertMatrix block_sum(const SeifertMatrix& a, const SeifertMatrix& b) {
  return SeifertMatrix(block_sum(a.entries(), b.entries()));
}

AlexanderPolynomial::AlexanderPolynomial(PolyZ coeffs) {
  PolyZ p = poly_trim(std::move(coeffs));
  if (p.empty()) throw std::domain_error("zero Alexander polynomial");
  size_t low = 0;
  while (p[low] == 0) ++low;
  c_.assign(p.begin() + low, p.end());
  if (c_[0] < 0)
    for (Z& x : c_) x = -x;
}

Z AlexanderPolynomial::at_one() const { return poly_eval(c_, Z(1)); }

bool AlexanderPolynomial::palindromic_up_to_sign() const {
  size_t n = c_.size();
  bool plus = true, minus = true;
  for (size_t i = 0; i < n; ++i) {
    if (c_[i] != c_[n - 1 - i]) plus = false;
    if (c_[i] != -c_[n - 1 - i]) minus = false;
  }
  return plus || minus;
}

namespace {

// det(V - t V^T) by evaluation at n+1 integer points and exact Lagrange
// interpolation over Q.
PolyZ seifert_det_poly(const MatZ& v) {
  int n = v.rows();
  if (n == 0) return {Z(1)};
  MatZ vt = v.transposed();
  std::vector<Z> xs, ys;
  for (int k = 0; k <= n; ++k) {
    MatZ a = v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a.at(i, j) -= Z(k) * vt.at(i, j);
    xs.push_back(Z(k));
    ys.push_back(det(a));
  }
  std::vector<Q> poly(n + 1, Q(0));
  for (int k = 0; k <= n; ++k) {
    // Basis polynomial prod_{j != k} (t - x_j) / (x_k - x_j).
    std::vector<Q> basis{Q(1)};
    Q denom(1);
    for (int j = 0; j <= n; ++j) {
      if (j == k) continue;
      std::vector<Q> next(basis.size() + 1, Q(0));
      for (size_t i = 0; i < basis.size(); ++i) {
        next[i] -= basis[i] * Q(xs[j]);
        next[i + 1] += basis[i];
      }
      basis = std::move(next);
      denom *= Q(xs[k] - xs[j]);
    }
    Q scale = Q(ys[k]) / denom;
    for (size_t i = 0; i < basis.size(); ++i) poly[i] += basis[i] * scale;
  }
  PolyZ out(n + 1, Z(0));
  for (int i = 0; i <= n; ++i) {
    Q c = poly[i];
    c.canonicalize();
    if (c.get_den() != 1) throw std::logic_error("non-integer Alexander coefficient");
    out[i] = c.get_num();
  }
  return poly_trim(std::move(out));
}

}  // namespace

AlexanderPolynomial alexander(const SeifertMatrix& v) {
  return AlexanderPolynomial(seifert_det_poly(v.entries()));
}

AlexanderPolynomial alex_mul(const AlexanderPolynomial& a, const AlexanderPolynomial& b) {
  return AlexanderPolynomial(poly_mul(a.coefficients(), b.coefficients()));
}

SeifertMatrix rn_model(int n) {
  if (n < 1) throw std::domain_error("rn_model requires n >= 1");
  MatZ m(2, 2);
  m.at(0, 0) = n;
  m.at(0, 1) = 0;
  m.at(1, 0) = 1;
  m.at(1, 1) = -(n + 1);
  return SeifertMatrix(std::move(m));
}

std::optional<int> rn_model_parameter(const SeifertMatrix& v) {
  const MatZ& m = v.entries();
  if (m.rows() != 2) return std::nullopt;
  if (m.at(0, 1) != 0 || m.at(1, 0) != 1) return std::nullopt;
  if (m.at(0, 0) < 1 || m.at(1, 1) != -(m.at(0, 0) + 1)) return std::nullopt;
  return static_cast<int>(m.at(0, 0).get_si());
}

Z resultant(const PolyZ& f, const PolyZ& g) {
  PolyZ a = poly_trim(f), b = poly_trim(g);
  int df = static_cast<int>(a.size()) - 1, dg = static_cast<int>(b.size()) - 1;
  if (df < 0 || dg < 0) return 0;
  if (df == 0) {
    Z r = 1;
    for (int i = 0; i < dg; ++i) r *= a[0];
    return r;
  }
  if (dg == 0) {
    Z r = 1;
    for (int i = 0; i < df; ++i) r *= b[0];
    return r;
  }
  int n = df + dg;
  MatZ s(n, n);
  for (int r = 0; r < dg; ++r)
    for (int i = 0; i <= df; ++i) s.at(r, r + i) = a[df - i];
  for (int r = 0; r < df; ++r)
    for (int i = 0; i <= dg; ++i) s.at(dg + r, r + i) = b[dg - i];
  return det(s);
}

Z root_product(const AlexanderPolynomial& p, int q) {
  if (q < 2) throw std::domain_error("root_product requires q >= 2");
  PolyZ cq(q, Z(1));  // 1 + t + ... + t^(q-1)
  Z r = resultant(cq, p.coefficients());
  if (r == 0) throw std::domain_error("infinite homology");
  return r;
}

}  // namespace slicekit
