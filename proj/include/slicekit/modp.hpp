#pragma once

#include <vector>

#include "slicekit/mat.hpp"

namespace slicekit {

inline Z mod_pow(Z base, Z exp, const Z& m) {
  Z r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Z mod_inverse(const Z& a, const Z& m) {
  Z r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("not invertible");
  return r;
}

// Row-reduce m in place over Z_p; returns the pivot column indices.
inline std::vector<int> rref_mod_p(MatZ& m, const Z& p) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int sel = -1;
    for (int i = r; i < m.rows(); ++i)
      if (mod_floor(m.at(i, c), p) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    m.swap_rows(r, sel);
    Z inv = mod_inverse(mod_floor(m.at(r, c), p), p);
    for (int j = 0; j < m.cols(); ++j) m.at(r, j) = mod_floor(m.at(r, j) * inv, p);
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      Z f = mod_floor(m.at(i, c), p);
      if (f == 0) continue;
      for (int j = 0; j < m.cols(); ++j)
        m.at(i, j) = mod_floor(m.at(i, j) - f * m.at(r, j), p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Kernel basis of m over Z_p, one vector per free column, entries in [0,p).
inline std::vector<std::vector<Z>> kernel_mod_p(MatZ m, const Z& p) {
  int n = m.cols();
  std::vector<int> pivots = rref_mod_p(m, p);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Z>> basis;
  for (int c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Z> v(n, Z(0));
    v[c] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = mod_floor(-m.at(static_cast<int>(r), c), p);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Rank of m over Z_p.
inline int rank_mod_p(MatZ m, const Z& p) {
  return static_cast<int>(rref_mod_p(m, p).size());
}

}  // namespace slicekit
