#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slicekit/mat.hpp"

namespace slicekit {

// Integer polynomial, coefficients lowest-degree first.
using PolyZ = std::vector<Z>;

PolyZ poly_mul(const PolyZ& a, const PolyZ& b);
PolyZ poly_trim(PolyZ p);
// Quotient of an exact division; throws if the division has a remainder.
PolyZ poly_divexact(const PolyZ& num, const PolyZ& den);
Z poly_eval(const PolyZ& p, const Z& x);
int poly_degree(const PolyZ& p);

// Seifert matrix of a genus-g surface: 2g x 2g integer matrix V with
// det(V - V^T) = +-1. Size 0 models the unknot.
class SeifertMatrix {
 public:
  SeifertMatrix() = default;
  explicit SeifertMatrix(MatZ entries);

  const MatZ& entries() const { return m_; }
  int size() const { return m_.rows(); }
  int genus() const { return m_.rows() / 2; }

  SeifertMatrix reversed() const { return SeifertMatrix(m_.transposed()); }
  SeifertMatrix mirrored() const { return SeifertMatrix(-m_.transposed()); }
  SeifertMatrix negated() const { return SeifertMatrix(-m_); }

  bool operator==(const SeifertMatrix& o) const { return m_ == o.m_; }

 private:
  MatZ m_;
};

SeifertMatrix block_sum(const SeifertMatrix& a, const SeifertMatrix& b);

// Alexander polynomial det(V - t V^T), normalized so the lowest-degree
// coefficient is nonzero and positive.
class AlexanderPolynomial {
 public:
  AlexanderPolynomial() : c_{Z(1)} {}
  explicit AlexanderPolynomial(PolyZ coeffs);  // normalizes

  const PolyZ& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Z at_one() const;
  bool is_trivial() const { return c_.size() == 1 && c_[0] == 1; }
  bool palindromic_up_to_sign() const;

  bool operator==(const AlexanderPolynomial& o) const { return c_ == o.c_; }

 private:
  PolyZ c_;
};

AlexanderPolynomial alexander(const SeifertMatrix& v);
AlexanderPolynomial alex_mul(const AlexanderPolynomial& a, const AlexanderPolynomial& b);

// Genus-one model for the pattern R_n: rows (n, 0), (1, -(n+1)).
SeifertMatrix rn_model(int n);
// Recognizes the rn_model shape; returns n if the matrix is exactly rn_model(n).
std::optional<int> rn_model_parameter(const SeifertMatrix& v);

// Exact integer product prod_{k=1}^{q-1} Delta(zeta_q^k), computed as the
// resultant of (t^q - 1)/(t - 1) with Delta over Z. Throws std::domain_error
// ("infinite homology") when the product vanishes.
Z root_product(const AlexanderPolynomial& p, int q);

// Resultant of two integer polynomials, Res(f, g) = lc(f)^{deg g} * prod g(alpha_i)
// over the roots alpha_i of f.
Z resultant(const PolyZ& f, const PolyZ& g);

}  // namespace slicekit
