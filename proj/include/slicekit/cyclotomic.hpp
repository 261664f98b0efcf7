#pragma once

#include <vector>

#include "slicekit/mat.hpp"

namespace slicekit {

// Arithmetic in Q[x] / Phi_b(x), x standing for e^{2*pi*i/b}. Elements are
// coefficient vectors of length deg(Phi_b), lowest degree first.
struct Cyclotomic {
  int b = 1;
  std::vector<Q> phi;  // monic cyclotomic polynomial
  int dim = 0;
};

Cyclotomic make_cyclotomic(int b);

using CElem = std::vector<Q>;

CElem c_zero(const Cyclotomic& f);
CElem c_from_q(const Cyclotomic& f, const Q& v);
CElem c_zeta_pow(const Cyclotomic& f, long k);
bool c_is_zero(const CElem& a);
CElem c_add(const CElem& a, const CElem& b);
CElem c_sub(const CElem& a, const CElem& b);
CElem c_neg(CElem a);
CElem c_mul(const Cyclotomic& f, const CElem& a, const CElem& b);
CElem c_inv(const Cyclotomic& f, const CElem& a);
// Galois conjugation zeta -> zeta^{-1} (complex conjugation).
CElem c_conj(const Cyclotomic& f, const CElem& a);

// Evaluate a polynomial with integer coefficients at zeta^k.
CElem c_eval_poly(const Cyclotomic& f, const std::vector<Z>& poly, long k);

// Sign of a conjugation-invariant (hence real) element, certified by interval
// evaluation with doubling precision. Exact zero detected symbolically.
int real_sign(const Cyclotomic& f, const CElem& a);

}  // namespace slicekit
