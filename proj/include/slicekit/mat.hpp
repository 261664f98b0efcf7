#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace slicekit {

using Z = mpz_class;
using Q = mpq_class;

// Dense matrix over an exact coefficient type (Z or Q).
template <class T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int r, int c) : rows_(r), cols_(c), a_(static_cast<size_t>(r) * c) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const T& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Mat transposed() const {
    Mat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
  }

  Mat operator-() const {
    Mat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m.at(i, j) = -at(i, j);
    return m;
  }

  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Mat m(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const T& v = at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < o.cols_; ++j) m.at(i, j) += v * o.at(k, j);
      }
    return m;
  }

  Mat operator+(const Mat& o) const {
    Mat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j) + o.at(i, j);
    return m;
  }

  Mat operator-(const Mat& o) const {
    Mat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j) - o.at(i, j);
    return m;
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  void swap_rows(int i, int j) {
    for (int k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
  }
  void swap_cols(int i, int j) {
    for (int k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
  }

 private:
  int rows_, cols_;
  std::vector<T> a_;
};

using MatZ = Mat<Z>;
using MatQ = Mat<Q>;

inline MatQ to_rational(const MatZ& m) {
  MatQ r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r.at(i, j) = Q(m.at(i, j));
  return r;
}

// Fraction-free determinant (Bareiss).
inline Z det(MatZ m) {
  int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("det of non-square matrix");
  if (n == 0) return 1;
  Z prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Z t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m.at(i, j) = t;
      }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

inline Q det(MatQ m) {
  int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("det of non-square matrix");
  Q d = 1;
  for (int k = 0; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n; ++i)
      if (m.at(i, k) != 0) { p = i; break; }
    if (p < 0) return 0;
    if (p != k) { m.swap_rows(k, p); d = -d; }
    d *= m.at(k, k);
    Q inv = 1 / m.at(k, k);
    for (int i = k + 1; i < n; ++i) {
      Q f = m.at(i, k) * inv;
      if (f == 0) continue;
      for (int j = k; j < n; ++j) m.at(i, j) -= f * m.at(k, j);
    }
  }
  return d;
}

// Gauss-Jordan inverse over Q; throws on singular input.
inline MatQ inverse(MatQ m) {
  int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  MatQ inv = MatQ::identity(n);
  for (int k = 0; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n; ++i)
      if (m.at(i, k) != 0) { p = i; break; }
    if (p < 0) throw std::domain_error("singular matrix");
    if (p != k) { m.swap_rows(k, p); inv.swap_rows(k, p); }
    Q piv = 1 / m.at(k, k);
    for (int j = 0; j < n; ++j) { m.at(k, j) *= piv; inv.at(k, j) *= piv; }
    for (int i = 0; i < n; ++i) {
      if (i == k || m.at(i, k) == 0) continue;
      Q f = m.at(i, k);
      for (int j = 0; j < n; ++j) {
        m.at(i, j) -= f * m.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

// Block-diagonal direct sum.
template <class T>
Mat<T> block_sum(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> m(a.rows() + b.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) m.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return m;
}

// Smith normal form with transforms: u * a * v = d, u and v unimodular,
// diagonal entries nonnegative with d[i] | d[i+1].
struct Smith {
  MatZ d, u, v;
};

Smith smith_normal_form(MatZ a);

inline Z mod_floor(const Z& a, const Z& m) {
  Z r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Value in [0, 1).
inline Q mod1(const Q& x) {
  Z fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  Q r = x - Q(fl);
  r.canonicalize();
  return r;
}

}  // namespace slicekit
