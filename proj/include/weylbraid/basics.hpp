#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace weylbraid {

using Rat = mpq_class;
using Int = long;

// Bad input from the caller (unsupported type, malformed class spec, ...).
struct usage_error : std::runtime_error {
  explicit usage_error(const std::string& m) : std::runtime_error(m) {}
};

// A mathematical invariant failed. These indicate either a bug or an input
// that contradicts a theorem the code relies on; they are never swallowed.
struct internal_error : std::runtime_error {
  explicit internal_error(const std::string& m) : std::runtime_error(m) {}
};

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw internal_error(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw usage_error(msg);
}

inline Int illcm(Int a, Int b) { return std::lcm(a, b); }

inline int rat_sign(const Rat& x) { return sgn(x); }

// ---------------------------------------------------------------------------
// Dense matrices over an exact field K. K needs +, -, *, unary -, ==, and the
// two hooks below specialized (division only through field_inv).
// ---------------------------------------------------------------------------

template <class K>
bool field_is_zero(const K& x);
template <class K>
K field_inv(const K& x);

template <>
inline bool field_is_zero<Rat>(const Rat& x) {
  return sgn(x) == 0;
}
template <>
inline Rat field_inv<Rat>(const Rat& x) {
  return Rat(1) / x;
}

template <class K>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<K> a;

  Mat() = default;
  Mat(int r, int c, const K& fill) : rows(r), cols(c), a(size_t(r) * c, fill) {}

  K& at(int i, int j) { return a[size_t(i) * cols + j]; }
  const K& at(int i, int j) const { return a[size_t(i) * cols + j]; }

  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

template <class K>
Mat<K> mat_mul(const Mat<K>& x, const Mat<K>& y, const K& zero) {
  check(x.cols == y.rows, "mat_mul: shape mismatch");
  Mat<K> z(x.rows, y.cols, zero);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      if (field_is_zero(x.at(i, k))) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) = z.at(i, j) + x.at(i, k) * y.at(k, j);
    }
  return z;
}

template <class K>
std::vector<K> mat_apply(const Mat<K>& m, const std::vector<K>& v, const K& zero) {
  check(int(v.size()) == m.cols, "mat_apply: shape mismatch");
  std::vector<K> r(m.rows, zero);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (!field_is_zero(m.at(i, j))) r[i] = r[i] + m.at(i, j) * v[j];
  return r;
}

// In-place reduced row echelon form. Pivoting is deterministic: first nonzero
// column, rows in order. Returns the pivot columns.
template <class K>
std::vector<int> rref(Mat<K>& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int pr = -1;
    for (int i = row; i < m.rows; ++i)
      if (!field_is_zero(m.at(i, col))) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != row)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(pr, j), m.at(row, j));
    K inv = field_inv(m.at(row, col));
    for (int j = col; j < m.cols; ++j) m.at(row, j) = m.at(row, j) * inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || field_is_zero(m.at(i, col))) continue;
      K f = m.at(i, col);
      for (int j = col; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class K>
int mat_rank(Mat<K> m) {
  return int(rref(m).size());
}

// Reduced echelon kernel basis, one vector per free column.
template <class K>
std::vector<std::vector<K>> mat_kernel(Mat<K> m, const K& zero, const K& one) {
  std::vector<int> piv = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : piv) is_pivot[c] = true;
  std::vector<std::vector<K>> basis;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<K> v(m.cols, zero);
    v[free] = one;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m.at(int(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Inverse of a square matrix; throws if singular.
template <class K>
Mat<K> mat_inverse(const Mat<K>& m, const K& zero, const K& one) {
  check(m.rows == m.cols, "mat_inverse: not square");
  int n = m.rows;
  Mat<K> aug(n, 2 * n, zero);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = one;
  }
  std::vector<int> piv = rref(aug);
  check(int(piv.size()) == n && piv[size_t(n) - 1] == n - 1, "mat_inverse: singular matrix");
  Mat<K> inv(n, n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

// Solve m x = b for square invertible m.
template <class K>
std::vector<K> mat_solve(Mat<K> m, std::vector<K> b, const K& zero, const K& one) {
  check(m.rows == int(b.size()), "mat_solve: shape mismatch");
  int n = m.cols;
  Mat<K> aug(m.rows, n + 1, zero);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n) = b[i];
  }
  std::vector<int> piv = rref(aug);
  std::vector<K> x(n, zero);
  int r = 0;
  for (int c : piv) {
    check(c < n, "mat_solve: inconsistent system");
    x[c] = aug.at(r, n);
    ++r;
  }
  (void)one;
  return x;
}

using QMat = Mat<Rat>;

// ---------------------------------------------------------------------------
// Small integer matrices for Weyl group actions on the root lattice.
// ---------------------------------------------------------------------------

struct IMat {
  int n = 0;
  std::vector<int> a;

  IMat() = default;
  explicit IMat(int n_) : n(n_), a(size_t(n_) * n_, 0) {}

  int& at(int i, int j) { return a[size_t(i) * n + j]; }
  int at(int i, int j) const { return a[size_t(i) * n + j]; }

  static IMat identity(int n) {
    IMat m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const IMat& o) const { return n == o.n && a == o.a; }
  bool operator!=(const IMat& o) const { return !(*this == o); }

  bool is_identity() const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (at(i, j) != (i == j)) return false;
    return true;
  }
};

inline IMat imul(const IMat& x, const IMat& y) {
  check(x.n == y.n, "imul: size mismatch");
  IMat z(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      int v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < x.n; ++j) z.at(i, j) += v * y.at(k, j);
    }
  return z;
}

inline std::vector<int> iapply(const IMat& m, const std::vector<int>& v) {
  std::vector<int> r(m.n, 0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) r[i] += m.at(i, j) * v[j];
  return r;
}

// Exact inverse of a unimodular integer matrix.
inline IMat iinverse(const IMat& m) {
  QMat q(m.n, m.n, Rat(0));
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) q.at(i, j) = m.at(i, j);
  QMat inv = mat_inverse(q, Rat(0), Rat(1));
  IMat r(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) {
      Rat x = inv.at(i, j);
      check(x.get_den() == 1, "iinverse: non-integer inverse");
      r.at(i, j) = int(x.get_num().get_si());
    }
  return r;
}

inline IMat ipow(IMat m, Int k) {
  IMat r = IMat::identity(m.n);
  while (k > 0) {
    if (k & 1) r = imul(r, m);
    m = imul(m, m);
    k >>= 1;
  }
  return r;
}

// Multiplicative order of a finite-order integer matrix.
inline Int imat_order(const IMat& m, Int cap = 1000000) {
  IMat x = m;
  for (Int k = 1; k <= cap; ++k) {
    if (x.is_identity()) return k;
    x = imul(x, m);
  }
  throw internal_error("imat_order: order exceeds cap");
}

struct IMatHash {
  size_t operator()(const IMat& m) const {
    size_t h = size_t(m.n) * 1000003u;
    for (int v : m.a) h = h * 1099511628211ull + size_t(v + 64);
    return h;
  }
};

}  // namespace weylbraid
