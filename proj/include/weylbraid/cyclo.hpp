#pragma once

#include <map>
#include <memory>
#include <vector>

#include <mpfr.h>

#include "weylbraid/basics.hpp"

namespace weylbraid {

// ---------------------------------------------------------------------------
// Q(zeta_N): residues of Q[x] mod the N-th cyclotomic polynomial. All equality
// decisions are exact; floating point appears only inside sign refinement,
// with directed rounding.
// ---------------------------------------------------------------------------

namespace detail {

// Integer polynomials, dense, little-endian coefficients.
using ZPoly = std::vector<mpz_class>;

inline void zp_trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division assuming divisor is monic and divides evenly.
inline ZPoly zp_div_exact(ZPoly num, const ZPoly& den) {
  ZPoly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, mpz_class(0));
  while (num.size() >= den.size()) {
    mpz_class c = num.back();
    size_t shift = num.size() - den.size();
    q[shift] = c;
    for (size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
    zp_trim(num);
    if (num.empty()) break;
  }
  check(num.empty(), "zp_div_exact: division not exact");
  return q;
}

inline ZPoly cyclotomic_poly(Int n, std::map<Int, ZPoly>& cache) {
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  ZPoly p(size_t(n) + 1, mpz_class(0));
  p[0] = -1;
  p[size_t(n)] = 1;  // x^n - 1
  for (Int d = 1; d < n; ++d)
    if (n % d == 0) p = zp_div_exact(std::move(p), cyclotomic_poly(d, cache));
  cache[n] = p;
  return p;
}

}  // namespace detail

struct CycloContext {
  Int conductor;                       // N
  int degree;                          // phi(N)
  std::vector<Rat> phi;                // Phi_N, length degree+1, monic
  std::vector<std::vector<Rat>> xpow;  // x^m mod Phi_N for m = 0..2N

  explicit CycloContext(Int n) : conductor(n) {
    require(n >= 1, "cyclotomic conductor must be >= 1");
    std::map<Int, detail::ZPoly> cache;
    detail::ZPoly p = detail::cyclotomic_poly(n, cache);
    degree = int(p.size()) - 1;
    phi.resize(p.size());
    for (size_t i = 0; i < p.size(); ++i) phi[i] = Rat(p[i]);
    // Power table: x^{m+1} from x^m, reducing x^degree = -(lower part).
    size_t count = size_t(2 * n + 1);
    xpow.assign(count, std::vector<Rat>(size_t(degree), Rat(0)));
    if (degree > 0) xpow[0][0] = 1;
    for (size_t m = 1; m < count; ++m) {
      const std::vector<Rat>& prev = xpow[m - 1];
      std::vector<Rat>& cur = xpow[m];
      Rat top = degree > 0 ? prev[size_t(degree) - 1] : Rat(0);
      for (int i = degree - 1; i >= 1; --i) cur[size_t(i)] = prev[size_t(i) - 1];
      if (degree > 0) cur[0] = 0;
      if (sgn(top) != 0)
        for (int i = 0; i < degree; ++i) cur[size_t(i)] -= top * phi[size_t(i)];
    }
  }
};

using CycloCtxPtr = std::shared_ptr<const CycloContext>;

inline CycloCtxPtr make_cyclo_context(Int n) { return std::make_shared<CycloContext>(n); }

struct CycloElem {
  const CycloContext* ctx = nullptr;
  std::vector<Rat> c;  // length ctx->degree

  CycloElem() = default;
  CycloElem(const CycloContext* cx, std::vector<Rat> coeffs) : ctx(cx), c(std::move(coeffs)) {
    check(int(c.size()) == cx->degree, "CycloElem: bad coefficient length");
  }

  static CycloElem zero(const CycloContext* cx) {
    return CycloElem(cx, std::vector<Rat>(size_t(cx->degree), Rat(0)));
  }
  static CycloElem from_rat(const CycloContext* cx, const Rat& q) {
    CycloElem e = zero(cx);
    if (cx->degree > 0) e.c[0] = q;
    check(cx->degree > 0 || sgn(q) == 0, "from_rat: degenerate context");
    return e;
  }
  // zeta_N^k
  static CycloElem root_power(const CycloContext* cx, Int k) {
    Int n = cx->conductor;
    Int m = ((k % n) + n) % n;
    return CycloElem(cx, cx->xpow[size_t(m)]);
  }

  bool is_zero() const {
    for (const Rat& q : c)
      if (sgn(q) != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (size_t i = 1; i < c.size(); ++i)
      if (sgn(c[i]) != 0) return false;
    return true;
  }
  Rat rational_part() const { return c.empty() ? Rat(0) : c[0]; }

  bool operator==(const CycloElem& o) const { return ctx == o.ctx && c == o.c; }
  bool operator!=(const CycloElem& o) const { return !(*this == o); }
};

inline void same_ctx(const CycloElem& a, const CycloElem& b) {
  require(a.ctx == b.ctx, "cyclotomic context mismatch");
}

inline CycloElem operator+(const CycloElem& a, const CycloElem& b) {
  same_ctx(a, b);
  CycloElem r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
  return r;
}

inline CycloElem operator-(const CycloElem& a, const CycloElem& b) {
  same_ctx(a, b);
  CycloElem r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
  return r;
}

inline CycloElem operator-(const CycloElem& a) {
  CycloElem r = a;
  for (Rat& q : r.c) q = -q;
  return r;
}

inline CycloElem operator*(const CycloElem& a, const CycloElem& b) {
  same_ctx(a, b);
  const CycloContext* cx = a.ctx;
  int d = cx->degree;
  std::vector<Rat> conv(size_t(2 * d - 1 > 0 ? 2 * d - 1 : 1), Rat(0));
  for (int i = 0; i < d; ++i) {
    if (sgn(a.c[size_t(i)]) == 0) continue;
    for (int j = 0; j < d; ++j)
      if (sgn(b.c[size_t(j)]) != 0) conv[size_t(i + j)] += a.c[size_t(i)] * b.c[size_t(j)];
  }
  CycloElem r = CycloElem::zero(cx);
  for (int m = 0; m < int(conv.size()); ++m) {
    if (sgn(conv[size_t(m)]) == 0) continue;
    if (m < d)
      r.c[size_t(m)] += conv[size_t(m)];
    else
      for (int i = 0; i < d; ++i) r.c[size_t(i)] += conv[size_t(m)] * cx->xpow[size_t(m)][size_t(i)];
  }
  return r;
}

inline CycloElem operator*(const Rat& q, const CycloElem& a) {
  CycloElem r = a;
  for (Rat& x : r.c) x *= q;
  return r;
}

// Substitute zeta -> zeta^k (coefficientwise on the power basis).
inline CycloElem galois_conjugate(const CycloElem& a, Int k) {
  const CycloContext* cx = a.ctx;
  Int n = cx->conductor;
  Int g = std::gcd(((k % n) + n) % n, n);
  require(g == 1 || n == 1, "galois_conjugate: exponent not coprime to conductor");
  CycloElem r = CycloElem::zero(cx);
  for (int i = 0; i < cx->degree; ++i) {
    if (sgn(a.c[size_t(i)]) == 0) continue;
    Int m = ((Int(i) * k) % n + n) % n;
    for (int j = 0; j < cx->degree; ++j) r.c[size_t(j)] += a.c[size_t(i)] * cx->xpow[size_t(m)][size_t(j)];
  }
  return r;
}

// Complex conjugation zeta -> zeta^{-1}.
inline CycloElem conj(const CycloElem& a) { return galois_conjugate(a, a.ctx->conductor - 1); }

inline bool is_real(const CycloElem& a) { return conj(a) == a; }

// Inverse via extended Euclid against Phi_N in Q[x].
inline CycloElem cyclo_inv(const CycloElem& a) {
  require(!a.is_zero(), "division by zero in cyclotomic field");
  const CycloContext* cx = a.ctx;
  if (a.is_rational()) return CycloElem::from_rat(cx, Rat(1) / a.c[0]);
  using P = std::vector<Rat>;
  auto deg = [](const P& p) {
    int d = int(p.size()) - 1;
    while (d >= 0 && sgn(p[size_t(d)]) == 0) --d;
    return d;
  };
  P r0 = cx->phi;
  P r1(a.c.begin(), a.c.end());
  P s0{Rat(0)}, s1{Rat(1)};  // coefficients of `a` in the Bezout combination
  while (deg(r1) > 0) {
    int d0 = deg(r0), d1 = deg(r1);
    P q(size_t(d0 - d1 + 1), Rat(0));
    P rem = r0;
    for (int k = d0 - d1; k >= 0; --k) {
      Rat f = rem[size_t(k + d1)] / r1[size_t(d1)];
      q[size_t(k)] = f;
      if (sgn(f) != 0)
        for (int i = 0; i <= d1; ++i) rem[size_t(k + i)] -= f * r1[size_t(i)];
    }
    // s_next = s0 - q * s1
    P snext(std::max(s0.size(), q.size() + s1.size()), Rat(0));
    for (size_t i = 0; i < s0.size(); ++i) snext[i] += s0[i];
    for (size_t i = 0; i < q.size(); ++i) {
      if (sgn(q[i]) == 0) continue;
      for (size_t j = 0; j < s1.size(); ++j) snext[i + j] -= q[i] * s1[j];
    }
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(snext);
  }
  int d1 = deg(r1);
  check(d1 == 0, "cyclo_inv: gcd with the minimal polynomial is not constant");
  Rat lead = r1[0];
  CycloElem inv = CycloElem::zero(cx);
  for (size_t i = 0; i < s1.size() && i < inv.c.size(); ++i) inv.c[i] = s1[i] / lead;
  for (size_t i = inv.c.size(); i < s1.size(); ++i)
    check(sgn(s1[i]) == 0, "cyclo_inv: unreduced Bezout coefficient");
  check((inv * a).is_rational() && (inv * a).rational_part() == 1, "cyclo_inv: verification failed");
  return inv;
}

inline CycloElem operator/(const CycloElem& a, const CycloElem& b) { return a * cyclo_inv(b); }

template <>
inline bool field_is_zero<CycloElem>(const CycloElem& x) {
  return x.is_zero();
}
template <>
inline CycloElem field_inv<CycloElem>(const CycloElem& x) {
  return cyclo_inv(x);
}

using CMat = Mat<CycloElem>;

inline CMat cmat(const CycloContext* cx, int r, int c) { return CMat(r, c, CycloElem::zero(cx)); }

// ---------------------------------------------------------------------------
// Certified sign of a real element under the embedding zeta_N -> e^{2 pi i/N}.
// Exact zero test first; otherwise interval evaluation with doubled precision
// until the enclosure excludes zero.
// ---------------------------------------------------------------------------

namespace detail {

struct MpfrInterval {
  mpfr_t lo, hi;
  explicit MpfrInterval(mpfr_prec_t p) {
    mpfr_init2(lo, p);
    mpfr_init2(hi, p);
    mpfr_set_zero(lo, 1);
    mpfr_set_zero(hi, 1);
  }
  ~MpfrInterval() {
    mpfr_clear(lo);
    mpfr_clear(hi);
  }
  MpfrInterval(const MpfrInterval&) = delete;
  MpfrInterval& operator=(const MpfrInterval&) = delete;
};

// Adds q * cos(2 pi k / n) into acc with outward rounding.
inline void add_cos_term(MpfrInterval& acc, const Rat& q, Int k, Int n, mpfr_prec_t p) {
  mpfr_t pi_lo, pi_hi, ang_lo, ang_hi, c_lo, c_hi, t1, t2, qv_lo, qv_hi;
  mpfr_inits2(p, pi_lo, pi_hi, ang_lo, ang_hi, c_lo, c_hi, t1, t2, qv_lo, qv_hi, (mpfr_ptr)nullptr);
  mpfr_const_pi(pi_lo, MPFR_RNDD);
  mpfr_const_pi(pi_hi, MPFR_RNDU);
  mpfr_mul_si(ang_lo, pi_lo, 2 * k, MPFR_RNDD);
  mpfr_mul_si(ang_hi, pi_hi, 2 * k, MPFR_RNDU);
  mpfr_div_si(ang_lo, ang_lo, n, MPFR_RNDD);
  mpfr_div_si(ang_hi, ang_hi, n, MPFR_RNDU);
  // cos over the (tiny) angle interval: endpoint values, widened by the width.
  mpfr_cos(c_lo, ang_lo, MPFR_RNDD);
  mpfr_cos(t1, ang_hi, MPFR_RNDD);
  mpfr_min(c_lo, c_lo, t1, MPFR_RNDD);
  mpfr_cos(c_hi, ang_lo, MPFR_RNDU);
  mpfr_cos(t2, ang_hi, MPFR_RNDU);
  mpfr_max(c_hi, c_hi, t2, MPFR_RNDU);
  mpfr_sub(t1, ang_hi, ang_lo, MPFR_RNDU);  // width bound, |cos'| <= 1
  mpfr_sub(c_lo, c_lo, t1, MPFR_RNDD);
  mpfr_add(c_hi, c_hi, t1, MPFR_RNDU);
  // multiply by the rational coefficient
  if (sgn(q) >= 0) {
    mpfr_set_q(qv_lo, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(qv_hi, q.get_mpq_t(), MPFR_RNDU);
    mpfr_mul(t1, qv_lo, c_lo, MPFR_RNDD);
    mpfr_mul(t2, qv_hi, c_hi, MPFR_RNDU);
  } else {
    mpfr_set_q(qv_lo, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(qv_hi, q.get_mpq_t(), MPFR_RNDU);
    mpfr_mul(t1, qv_lo, c_hi, MPFR_RNDD);
    mpfr_mul(t2, qv_hi, c_lo, MPFR_RNDU);
  }
  mpfr_add(acc.lo, acc.lo, t1, MPFR_RNDD);
  mpfr_add(acc.hi, acc.hi, t2, MPFR_RNDU);
  mpfr_clears(pi_lo, pi_hi, ang_lo, ang_hi, c_lo, c_hi, t1, t2, qv_lo, qv_hi, (mpfr_ptr)nullptr);
}

}  // namespace detail

inline int sign_of_real(const CycloElem& x) {
  require(is_real(x), "sign_of_real: element is not fixed by conjugation");
  if (x.is_zero()) return 0;
  if (x.is_rational()) return sgn(x.c[0]);
  Int n = x.ctx->conductor;
  for (mpfr_prec_t p = 64;; p *= 2) {
    detail::MpfrInterval acc(p);
    for (int k = 0; k < x.ctx->degree; ++k)
      if (sgn(x.c[size_t(k)]) != 0) detail::add_cos_term(acc, x.c[size_t(k)], k, n, p);
    if (mpfr_sgn(acc.lo) > 0) return 1;
    if (mpfr_sgn(acc.hi) < 0) return -1;
    check(p < (mpfr_prec_t(1) << 20), "sign_of_real: precision runaway");
  }
}

// High-precision point evaluation of the canonical embedding (test oracle).
inline double embed_real_approx(const CycloElem& x, mpfr_prec_t prec) {
  mpfr_t acc, pi, ang, c, q;
  mpfr_inits2(prec, acc, pi, ang, c, q, (mpfr_ptr)nullptr);
  mpfr_set_zero(acc, 1);
  mpfr_const_pi(pi, MPFR_RNDN);
  for (int k = 0; k < x.ctx->degree; ++k) {
    if (sgn(x.c[size_t(k)]) == 0) continue;
    mpfr_mul_si(ang, pi, 2 * k, MPFR_RNDN);
    mpfr_div_si(ang, ang, x.ctx->conductor, MPFR_RNDN);
    mpfr_cos(c, ang, MPFR_RNDN);
    mpfr_set_q(q, x.c[size_t(k)].get_mpq_t(), MPFR_RNDN);
    mpfr_mul(c, c, q, MPFR_RNDN);
    mpfr_add(acc, acc, c, MPFR_RNDN);
  }
  double r = mpfr_get_d(acc, MPFR_RNDN);
  mpfr_clears(acc, pi, ang, c, q, (mpfr_ptr)nullptr);
  return r;
}

}  // namespace weylbraid
