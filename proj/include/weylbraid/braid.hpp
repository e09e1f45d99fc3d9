#pragma once

#include <vector>

#include "weylbraid/rootsys.hpp"

namespace weylbraid {

// ---------------------------------------------------------------------------
// Positive braid monoid of a (twisted) finite Coxeter group. Elements are
// kept in left-greedy normal form: factors f_1 ... f_k are nontrivial Weyl
// group elements with starting(f_{i+1}) contained in finishing(f_i), followed
// by a twist exponent. Equality of normal forms solves the word problem.
// ---------------------------------------------------------------------------

struct Braid {
  const CoxeterDatum* D = nullptr;
  std::vector<IMat> factors;  // untwisted simple factors, left to right
  int twist = 0;

  explicit Braid(const CoxeterDatum& dat) : D(&dat) {}
  Braid(const CoxeterDatum& dat, std::vector<IMat> fs, int tw)
      : D(&dat), factors(std::move(fs)), twist(((tw % dat.delta_order) + dat.delta_order) % dat.delta_order) {}

  bool operator==(const Braid& o) const {
    return D == o.D && twist == o.twist && factors == o.factors;
  }
  bool operator!=(const Braid& o) const { return !(*this == o); }
};

namespace detail {

// Make the pair (a, b) left-greedy by sliding letters from b into a.
// Tracks b^{-1} so descent tests are column-sign checks.
inline bool normalize_pair(const CoxeterDatum& D, IMat& a, IMat& b) {
  if (b.is_identity()) return false;
  IMat binv = root_inverse(D, b);
  bool moved = false, progress = true;
  while (progress && !b.is_identity()) {
    progress = false;
    for (int i = 0; i < D.rank; ++i) {
      // i in starting(b) \ finishing(a)
      if (column_negative(binv, i) && !column_negative(a, i)) {
        const IMat& S = D.simple_refl[size_t(i)];
        a = imul(a, S);
        b = imul(S, b);
        binv = imul(binv, S);
        moved = progress = true;
        break;
      }
    }
  }
  return moved;
}

inline void normal_form(const CoxeterDatum& D, std::vector<IMat>& fs) {
  bool dirty = true;
  int guard = 0;
  while (dirty) {
    dirty = false;
    size_t w = 0;
    for (size_t i = 0; i < fs.size(); ++i) {
      if (fs[i].is_identity()) {
        dirty = true;
        continue;
      }
      if (w != i) fs[w] = fs[i];
      ++w;
    }
    fs.resize(w);
    for (size_t i = 0; i + 1 < fs.size(); ++i)
      if (normalize_pair(D, fs[i], fs[i + 1])) dirty = true;
    check(++guard < 100000, "braid normal form did not stabilize");
  }
}

inline IMat twist_factor(const CoxeterDatum& D, const IMat& f, int k) {
  k = ((k % D.delta_order) + D.delta_order) % D.delta_order;
  if (k == 0) return f;
  IMat d = ipow(D.delta_mat, k);
  return imul(imul(d, f), root_inverse(D, d));
}

}  // namespace detail

inline Braid braid_identity(const CoxeterDatum& D) { return Braid(D); }

// Natural lift of a Weyl group element (single simple factor).
inline Braid lift(const Weyl& w) {
  Braid b(*w.D);
  IMat wp = w.weyl_part_mat();
  if (!wp.is_identity()) b.factors.push_back(wp);
  b.twist = w.twist;
  return b;
}

inline Weyl project(const Braid& b) {
  IMat m = IMat::identity(b.D->rank);
  for (const IMat& f : b.factors) m = imul(m, f);
  return Weyl(b.D, imul(m, ipow(b.D->delta_mat, b.twist)), b.twist);
}

inline int braid_length(const Braid& b) {
  int l = 0;
  for (const IMat& f : b.factors) l += length(Weyl(b.D, f, 0));
  return l;
}

inline Braid multiply(const Braid& x, const Braid& y) {
  check(x.D == y.D, "braid datum mismatch");
  Braid z(*x.D);
  z.factors = x.factors;
  for (const IMat& f : y.factors) z.factors.push_back(detail::twist_factor(*x.D, f, x.twist));
  z.twist = ((x.twist + y.twist) % x.D->delta_order + x.D->delta_order) % x.D->delta_order;
  detail::normal_form(*z.D, z.factors);
  return z;
}

inline Braid power(const Braid& b, Int k) {
  check(k >= 0, "braid power needs a nonnegative exponent");
  Braid acc = braid_identity(*b.D);
  Braid sq = b;
  while (k > 0) {
    if (k & 1) acc = multiply(acc, sq);
    k >>= 1;
    if (k) sq = multiply(sq, sq);
  }
  return acc;
}

inline Braid from_word(const CoxeterDatum& D, const std::vector<int>& word, int twist_exp = 0) {
  Braid b(D);
  for (int i : word) {
    require(i >= 0 && i < D.rank, "generator index out of range");
    b.factors.push_back(D.simple_refl[size_t(i)]);
  }
  detail::normal_form(D, b.factors);
  b.twist = ((twist_exp % D.delta_order) + D.delta_order) % D.delta_order;
  return b;
}

inline bool equals(const Braid& a, const Braid& b) { return a == b; }

// Right-greedy factor list (largest right divisor rightmost), computed by the
// reversal trick: reverse-invert the factors, left-normalize, undo.
inline std::vector<IMat> right_dg_form(const Braid& b) {
  std::vector<IMat> rev;
  for (size_t i = b.factors.size(); i-- > 0;) rev.push_back(root_inverse(*b.D, b.factors[i]));
  detail::normal_form(*b.D, rev);
  std::vector<IMat> out;
  for (size_t i = rev.size(); i-- > 0;) out.push_back(root_inverse(*b.D, rev[i]));
  return out;
}

// Concatenated reduced words of the right-greedy factors (display form).
inline std::vector<int> braid_word(const Braid& b) {
  std::vector<int> word;
  for (const IMat& f : right_dg_form(b)) {
    std::vector<int> part = reduced_word(Weyl(b.D, f, 0));
    word.insert(word.end(), part.begin(), part.end());
  }
  return word;
}

inline std::vector<std::vector<int>> factor_words(const std::vector<IMat>& fs, const CoxeterDatum& D) {
  std::vector<std::vector<int>> out;
  for (const IMat& f : fs) out.push_back(reduced_word(Weyl(&D, f, 0)));
  return out;
}

}  // namespace weylbraid
