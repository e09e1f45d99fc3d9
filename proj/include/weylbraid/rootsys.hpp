#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "weylbraid/basics.hpp"

namespace weylbraid {

// ---------------------------------------------------------------------------
// Partitions (weakly decreasing positive integers).
// ---------------------------------------------------------------------------

using Partition = std::vector<int>;

inline int multiplicity(const Partition& p, int k) {
  return int(std::count(p.begin(), p.end(), k));
}

inline int partition_sum(const Partition& p) {
  int s = 0;
  for (int x : p) s += x;
  return s;
}

inline Partition dual_partition(const Partition& p) {
  Partition d;
  if (p.empty()) return d;
  for (int i = 1; i <= p[0]; ++i)
    d.push_back(int(std::count_if(p.begin(), p.end(), [i](int x) { return x >= i; })));
  return d;
}

// All partitions of n in descending lexicographic order; partitions of 0 = {()}.
inline std::vector<Partition> all_partitions(int n) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, int rem, int maxpart) -> void {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(rem, maxpart); k >= 1; --k) {
      cur.push_back(k);
      self(self, rem - k, k);
      cur.pop_back();
    }
  };
  rec(rec, n, n == 0 ? 1 : n);
  return out;
}

// ---------------------------------------------------------------------------
// Coxeter datum: Cartan matrix, invariant form, enumerated roots, simple
// reflections and the diagram automorphism.
//
// Simple-root conventions in standard coordinates:
//   A_n: a_i = e_i - e_{i+1}
//   B_n: a_1 = e_1,        a_i = e_i - e_{i-1} (i >= 2)
//   C_n: a_1 = 2 e_1,      a_i = e_i - e_{i-1}
//   D_n: a_1 = e_2 + e_1,  a_2 = e_2 - e_1,  a_i = e_i - e_{i-1} (i >= 3)
// Cartan convention: C[i][j] = 2 (a_i, a_j) / (a_i, a_i), so the simple
// reflection acts by s_i(a_j) = a_j - C[i][j] a_i.
// ---------------------------------------------------------------------------

struct CoxeterDatum {
  std::string label;
  char family = 'A';
  int rank = 0;
  bool twisted = false;

  std::vector<int> cartan;      // rank x rank
  std::vector<Rat> half_norms;  // d_i = (a_i, a_i)/2
  QMat bilinear;                // (a_i, a_j)

  std::vector<std::vector<int>> roots;  // positives [0, num_positive), then negatives
  int num_positive = 0;
  std::unordered_map<uint64_t, int> root_lookup;

  std::vector<IMat> simple_refl;
  std::vector<int> delta_perm;  // diagram automorphism on generator indices
  IMat delta_mat;
  IMat delta_inv_mat;
  int delta_order = 1;  // order of the twist group (1 or 2 here)

  int ambient_dim = 0;  // classical types only
  QMat alpha_in_e;      // ambient_dim x rank

  int cartan_at(int i, int j) const { return cartan[size_t(i) * rank + j]; }

  static uint64_t pack_root(const std::vector<int>& v) {
    uint64_t key = 0;
    for (int c : v) key = (key << 5) | uint64_t(c + 12);
    return key;
  }

  int root_index(const std::vector<int>& v) const {
    auto it = root_lookup.find(pack_root(v));
    return it == root_lookup.end() ? -1 : it->second;
  }
  bool root_is_positive(int idx) const { return idx >= 0 && idx < num_positive; }
  int negate_root(int idx) const { return idx < num_positive ? idx + num_positive : idx - num_positive; }

  // (a_{r1}, a_{r2}) for root coefficient vectors
  Rat root_inner(const std::vector<int>& x, const std::vector<int>& y) const {
    Rat s = 0;
    for (int i = 0; i < rank; ++i) {
      if (x[size_t(i)] == 0) continue;
      for (int j = 0; j < rank; ++j)
        if (y[size_t(j)] != 0) s += Rat(x[size_t(i)]) * bilinear.at(i, j) * y[size_t(j)];
    }
    return s;
  }

  std::vector<int> positive_roots_supported_on(const std::vector<int>& gens) const {
    std::vector<bool> in(size_t(rank), false);
    for (int g : gens) in[size_t(g)] = true;
    std::vector<int> out;
    for (int r = 0; r < num_positive; ++r) {
      bool ok = true;
      for (int i = 0; i < rank && ok; ++i)
        if (roots[size_t(r)][size_t(i)] != 0 && !in[size_t(i)]) ok = false;
      if (ok) out.push_back(r);
    }
    return out;
  }
};

namespace detail {

inline void fill_chain(std::vector<int>& c, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[size_t(i) * n + j] = (i == j) ? 2 : (std::abs(i - j) == 1 ? -1 : 0);
}

}  // namespace detail

inline CoxeterDatum build_datum(char family, int rank, bool twisted = false) {
  CoxeterDatum D;
  D.family = family;
  D.rank = rank;
  D.twisted = twisted;
  D.label = (twisted ? "2" : "") + std::string(1, family) + std::to_string(rank);
  int n = rank;
  require(n >= 1, "rank must be positive");

  std::vector<int>& C = D.cartan;
  C.assign(size_t(n) * n, 0);
  std::vector<Rat>& d = D.half_norms;
  d.assign(size_t(n), Rat(1));

  switch (family) {
    case 'A':
      detail::fill_chain(C, n);
      D.ambient_dim = n + 1;
      break;
    case 'B':
      require(n >= 2, "B_n needs rank >= 2");
      detail::fill_chain(C, n);
      C[0 * size_t(n) + 1] = -2;  // short a_1 against a_2
      d[0] = Rat(1, 2);
      D.ambient_dim = n;
      break;
    case 'C':
      require(n >= 2, "C_n needs rank >= 2");
      detail::fill_chain(C, n);
      C[1 * size_t(n) + 0] = -2;  // long a_1 against a_2
      d[0] = Rat(2);
      D.ambient_dim = n;
      break;
    case 'D':
      require(n >= 2, "D_n needs rank >= 2");
      detail::fill_chain(C, n);
      // node 1 detaches from node 2 and attaches to node 3
      C[0 * size_t(n) + 1] = C[1 * size_t(n) + 0] = 0;
      if (n >= 3) C[0 * size_t(n) + 2] = C[2 * size_t(n) + 0] = -1;
      D.ambient_dim = n;
      break;
    case 'G':
      require(n == 2, "G family has rank 2");
      C = {2, -3, -1, 2};
      d = {Rat(1), Rat(3)};
      break;
    case 'F':
      require(n == 4, "F family has rank 4");
      C = {2, -1, 0, 0, -1, 2, -1, 0, 0, -2, 2, -1, 0, 0, -1, 2};
      d = {Rat(1), Rat(1), Rat(1, 2), Rat(1, 2)};
      break;
    case 'E': {
      require(n == 6, "only E6 is supported (E7/E8 exceed desk scale)");
      auto idx = [n](int i, int j) { return size_t(i) * n + j; };
      for (int i = 0; i < n; ++i) C[idx(i, i)] = 2;
      auto bond = [&](int i, int j) { C[idx(i, j)] = C[idx(j, i)] = -1; };
      bond(0, 2);
      bond(2, 3);
      bond(3, 4);
      bond(4, 5);
      bond(1, 3);
      break;
    }
    default:
      throw usage_error("unknown type family");
  }

  D.bilinear = QMat(n, n, Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) D.bilinear.at(i, j) = d[size_t(i)] * D.cartan_at(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      check(D.bilinear.at(i, j) == D.bilinear.at(j, i), "Cartan symmetrization failed");

  // Simple reflection matrices: column j of S_i is s_i(a_j).
  D.simple_refl.assign(size_t(n), IMat::identity(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) D.simple_refl[size_t(i)].at(i, j) -= D.cartan_at(i, j);

  // Enumerate roots: closure of the simples under simple reflections.
  std::vector<std::vector<int>> pos, neg;
  std::unordered_set<uint64_t> seen;
  std::deque<std::vector<int>> queue;
  for (int i = 0; i < n; ++i) {
    std::vector<int> a(size_t(n), 0);
    a[size_t(i)] = 1;
    queue.push_back(a);
    seen.insert(CoxeterDatum::pack_root(a));
  }
  while (!queue.empty()) {
    std::vector<int> r = queue.front();
    queue.pop_front();
    bool nonneg = std::all_of(r.begin(), r.end(), [](int x) { return x >= 0; });
    bool nonpos = std::all_of(r.begin(), r.end(), [](int x) { return x <= 0; });
    check(nonneg || nonpos, "root with mixed signs");
    (nonneg ? pos : neg).push_back(r);
    for (int i = 0; i < n; ++i) {
      std::vector<int> img = iapply(D.simple_refl[size_t(i)], r);
      if (seen.insert(CoxeterDatum::pack_root(img)).second) queue.push_back(img);
    }
  }
  auto height_lex = [](const std::vector<int>& x, const std::vector<int>& y) {
    int hx = 0, hy = 0;
    for (int v : x) hx += v;
    for (int v : y) hy += v;
    if (hx != hy) return hx < hy;
    return x < y;
  };
  std::sort(pos.begin(), pos.end(), height_lex);
  D.num_positive = int(pos.size());
  check(pos.size() == neg.size(), "positive/negative root count mismatch");
  D.roots = pos;
  for (const std::vector<int>& r : pos) {
    std::vector<int> m = r;
    for (int& v : m) v = -v;
    D.roots.push_back(m);
  }
  for (int i = 0; i < int(D.roots.size()); ++i) D.root_lookup[CoxeterDatum::pack_root(D.roots[size_t(i)])] = i;

  // Diagram automorphism.
  D.delta_perm.resize(size_t(n));
  for (int i = 0; i < n; ++i) D.delta_perm[size_t(i)] = i;
  if (twisted) {
    switch (family) {
      case 'A':
        for (int i = 0; i < n; ++i) D.delta_perm[size_t(i)] = n - 1 - i;
        break;
      case 'D':
        std::swap(D.delta_perm[0], D.delta_perm[1]);
        break;
      case 'E':
        std::swap(D.delta_perm[0], D.delta_perm[5]);
        std::swap(D.delta_perm[2], D.delta_perm[4]);
        break;
      default:
        throw usage_error("this type has no diagram automorphism to twist by");
    }
    D.delta_order = 2;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        check(D.cartan_at(D.delta_perm[size_t(i)], D.delta_perm[size_t(j)]) == D.cartan_at(i, j),
              "twist does not preserve the Cartan matrix");
  }
  D.delta_mat = IMat(n);
  for (int j = 0; j < n; ++j) D.delta_mat.at(D.delta_perm[size_t(j)], j) = 1;
  D.delta_inv_mat = iinverse(D.delta_mat);

  // Classical coordinates (used by cycle-type representatives).
  if (family == 'A' || family == 'B' || family == 'C' || family == 'D') {
    int m = D.ambient_dim;
    D.alpha_in_e = QMat(m, n, Rat(0));
    auto col = [&](int j, int coord, int val) { D.alpha_in_e.at(coord, j) = val; };
    if (family == 'A') {
      for (int j = 0; j < n; ++j) {
        col(j, j, 1);
        col(j, j + 1, -1);
      }
    } else if (family == 'B') {
      col(0, 0, 1);
      for (int j = 1; j < n; ++j) {
        col(j, j, 1);
        col(j, j - 1, -1);
      }
    } else if (family == 'C') {
      col(0, 0, 2);
      for (int j = 1; j < n; ++j) {
        col(j, j, 1);
        col(j, j - 1, -1);
      }
    } else {  // D
      col(0, 1, 1);
      col(0, 0, 1);
      col(1, 1, 1);
      col(1, 0, -1);
      for (int j = 2; j < n; ++j) {
        col(j, j, 1);
        col(j, j - 1, -1);
      }
    }
  }
  return D;
}

inline CoxeterDatum build_datum(const std::string& label) {
  std::string s = label;
  bool twisted = false;
  if (!s.empty() && s[0] == '2') {
    twisted = true;
    s = s.substr(1);
  }
  require(s.size() >= 2 && std::isalpha(s[0]), "type label must look like A3 / C2 / 2A3");
  char fam = char(std::toupper(s[0]));
  int rank = 0;
  try {
    rank = std::stoi(s.substr(1));
  } catch (...) {
    throw usage_error("bad rank in type label: " + label);
  }
  return build_datum(fam, rank, twisted);
}

// ---------------------------------------------------------------------------
// Twisted Weyl elements: full action matrix on root coordinates (twist action
// included) plus the twist exponent. Composition is matrix product.
// ---------------------------------------------------------------------------

struct Weyl {
  const CoxeterDatum* D = nullptr;
  IMat m;
  int twist = 0;

  Weyl() = default;
  Weyl(const CoxeterDatum* dat, IMat mat, int tw)
      : D(dat), m(std::move(mat)), twist(((tw % dat->delta_order) + dat->delta_order) % dat->delta_order) {}

  static Weyl identity(const CoxeterDatum& D) { return Weyl(&D, IMat::identity(D.rank), 0); }
  static Weyl simple(const CoxeterDatum& D, int i) {
    require(i >= 0 && i < D.rank, "generator index out of range");
    return Weyl(&D, D.simple_refl[size_t(i)], 0);
  }
  static Weyl twist_element(const CoxeterDatum& D, int k) {
    k = ((k % D.delta_order) + D.delta_order) % D.delta_order;
    return Weyl(&D, ipow(D.delta_mat, k), k);
  }

  bool operator==(const Weyl& o) const { return m == o.m && twist == o.twist; }
  bool operator!=(const Weyl& o) const { return !(*this == o); }

  bool is_identity() const { return twist == 0 && m.is_identity(); }

  IMat weyl_part_mat() const { return imul(m, ipow(D->delta_inv_mat, twist)); }
  Weyl weyl_part() const { return Weyl(D, weyl_part_mat(), 0); }
};

struct WeylHash {
  size_t operator()(const Weyl& w) const { return IMatHash{}(w.m) * 31 + size_t(w.twist); }
};

inline Weyl operator*(const Weyl& a, const Weyl& b) {
  check(a.D == b.D, "element datum mismatch");
  return Weyl(a.D, imul(a.m, b.m), a.twist + b.twist);
}

// First nonzero coordinate decides the sign (roots never mix signs).
inline bool column_negative(const IMat& m, int j) {
  for (int i = 0; i < m.n; ++i) {
    int v = m.at(i, j);
    if (v != 0) return v < 0;
  }
  throw internal_error("column_negative: zero column");
}

// Inverse of a root-permuting matrix through the induced root permutation.
inline IMat root_inverse(const CoxeterDatum& D, const IMat& m) {
  int total = int(D.roots.size());
  std::vector<int> inv_perm(size_t(total), -1);
  for (int r = 0; r < total; ++r) {
    int img = D.root_index(iapply(m, D.roots[size_t(r)]));
    check(img >= 0, "root_inverse: matrix does not permute the roots");
    inv_perm[size_t(img)] = r;
  }
  IMat inv(D.rank);
  for (int j = 0; j < D.rank; ++j) {
    std::vector<int> alpha(size_t(D.rank), 0);
    alpha[size_t(j)] = 1;
    int src = inv_perm[size_t(D.root_index(alpha))];
    for (int i = 0; i < D.rank; ++i) inv.at(i, j) = D.roots[size_t(src)][size_t(i)];
  }
  return inv;
}

inline Weyl inverse(const Weyl& a) { return Weyl(a.D, root_inverse(*a.D, a.m), -a.twist); }

inline int apply_to_root(const Weyl& w, int root_idx) {
  int img = w.D->root_index(iapply(w.m, w.D->roots[size_t(root_idx)]));
  check(img >= 0, "element does not permute the root set");
  return img;
}

inline int length(const Weyl& w) {
  int l = 0;
  for (int r = 0; r < w.D->num_positive; ++r)
    if (!w.D->root_is_positive(apply_to_root(w, r))) ++l;
  return l;
}

inline std::vector<int> inversion_set(const Weyl& w) {
  // positive roots sent negative
  std::vector<int> inv;
  for (int r = 0; r < w.D->num_positive; ++r)
    if (!w.D->root_is_positive(apply_to_root(w, r))) inv.push_back(r);
  return inv;
}

// l(w s_i) < l(w): the image of the i-th simple root is column i of the matrix.
inline bool right_descent(const Weyl& w, int i) { return column_negative(w.m, i); }
// l(s_i w) < l(w)
inline bool left_descent(const Weyl& w, int i) {
  return column_negative(root_inverse(*w.D, w.m), i);
}

inline Weyl element_from_word(const CoxeterDatum& D, const std::vector<int>& word, int twist_exp = 0) {
  Weyl w = Weyl::identity(D);
  for (int i : word) w = w * Weyl::simple(D, i);
  return w * Weyl::twist_element(D, twist_exp);
}

// Reduced word by peeling the smallest left descent.
inline std::vector<int> reduced_word(const Weyl& w_in) {
  const CoxeterDatum& D = *w_in.D;
  IMat m = w_in.weyl_part_mat();
  IMat minv = root_inverse(D, m);
  std::vector<int> word;
  while (!m.is_identity()) {
    int pick = -1;
    for (int i = 0; i < D.rank; ++i)
      if (column_negative(minv, i)) {
        pick = i;
        break;
      }
    check(pick >= 0, "reduced_word: no descent on a non-identity element");
    word.push_back(pick);
    const IMat& S = D.simple_refl[size_t(pick)];
    m = imul(S, m);
    minv = imul(minv, S);
  }
  return word;
}

// Longest element of the standard parabolic generated by J.
inline Weyl longest_element(const CoxeterDatum& D, const std::vector<int>& J) {
  Weyl w = Weyl::identity(D);
  bool moved = true;
  while (moved) {
    moved = false;
    for (int j : J) {
      if (!right_descent(w, j)) {
        w = w * Weyl::simple(D, j);
        moved = true;
      }
    }
  }
  check(length(w) == int(D.positive_roots_supported_on(J).size()),
        "longest parabolic element has wrong length");
  return w;
}

enum class CosetSide { Left, Right, Double };

// Minimal-length element of W_J w, w W_J, or W_J w W_J.
inline Weyl coset_minimum(const CoxeterDatum& D, const std::vector<int>& J, Weyl w, CosetSide side) {
  IMat minv = root_inverse(D, w.m);
  bool moved = true;
  while (moved) {
    moved = false;
    if (side == CosetSide::Left || side == CosetSide::Double)
      for (int j : J)
        if (column_negative(minv, j)) {
          const IMat& S = D.simple_refl[size_t(j)];
          w.m = imul(S, w.m);
          minv = imul(minv, S);
          moved = true;
        }
    if (side == CosetSide::Right || side == CosetSide::Double)
      for (int j : J)
        if (column_negative(w.m, j)) {
          const IMat& S = D.simple_refl[size_t(j)];
          w.m = imul(w.m, S);
          minv = imul(S, minv);
          moved = true;
        }
  }
  return w;
}

inline bool in_parabolic(const Weyl& w, const std::vector<int>& J) {
  if (w.twist != 0) return false;
  std::vector<bool> in(size_t(w.D->rank), false);
  for (int j : J) in[size_t(j)] = true;
  for (int r : inversion_set(w))
    for (int i = 0; i < w.D->rank; ++i)
      if (w.D->roots[size_t(r)][size_t(i)] != 0 && !in[size_t(i)]) return false;
  return true;
}

// x^{-1} w x for x a simple reflection; preserves the twist component.
inline Weyl conjugate_by_simple(const Weyl& w, int i) {
  const IMat& S = w.D->simple_refl[size_t(i)];
  return Weyl(w.D, imul(imul(S, w.m), S), w.twist);
}

inline Weyl conjugate(const Weyl& w, const Weyl& x) {
  return inverse(x) * w * x;
}

// Full enumeration of the underlying Weyl group (untwisted elements).
inline std::vector<IMat> enumerate_group(const CoxeterDatum& D, size_t cap = 2000000) {
  std::vector<IMat> elems;
  std::unordered_set<IMat, IMatHash> seen;
  std::deque<IMat> queue;
  IMat id = IMat::identity(D.rank);
  queue.push_back(id);
  seen.insert(id);
  while (!queue.empty()) {
    IMat w = queue.front();
    queue.pop_front();
    elems.push_back(w);
    require(elems.size() <= cap, "group too large to enumerate");
    for (int i = 0; i < D.rank; ++i) {
      IMat x = imul(w, D.simple_refl[size_t(i)]);
      if (seen.insert(x).second) queue.push_back(x);
    }
  }
  return elems;
}

// Orbit of w under conjugation by W (twisted conjugation when w carries a twist).
inline std::vector<Weyl> conjugacy_class_of(const Weyl& w, size_t cap = 2000000) {
  std::vector<Weyl> orbit;
  std::unordered_set<IMat, IMatHash> seen;
  std::deque<Weyl> queue;
  queue.push_back(w);
  seen.insert(w.m);
  while (!queue.empty()) {
    Weyl x = queue.front();
    queue.pop_front();
    orbit.push_back(x);
    require(orbit.size() <= cap, "conjugacy class too large to enumerate");
    for (int i = 0; i < w.D->rank; ++i) {
      Weyl y = conjugate_by_simple(x, i);
      if (seen.insert(y.m).second) queue.push_back(y);
    }
  }
  return orbit;
}

// ---------------------------------------------------------------------------
// Conjugacy class parameters.
// ---------------------------------------------------------------------------

struct ClassParam {
  enum class Kind { TypeA, TwistedA, BCD, Exceptional };
  Kind kind = Kind::TypeA;
  Partition lambda;  // TypeA / TwistedA: the partition; BCD: negative cycles
  Partition mu;      // BCD: positive cycles
  int marker = 0;    // 0 = none, 1 = I, 2 = II (split classes of D_n)
  std::vector<int> word;  // Exceptional: canonical reduced word of a representative

  bool operator==(const ClassParam& o) const {
    return kind == o.kind && lambda == o.lambda && mu == o.mu && marker == o.marker && word == o.word;
  }
};

namespace detail {

// Signed permutation on e_1..e_m as a matrix (column j = image of e_{j+1}).
struct SignedPerm {
  int m;
  QMat mat;
  explicit SignedPerm(int m_) : m(m_), mat(m_, m_, Rat(0)) {}
  void set(int from, int to, int sign) { mat.at(to, from) = sign; }
};

inline Weyl signed_perm_to_element(const CoxeterDatum& D, const QMat& P, int twist_exp) {
  // Solve alpha_in_e * x = P * alpha_in_e[:, j] for each column j.
  int n = D.rank, m = D.ambient_dim;
  QMat E = D.alpha_in_e;
  // normal equations: (E^T E) x = E^T y, E has full column rank
  QMat EtE(n, n, Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat s = 0;
      for (int k = 0; k < m; ++k) s += E.at(k, i) * E.at(k, j);
      EtE.at(i, j) = s;
    }
  IMat act(n);
  for (int j = 0; j < n; ++j) {
    std::vector<Rat> aj(size_t(m), Rat(0));
    for (int k = 0; k < m; ++k) aj[size_t(k)] = E.at(k, j);
    std::vector<Rat> y = mat_apply(P, aj, Rat(0));
    std::vector<Rat> rhs(size_t(n), Rat(0));
    for (int i = 0; i < n; ++i) {
      Rat s = 0;
      for (int k = 0; k < m; ++k) s += E.at(k, i) * y[size_t(k)];
      rhs[size_t(i)] = s;
    }
    std::vector<Rat> x = mat_solve(EtE, rhs, Rat(0), Rat(1));
    for (int i = 0; i < n; ++i) {
      check(x[size_t(i)].get_den() == 1, "signed permutation image is not in the root lattice");
      act.at(i, j) = int(x[size_t(i)].get_num().get_si());
    }
    // verify E x = y exactly
    std::vector<Rat> back(size_t(m), Rat(0));
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n; ++i) back[size_t(k)] += E.at(k, i) * x[size_t(i)];
    check(back == y, "signed permutation does not preserve the root space");
  }
  return Weyl(&D, act, twist_exp);
}

}  // namespace detail

// Representative of a conjugacy class, as a signed/plain permutation realized
// on the root lattice.
inline Weyl class_representative(const CoxeterDatum& D, const ClassParam& cp) {
  switch (cp.kind) {
    case ClassParam::Kind::TypeA: {
      require(D.family == 'A' && !D.twisted, "TypeA class on a non-A datum");
      require(partition_sum(cp.lambda) == D.rank + 1, "partition size must be rank+1");
      detail::SignedPerm P(D.ambient_dim);
      int at = 0;
      for (int part : cp.lambda) {
        for (int k = 0; k < part; ++k) P.set(at + k, at + (k + 1) % part, 1);
        at += part;
      }
      return detail::signed_perm_to_element(D, P.mat, 0);
    }
    case ClassParam::Kind::TwistedA: {
      require(D.family == 'A' && D.twisted, "TwistedA class needs a twisted A datum");
      require(partition_sum(cp.lambda) == D.rank + 1, "partition size must be rank+1");
      // Alternating-sign cycles: odd parts close with a net sign flip
      // (negative cycles), even parts close without one (positive cycles).
      detail::SignedPerm P(D.ambient_dim);
      int at = 0;
      for (int part : cp.lambda) {
        // e_{a_k} -> -e_{a_{k+1}} cyclically; the sign closes to (-1)^part,
        // so odd parts give negative cycles and even parts positive ones.
        for (int k = 0; k < part; ++k) P.set(at + k, at + (k + 1) % part, -1);
        at += part;
      }
      return detail::signed_perm_to_element(D, P.mat, 1);
    }
    case ClassParam::Kind::BCD: {
      require(D.family == 'B' || D.family == 'C' || D.family == 'D', "BCD class on wrong datum");
      require(partition_sum(cp.lambda) + partition_sum(cp.mu) == D.rank,
              "bipartition size must equal the rank");
      if (D.family == 'D') {
        int negs = int(cp.lambda.size());
        require((negs % 2 == 0) != D.twisted, "negative cycle parity does not match the component");
      }
      detail::SignedPerm P(D.ambient_dim);
      int at = 0;
      for (int part : cp.lambda) {  // negative cycles
        for (int k = 0; k < part; ++k) P.set(at + k, at + (k + 1) % part, k + 1 == part ? -1 : 1);
        at += part;
      }
      for (int part : cp.mu) {  // positive cycles
        for (int k = 0; k < part; ++k) P.set(at + k, at + (k + 1) % part, 1);
        at += part;
      }
      if (cp.marker == 2) {
        // second split class: conjugate by the sign flip of e_1
        QMat F(D.ambient_dim, D.ambient_dim, Rat(0));
        for (int i = 0; i < D.ambient_dim; ++i) F.at(i, i) = i == 0 ? -1 : 1;
        P.mat = mat_mul(mat_mul(F, P.mat, Rat(0)), F, Rat(0));
      }
      return detail::signed_perm_to_element(D, P.mat, D.twisted ? 1 : 0);
    }
    case ClassParam::Kind::Exceptional:
      return element_from_word(D, cp.word, D.twisted ? 1 : 0);
  }
  throw usage_error("bad class parameter");
}

inline std::vector<std::pair<Partition, Partition>> all_bipartitions(int n) {
  std::vector<std::pair<Partition, Partition>> out;
  for (int k = n; k >= 0; --k)
    for (const Partition& l : all_partitions(k))
      for (const Partition& m : all_partitions(n - k)) out.emplace_back(l, m);
  return out;
}

inline std::vector<ClassParam> enumerate_classes(const CoxeterDatum& D) {
  std::vector<ClassParam> out;
  auto push = [&out](ClassParam cp) { out.push_back(std::move(cp)); };
  if (D.family == 'A') {
    for (const Partition& p : all_partitions(D.rank + 1)) {
      ClassParam cp;
      cp.kind = D.twisted ? ClassParam::Kind::TwistedA : ClassParam::Kind::TypeA;
      cp.lambda = p;
      push(cp);
    }
    return out;
  }
  if (D.family == 'B' || D.family == 'C' || D.family == 'D') {
    for (auto& [l, m] : all_bipartitions(D.rank)) {
      if (D.family == 'D') {
        bool even_negs = int(l.size()) % 2 == 0;
        if (even_negs == D.twisted) continue;
        bool split = l.empty() && !m.empty() &&
                     std::all_of(m.begin(), m.end(), [](int x) { return x % 2 == 0; });
        ClassParam cp;
        cp.kind = ClassParam::Kind::BCD;
        cp.lambda = l;
        cp.mu = m;
        if (split && !D.twisted) {
          cp.marker = 1;
          push(cp);
          cp.marker = 2;
          push(cp);
        } else {
          push(cp);
        }
      } else {
        ClassParam cp;
        cp.kind = ClassParam::Kind::BCD;
        cp.lambda = l;
        cp.mu = m;
        push(cp);
      }
    }
    return out;
  }
  // Exceptional families: full orbit partition under (twisted) conjugation.
  require(D.family == 'G' || D.family == 'F' || D.family == 'E',
          "class enumeration unsupported for this type");
  std::vector<IMat> group = enumerate_group(D);
  require(group.size() <= 1200000, "group too large for orbit partitioning");
  std::unordered_set<IMat, IMatHash> unassigned(group.begin(), group.end());
  struct ClassInfo {
    std::vector<int> word;
    size_t size;
    int min_len;
  };
  std::vector<ClassInfo> classes;
  int tw = D.twisted ? 1 : 0;
  for (const IMat& g : group) {
    if (!unassigned.count(g)) continue;
    Weyl w(&D, imul(g, ipow(D.delta_mat, tw)), tw);
    std::vector<Weyl> orbit = conjugacy_class_of(w);
    int min_len = length(orbit[0]);
    std::vector<int> best_word = reduced_word(orbit[0]);
    for (const Weyl& x : orbit) {
      IMat wp = x.weyl_part_mat();
      unassigned.erase(wp);
      int l = length(x);
      if (l < min_len) {
        min_len = l;
        best_word = reduced_word(x);
      } else if (l == min_len) {
        std::vector<int> cand = reduced_word(x);
        if (cand < best_word) best_word = cand;
      }
    }
    classes.push_back({best_word, orbit.size(), min_len});
  }
  std::sort(classes.begin(), classes.end(), [](const ClassInfo& a, const ClassInfo& b) {
    if (a.min_len != b.min_len) return a.min_len < b.min_len;
    if (a.size != b.size) return a.size < b.size;
    return a.word < b.word;
  });
  for (const ClassInfo& ci : classes) {
    ClassParam cp;
    cp.kind = ClassParam::Kind::Exceptional;
    cp.word = ci.word;
    push(cp);
  }
  return out;
}

// Short printable name for a class parameter.
inline std::string class_name(const ClassParam& cp) {
  auto join = [](const Partition& p) {
    std::string s;
    for (size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s;
  };
  switch (cp.kind) {
    case ClassParam::Kind::TypeA:
    case ClassParam::Kind::TwistedA:
      return "(" + join(cp.lambda) + ")";
    case ClassParam::Kind::BCD: {
      std::string s = "(" + join(cp.lambda) + "|" + join(cp.mu) + ")";
      if (cp.marker == 1) s += "I";
      if (cp.marker == 2) s += "II";
      return s;
    }
    case ClassParam::Kind::Exceptional: {
      std::string s = "w[";
      for (size_t i = 0; i < cp.word.size(); ++i) s += (i ? "," : "") + std::to_string(cp.word[i] + 1);
      return s + "]";
    }
  }
  return "?";
}

}  // namespace weylbraid
