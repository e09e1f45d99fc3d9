#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <vector>

#include "weylbraid/cyclo.hpp"
#include "weylbraid/rootsys.hpp"

namespace weylbraid {

// ---------------------------------------------------------------------------
// Eigen-structure of a twisted Weyl element on the reflection representation.
// Angles are stored as exact rationals t = theta / 2pi. A complete increasing
// sequence lives in (0, 1/2] with a final integer entry n when 1 is an
// eigenvalue (theta = 2 n pi).
// ---------------------------------------------------------------------------

struct Subspace {
  CycloCtxPtr ctx;
  std::vector<std::vector<CycloElem>> basis;  // conjugation-fixed coordinate vectors

  int dim() const { return int(basis.size()); }
};

struct EigenFiltration {
  const CoxeterDatum* D = nullptr;
  Weyl element;
  CycloCtxPtr ctx;
  std::vector<Rat> angles;                                   // t_1 < ... < t_m (weakly, for subspace input)
  std::vector<std::vector<std::vector<CycloElem>>> kernels;  // complex eigenvector basis per step
  std::vector<Subspace> real_steps;                          // real eigenspace piece added at each step
  std::vector<std::vector<int>> hyperplanes;                 // H_{F_i}, i = 0..m, positive root indices
  std::vector<std::vector<int>> supports;                    // I(F_i), i = 1..m, generator subsets
  std::vector<int> irredundant;                              // 0-based step indices where H drops

  int steps() const { return int(angles.size()); }
};

namespace detail {

inline QMat action_as_qmat(const IMat& m) {
  QMat q(m.n, m.n, Rat(0));
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) q.at(i, j) = m.at(i, j);
  return q;
}

}  // namespace detail

// Kernel of (A - zeta_N^k I) over Q(zeta_N), for a rational square matrix A.
inline std::vector<std::vector<CycloElem>> cyclo_eigen_kernel(const CycloCtxPtr& ctx, const QMat& A,
                                                              Int k) {
  const CycloContext* cx = ctx.get();
  int n = A.rows;
  CycloElem zeta = CycloElem::root_power(cx, k);
  CMat m = cmat(cx, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CycloElem e = CycloElem::from_rat(cx, A.at(i, j));
      if (i == j) e = e - zeta;
      m.at(i, j) = e;
    }
  return mat_kernel(m, CycloElem::zero(cx), CycloElem::from_rat(cx, 1));
}

// Conductor for all eigenvalue computations attached to one element.
inline Int conductor_for(const Weyl& w) { return illcm(imat_order(w.m), w.D->delta_order); }

// Distinct folded angles t = j/m in [0, 1/2] with e^{2 pi i t} an eigenvalue.
inline std::vector<Rat> eigen_angles(const Weyl& w) {
  Int d = imat_order(w.m);
  Int N = conductor_for(w);
  CycloCtxPtr ctx = make_cyclo_context(N);
  QMat A = detail::action_as_qmat(w.m);
  std::vector<Rat> out;
  int total = 0;
  for (Int m = 1; m <= d; ++m) {
    if (d % m != 0) continue;
    size_t mult = cyclo_eigen_kernel(ctx, A, N / m).size();
    if (mult == 0) continue;
    int folded = 0;
    for (Int j = 0; 2 * j <= m; ++j) {
      if (m == 1 && j > 0) break;
      if (j > 0 && std::gcd(j, m) != 1) continue;
      if (j == 0 && m != 1) continue;
      out.push_back(Rat(mpz_class(j), mpz_class(m)));
      ++folded;
    }
    // primitive m-th roots all share the multiplicity of the computed one
    int prim = m == 1 ? 1 : 0;
    for (Int j = 1; j < m; ++j)
      if (std::gcd(j, m) == 1) ++prim;
    total += int(mult) * prim;
    (void)folded;
  }
  check(total == w.D->rank, "eigenvalue multiplicities do not sum to the rank");
  for (Rat& t : out) t.canonicalize();
  std::sort(out.begin(), out.end());
  return out;
}

// Increasing complete sequence in (0, 1/2] with final entry n when 1 is an
// eigenvalue (the (0,pi] cup {2 n pi} convention).
inline std::vector<Rat> complete_sequence(const Weyl& w, Int n = 1) {
  std::vector<Rat> angles = eigen_angles(w);
  std::vector<Rat> out;
  bool has_one = false;
  for (const Rat& t : angles) {
    if (sgn(t) == 0)
      has_one = true;
    else
      out.push_back(t);
  }
  if (has_one) out.push_back(Rat(n));
  return out;
}

// Real eigenspace basis from a complex kernel: x = v + conj(v) and M x, with
// the (zeta - zeta^{-1}) rescue when v + conj(v) vanishes.
inline Subspace real_eigenspace_from_kernel(const CycloCtxPtr& ctx, const QMat& A,
                                            const std::vector<std::vector<CycloElem>>& kernel, Int k) {
  const CycloContext* cx = ctx.get();
  int n = A.rows;
  Subspace S;
  S.ctx = ctx;
  CycloElem zeta = CycloElem::root_power(cx, k);
  CycloElem rescue = zeta - conj(zeta);
  // parallel reduced copy used only as an independence oracle
  CMat reduced(0, n, CycloElem::zero(cx));
  auto try_add = [&](const std::vector<CycloElem>& cand) {
    std::vector<CycloElem> row = cand;
    for (int r = 0; r < reduced.rows; ++r) {
      int lead = -1;
      for (int j = 0; j < n; ++j)
        if (!reduced.at(r, j).is_zero()) {
          lead = j;
          break;
        }
      if (lead < 0 || row[size_t(lead)].is_zero()) continue;
      CycloElem f = row[size_t(lead)] / reduced.at(r, lead);
      for (int j = 0; j < n; ++j) row[size_t(j)] = row[size_t(j)] - f * reduced.at(r, j);
    }
    bool zero = std::all_of(row.begin(), row.end(), [](const CycloElem& e) { return e.is_zero(); });
    if (zero) return;
    reduced.a.insert(reduced.a.end(), row.begin(), row.end());
    ++reduced.rows;
    S.basis.push_back(cand);
  };
  for (const std::vector<CycloElem>& v0 : kernel) {
    std::vector<CycloElem> v = v0;
    std::vector<CycloElem> x(size_t(n), CycloElem::zero(cx));
    auto make_x = [&]() {
      for (int i = 0; i < n; ++i) x[size_t(i)] = v[size_t(i)] + conj(v[size_t(i)]);
    };
    make_x();
    if (std::all_of(x.begin(), x.end(), [](const CycloElem& e) { return e.is_zero(); })) {
      for (CycloElem& e : v) e = rescue * e;
      make_x();
    }
    check(!std::all_of(x.begin(), x.end(), [](const CycloElem& e) { return e.is_zero(); }),
          "real eigenvector extraction failed");
    for (const CycloElem& e : x) check(is_real(e), "real eigenvector has non-real coordinates");
    try_add(x);
    // M x is again conjugation-fixed and lies in the same real eigenspace
    std::vector<CycloElem> mx(size_t(n), CycloElem::zero(cx));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (sgn(A.at(i, j)) != 0) mx[size_t(i)] = mx[size_t(i)] + A.at(i, j) * x[size_t(j)];
    try_add(mx);
  }
  return S;
}

inline Int angle_to_power(const CycloCtxPtr& ctx, const Rat& t) {
  Rat k = t * Rat(ctx->conductor);
  check(k.get_den() == 1, "angle does not live in the chosen cyclotomic field");
  Int ki = k.get_num().get_si() % ctx->conductor;
  return ki;
}

inline Subspace real_eigenspace(const Weyl& w, const Rat& t) {
  Int N = conductor_for(w);
  CycloCtxPtr ctx = make_cyclo_context(N);
  QMat A = detail::action_as_qmat(w.m);
  Int k = angle_to_power(ctx, t);
  return real_eigenspace_from_kernel(ctx, A, cyclo_eigen_kernel(ctx, A, k), k);
}

// (alpha, v) with alpha a root coefficient vector and v a cyclotomic vector.
inline CycloElem root_pairing(const CoxeterDatum& D, int root_idx, const std::vector<CycloElem>& v,
                              const CycloContext* cx) {
  const std::vector<int>& alpha = D.roots[size_t(root_idx)];
  CycloElem s = CycloElem::zero(cx);
  for (int i = 0; i < D.rank; ++i) {
    if (alpha[size_t(i)] == 0) continue;
    for (int j = 0; j < D.rank; ++j) {
      Rat c = Rat(alpha[size_t(i)]) * D.bilinear.at(i, j);
      if (sgn(c) != 0) s = s + c * v[size_t(j)];
    }
  }
  return s;
}

// Filtration from explicit per-step complex kernels + real pieces.
inline EigenFiltration assemble_filtration(const CoxeterDatum& D, const Weyl& w, CycloCtxPtr ctx,
                                           std::vector<Rat> angles,
                                           std::vector<std::vector<std::vector<CycloElem>>> kernels,
                                           std::vector<Subspace> real_steps) {
  EigenFiltration F;
  F.D = &D;
  F.element = w;
  F.ctx = ctx;
  F.angles = std::move(angles);
  F.kernels = std::move(kernels);
  F.real_steps = std::move(real_steps);
  std::vector<int> cur(D.num_positive);
  for (int r = 0; r < D.num_positive; ++r) cur[size_t(r)] = r;
  F.hyperplanes.push_back(cur);
  for (int step = 0; step < F.steps(); ++step) {
    std::vector<int> next;
    for (int r : cur) {
      bool orth = true;
      for (const std::vector<CycloElem>& v : F.kernels[size_t(step)])
        if (!root_pairing(D, r, v, ctx.get()).is_zero()) {
          orth = false;
          break;
        }
      if (orth) next.push_back(r);
    }
    cur = next;
    F.hyperplanes.push_back(cur);
    std::vector<int> supp;
    for (int i = 0; i < D.rank; ++i) {
      std::vector<int> alpha(size_t(D.rank), 0);
      alpha[size_t(i)] = 1;
      int idx = D.root_index(alpha);
      if (std::binary_search(cur.begin(), cur.end(), idx)) supp.push_back(i);
    }
    F.supports.push_back(supp);
    if (F.hyperplanes[size_t(step)].size() != cur.size()) F.irredundant.push_back(step);
  }
  return F;
}

inline EigenFiltration build_filtration(const Weyl& w, const std::vector<Rat>& angles,
                                        bool with_real = true) {
  const CoxeterDatum& D = *w.D;
  Int N = conductor_for(w);
  for (const Rat& t : angles) N = illcm(N, Int(t.get_den().get_si()));
  CycloCtxPtr ctx = make_cyclo_context(N);
  QMat A = detail::action_as_qmat(w.m);
  std::vector<std::vector<std::vector<CycloElem>>> kernels;
  std::vector<Subspace> reals;
  for (const Rat& t : angles) {
    Int k = angle_to_power(ctx, t);
    kernels.push_back(cyclo_eigen_kernel(ctx, A, k));
    if (with_real)
      reals.push_back(real_eigenspace_from_kernel(ctx, A, kernels.back(), k));
    else
      reals.push_back(Subspace{ctx, {}});
  }
  return assemble_filtration(D, w, ctx, angles, std::move(kernels), std::move(reals));
}

// ---------------------------------------------------------------------------
// Exact linear feasibility by Fourier-Motzkin elimination over the real
// cyclotomic subfield. Constraints are homogeneous rows a . c >= 0 / > 0.
// ---------------------------------------------------------------------------

struct LinearConstraint {
  std::vector<CycloElem> a;
  bool strict = false;
};

namespace detail {

// Scale so the leading coefficient is +-1 (positive scaling only).
inline void fm_normalize(LinearConstraint& r) {
  for (const CycloElem& e : r.a) {
    if (e.is_zero()) continue;
    int s = sign_of_real(e);
    CycloElem scale = cyclo_inv(s > 0 ? e : -e);
    for (CycloElem& x : r.a) x = scale * x;
    return;
  }
}

}  // namespace detail

inline bool fm_feasible(std::vector<LinearConstraint> sys, int nvars) {
  for (int var = 0; var < nvars; ++var) {
    std::vector<LinearConstraint> pos, neg, zero;
    for (LinearConstraint& r : sys) {
      int s = r.a[size_t(var)].is_zero() ? 0 : sign_of_real(r.a[size_t(var)]);
      if (s > 0)
        pos.push_back(std::move(r));
      else if (s < 0)
        neg.push_back(std::move(r));
      else
        zero.push_back(std::move(r));
    }
    std::vector<LinearConstraint> next = std::move(zero);
    for (const LinearConstraint& p : pos)
      for (const LinearConstraint& q : neg) {
        LinearConstraint c;
        c.strict = p.strict || q.strict;
        c.a.resize(p.a.size(), CycloElem::zero(p.a[0].ctx));
        // coeff_p > 0 > coeff_q: combine to eliminate var
        const CycloElem& cp = p.a[size_t(var)];
        const CycloElem& cq = q.a[size_t(var)];
        for (size_t j = 0; j < p.a.size(); ++j) c.a[j] = cp * q.a[j] - cq * p.a[j];
        check(c.a[size_t(var)].is_zero(), "elimination failed to cancel the variable");
        bool all_zero = std::all_of(c.a.begin(), c.a.end(),
                                    [](const CycloElem& e) { return e.is_zero(); });
        if (all_zero) {
          if (c.strict) return false;
          continue;
        }
        next.push_back(std::move(c));
      }
    // prune duplicates (same direction); keep the strict version
    for (LinearConstraint& r : next) detail::fm_normalize(r);
    std::sort(next.begin(), next.end(), [](const LinearConstraint& x, const LinearConstraint& y) {
      if (x.a != y.a) {
        // deterministic order on coefficient vectors
        for (size_t j = 0; j < x.a.size(); ++j) {
          if (x.a[j].c != y.a[j].c) return x.a[j].c < y.a[j].c;
        }
        return false;
      }
      return x.strict > y.strict;
    });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const LinearConstraint& x, const LinearConstraint& y) {
                             return x.a == y.a;
                           }),
               next.end());
    check(next.size() < 100000, "feasibility system blow-up");
    sys = std::move(next);
    bool any_nonzero_row = false;
    for (const LinearConstraint& r : sys) {
      bool all_zero = std::all_of(r.a.begin(), r.a.end(),
                                  [](const CycloElem& e) { return e.is_zero(); });
      if (all_zero && r.strict) return false;
      if (!all_zero) any_nonzero_row = true;
    }
    if (!any_nonzero_row) return true;
  }
  for (const LinearConstraint& r : sys) {
    bool all_zero =
        std::all_of(r.a.begin(), r.a.end(), [](const CycloElem& e) { return e.is_zero(); });
    if (all_zero && r.strict) return false;
    check(all_zero, "variables remain after elimination");
  }
  return true;
}

// ---------------------------------------------------------------------------
// Good position: every prefix of the filtration must contain a regular point
// of itself inside the closed fundamental chamber. Exact reduction: the cone
// K_i = {x in F_i : (beta, x) >= 0 for all simple beta} is convex, so it
// avoids the union of the non-containing hyperplanes iff it is not inside any
// single one, and each such test is a two-sided strict feasibility problem.
// ---------------------------------------------------------------------------

inline bool good_position_test(const EigenFiltration& F) {
  const CoxeterDatum& D = *F.D;
  const CycloContext* cx = F.ctx.get();
  std::vector<std::vector<CycloElem>> basis;  // cumulative real basis
  for (int step = 0; step < F.steps(); ++step) {
    check(F.real_steps[size_t(step)].basis.empty() == F.kernels[size_t(step)].empty(),
          "filtration was built without real bases");
    for (const std::vector<CycloElem>& v : F.real_steps[size_t(step)].basis) basis.push_back(v);
    int k = int(basis.size());
    if (k == 0) continue;  // the zero prefix is its own regular locus
    // chamber rows: (alpha_i, sum c_j v_j) >= 0
    std::vector<LinearConstraint> chamber;
    for (int i = 0; i < D.rank; ++i) {
      std::vector<int> alpha(size_t(D.rank), 0);
      alpha[size_t(i)] = 1;
      int idx = D.root_index(alpha);
      LinearConstraint row;
      row.strict = false;
      row.a.reserve(size_t(k));
      for (const std::vector<CycloElem>& v : basis) row.a.push_back(root_pairing(D, idx, v, cx));
      chamber.push_back(std::move(row));
    }
    const std::vector<int>& H = F.hyperplanes[size_t(step) + 1];
    for (int r = 0; r < D.num_positive; ++r) {
      if (std::binary_search(H.begin(), H.end(), r)) continue;
      LinearConstraint row;
      row.strict = true;
      for (const std::vector<CycloElem>& v : basis) row.a.push_back(root_pairing(D, r, v, cx));
      bool ok = false;
      for (int side = 0; side < 2 && !ok; ++side) {
        std::vector<LinearConstraint> sys = chamber;
        LinearConstraint s = row;
        if (side == 1)
          for (CycloElem& e : s.a) e = -e;
        sys.push_back(std::move(s));
        ok = fm_feasible(std::move(sys), k);
      }
      if (!ok) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Searching a conjugacy class for a good position element: shortest-first
// traversal of the conjugation orbit.
// ---------------------------------------------------------------------------

struct GoodPositionResult {
  Weyl element;
  EigenFiltration filtration;
};

inline GoodPositionResult find_good_position_element(const CoxeterDatum& D, const ClassParam& cp,
                                                     Int sequence_n = 1) {
  Weyl start = class_representative(D, cp);
  std::vector<Rat> angles = complete_sequence(start, sequence_n);
  struct Entry {
    int len;
    size_t order;
    Weyl w;
  };
  auto cmp = [](const Entry& a, const Entry& b) {
    return a.len != b.len ? a.len > b.len : a.order > b.order;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
  std::unordered_set<IMat, IMatHash> seen;
  size_t counter = 0;
  queue.push({length(start), counter++, start});
  seen.insert(start.m);
  while (!queue.empty()) {
    Weyl w = queue.top().w;
    queue.pop();
    EigenFiltration F = build_filtration(w, angles, true);
    if (good_position_test(F)) return {w, std::move(F)};
    for (int i = 0; i < D.rank; ++i) {
      Weyl y = conjugate_by_simple(w, i);
      if (seen.insert(y.m).second) queue.push({length(y), counter++, y});
    }
  }
  throw internal_error("no good position element found in the class (contradicts existence)");
}

// ---------------------------------------------------------------------------
// Class-level invariants.
// ---------------------------------------------------------------------------

// Multiplicity of eigenvalue 1 (dimension of the fixed subspace).
inline int dim_fixed_space(const Weyl& w) {
  int n = w.D->rank;
  QMat m(n, n, Rat(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = Rat(w.m.at(i, j)) - Rat(i == j ? 1 : 0);
  return n - mat_rank(m);
}

// Length of the good braid representatives of a class, computed from any
// representative through the irredundant hyperplane drops. Good position is
// not required for this quantity.
inline Int l_good_of_element(const Weyl& w) {
  EigenFiltration F = build_filtration(w, complete_sequence(w), false);
  Rat sum = 0;
  for (int j : F.irredundant) {
    size_t drop = F.hyperplanes[size_t(j)].size() - F.hyperplanes[size_t(j) + 1].size();
    sum += Rat(2) * F.angles[size_t(j)] * Rat(Int(drop));
  }
  check(sum.get_den() == 1, "good length is not an integer");
  check(sgn(sum) >= 0, "good length is negative");
  return sum.get_num().get_si();
}

inline Int l_good(const CoxeterDatum& D, const ClassParam& cp) {
  return l_good_of_element(class_representative(D, cp));
}

// Minimal stable subspace containing v: span{v, w(v)}.
inline Subspace indecomposable_plane(const Weyl& w, const CycloCtxPtr& ctx,
                                     const std::vector<CycloElem>& v) {
  const CoxeterDatum& D = *w.D;
  require(!v.empty() && int(v.size()) == D.rank, "vector has wrong dimension");
  require(!std::all_of(v.begin(), v.end(), [](const CycloElem& e) { return e.is_zero(); }),
          "zero vector spans nothing");
  const CycloContext* cx = ctx.get();
  require(v[0].ctx == cx, "vector does not live in the supplied context");
  QMat A = detail::action_as_qmat(w.m);
  QMat Ainv = detail::action_as_qmat(root_inverse(D, w.m));
  auto apply = [&](const QMat& M, const std::vector<CycloElem>& x) {
    std::vector<CycloElem> r(size_t(D.rank), CycloElem::zero(cx));
    for (int i = 0; i < D.rank; ++i)
      for (int j = 0; j < D.rank; ++j)
        if (sgn(M.at(i, j)) != 0) r[size_t(i)] = r[size_t(i)] + M.at(i, j) * x[size_t(j)];
    return r;
  };
  std::vector<CycloElem> mv = apply(A, v), miv = apply(Ainv, v);
  // v must satisfy w(v) + w^{-1}(v) = c v for a single scalar c
  std::vector<CycloElem> sum(size_t(D.rank), CycloElem::zero(cx));
  for (int i = 0; i < D.rank; ++i) sum[size_t(i)] = mv[size_t(i)] + miv[size_t(i)];
  int lead = -1;
  for (int i = 0; i < D.rank; ++i)
    if (!v[size_t(i)].is_zero()) {
      lead = i;
      break;
    }
  CycloElem c = sum[size_t(lead)] / v[size_t(lead)];
  for (int i = 0; i < D.rank; ++i)
    require(sum[size_t(i)] == c * v[size_t(i)], "vector does not lie in a single real eigenspace");
  Subspace S;
  S.ctx = ctx;
  S.basis.push_back(v);
  // independence of {v, w(v)}
  int l2 = -1;
  for (int i = 0; i < D.rank && l2 < 0; ++i) {
    // mv independent of v iff the 2x2 minor at (lead, i) is nonzero
    if (i == lead) continue;
    CycloElem det = v[size_t(lead)] * mv[size_t(i)] - v[size_t(i)] * mv[size_t(lead)];
    if (!det.is_zero()) l2 = i;
  }
  if (l2 >= 0) S.basis.push_back(mv);
  return S;
}

}  // namespace weylbraid
