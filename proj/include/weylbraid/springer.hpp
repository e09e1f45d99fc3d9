#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "weylbraid/goodbraid.hpp"
#include "weylbraid/orbits.hpp"

namespace weylbraid {

// ---------------------------------------------------------------------------
// Dimension arithmetic for affine Springer fibers: shallow dimensions per
// conjugacy class, root valuation profiles, and explicit eigencomponent data.
// A loop-algebra element is kept as a formal list of eigencomponents
// gamma_k in the zeta_d^k-eigenspace of w on the Cartan subalgebra, written
// in coroot coordinates.
// ---------------------------------------------------------------------------

struct GammaComponent {
  Int k = 1;                    // valuation numerator (val = k/d)
  std::vector<CycloElem> vec;   // coroot coordinates over Q(zeta_d)
};

struct GammaDatum {
  const CoxeterDatum* D = nullptr;
  Weyl w;        // untwisted torus type
  Int d = 1;     // order of w
  CycloCtxPtr ctx;
  std::vector<GammaComponent> components;  // sorted by k, k >= 1
};

namespace detail {

// Action on coroot coordinates: conjugate the root action by the half-norms.
inline QMat coroot_action(const CoxeterDatum& D, const IMat& m) {
  QMat q(D.rank, D.rank, Rat(0));
  for (int i = 0; i < D.rank; ++i)
    for (int j = 0; j < D.rank; ++j)
      q.at(i, j) = Rat(m.at(i, j)) * D.half_norms[size_t(i)] / D.half_norms[size_t(j)];
  return q;
}

}  // namespace detail

// alpha(gamma_component): pairing of a root with a coroot-coordinate vector.
inline CycloElem root_value(const CoxeterDatum& D, int root_idx, const std::vector<CycloElem>& c,
                            const CycloContext* cx) {
  const std::vector<int>& alpha = D.roots[size_t(root_idx)];
  CycloElem s = CycloElem::zero(cx);
  for (int j = 0; j < D.rank; ++j) {
    Rat pair = 0;  // <alpha, alpha_j^vee> = (alpha, alpha_j) / d_j
    for (int i = 0; i < D.rank; ++i)
      if (alpha[size_t(i)] != 0) pair += Rat(alpha[size_t(i)]) * D.bilinear.at(i, j);
    pair /= D.half_norms[size_t(j)];
    if (sgn(pair) != 0) s = s + pair * c[size_t(j)];
  }
  return s;
}

inline GammaDatum make_gamma(const CoxeterDatum& D, const Weyl& w,
                             std::vector<GammaComponent> components) {
  require(!D.twisted && w.twist == 0, "loop-algebra data is defined for the untwisted case");
  GammaDatum g;
  g.D = &D;
  g.w = w;
  g.d = imat_order(w.m);
  g.ctx = make_cyclo_context(g.d);
  std::sort(components.begin(), components.end(),
            [](const GammaComponent& a, const GammaComponent& b) { return a.k < b.k; });
  QMat act = detail::coroot_action(D, w.m);
  for (GammaComponent& c : components) {
    require(c.k >= 1, "components need positive valuation (topological nilpotence)");
    require(int(c.vec.size()) == D.rank, "component vector has wrong dimension");
    require(c.vec.empty() || c.vec[0].ctx->conductor == g.d,
            "component lives in the wrong cyclotomic field");
    CycloElem zk = CycloElem::root_power(g.ctx.get(), c.k);
    // rebuild in the shared context
    std::vector<CycloElem> v;
    for (const CycloElem& e : c.vec) v.push_back(CycloElem(g.ctx.get(), e.c));
    for (int i = 0; i < D.rank; ++i) {
      CycloElem lhs = CycloElem::zero(g.ctx.get());
      for (int j = 0; j < D.rank; ++j)
        if (sgn(act.at(i, j)) != 0) lhs = lhs + act.at(i, j) * v[size_t(j)];
      require(lhs == zk * v[size_t(i)], "component is not in the stated eigenspace");
    }
    c.vec = std::move(v);
    g.components.push_back(std::move(c));
  }
  return g;
}

// First valuation at which each positive root sees gamma; throws when some
// root vanishes on every component (not regular semisimple).
inline std::vector<Int> root_valuation_numerators(const GammaDatum& g) {
  const CoxeterDatum& D = *g.D;
  std::vector<Int> n_alpha(size_t(D.num_positive), -1);
  for (int r = 0; r < D.num_positive; ++r) {
    for (const GammaComponent& c : g.components) {
      if (!root_value(D, r, c.vec, g.ctx.get()).is_zero()) {
        n_alpha[size_t(r)] = c.k;
        break;
      }
    }
    require(n_alpha[size_t(r)] >= 0, "element is not regular semisimple");
  }
  return n_alpha;
}

inline Rat discriminant_valuation(const GammaDatum& g) {
  Rat sum = 0;
  for (Int n : root_valuation_numerators(g)) sum += Rat(2) * Rat(long(n)) / Rat(long(g.d));
  return sum;
}

// dim = (val Delta - (rank - dim t^w)) / 2
inline Rat dim_from_gamma(const GammaDatum& g) {
  Rat v = discriminant_valuation(g);
  Rat dim = (v - Rat(g.D->rank - dim_fixed_space(g.w))) / 2;
  check(sgn(dim) >= 0, "negative fiber dimension");
  return dim;
}

// ---------------------------------------------------------------------------
// Shallow dimension of a class and its root valuation profile.
// ---------------------------------------------------------------------------

inline Int delta_C(const CoxeterDatum& D, const ClassParam& cp) {
  require(!D.twisted, "shallow dimensions are defined for the untwisted case");
  Weyl w = class_representative(D, cp);
  Int lg = l_good_of_element(w);
  Int num = lg - (D.rank - dim_fixed_space(w));
  check(num >= 0, "negative shallow dimension");
  check(num % 2 == 0, "shallow dimension is not an integer");
  return num / 2;
}

// Multiset {val(alpha(gamma)) : alpha in R} for shallow gamma: the roots
// dropped at an irredundant step of angle t get valuation t, in +- pairs.
inline std::vector<Rat> valuation_profile(const CoxeterDatum& D, const ClassParam& cp) {
  require(!D.twisted, "valuation profiles are defined for the untwisted case");
  Weyl w = class_representative(D, cp);
  EigenFiltration F = build_filtration(w, complete_sequence(w), false);
  std::vector<Rat> profile;
  Rat total = 0;
  for (int j : F.irredundant) {
    const Rat& t = F.angles[size_t(j)];
    check(t.get_num() == 1 || t.get_den() == 1, "irredundant angle is not of reciprocal form");
    size_t drop = F.hyperplanes[size_t(j)].size() - F.hyperplanes[size_t(j) + 1].size();
    for (size_t i = 0; i < 2 * drop; ++i) profile.push_back(t);
    total += Rat(2) * t * Rat(long(drop));
  }
  check(total == Rat(long(l_good_of_element(w))), "profile does not sum to the braid length");
  std::sort(profile.begin(), profile.end());
  return profile;
}

// Per-positive-root drop angle of the complete-sequence filtration.
inline std::vector<Rat> drop_angles(const EigenFiltration& F) {
  const CoxeterDatum& D = *F.D;
  std::vector<Rat> at(size_t(D.num_positive), Rat(-1));
  for (int step = 0; step < F.steps(); ++step) {
    const std::vector<int>& before = F.hyperplanes[size_t(step)];
    const std::vector<int>& after = F.hyperplanes[size_t(step) + 1];
    for (int r : before)
      if (!std::binary_search(after.begin(), after.end(), r)) at[size_t(r)] = F.angles[size_t(step)];
  }
  return at;
}

// Deterministic shallow element of a class: one generic eigencomponent per
// complete-sequence angle at the minimal admissible valuation, coefficients
// escalated until the valuation profile is met exactly.
inline GammaDatum shallow_gamma(const CoxeterDatum& D, const ClassParam& cp) {
  require(!D.twisted, "shallow elements are defined for the untwisted case");
  Weyl w = class_representative(D, cp);
  Int d = imat_order(w.m);
  CycloCtxPtr ctx = make_cyclo_context(d);
  std::vector<Rat> angles = complete_sequence(w);
  EigenFiltration F = build_filtration(w, angles, false);
  std::vector<Rat> target = drop_angles(F);
  QMat act = detail::coroot_action(D, w.m);
  std::vector<std::vector<std::vector<CycloElem>>> kernels;
  std::vector<Int> ks;
  for (const Rat& t : angles) {
    Rat kk = t * Rat(long(d));
    check(kk.get_den() == 1, "angle denominator does not divide the order");
    Int k = kk.get_num().get_si();
    ks.push_back(k);
    kernels.push_back(cyclo_eigen_kernel(ctx, act, k));
    check(!kernels.back().empty(), "eigenspace vanished on the Cartan side");
  }
  for (int esc = 0; esc < 50; ++esc) {
    std::vector<GammaComponent> comps;
    for (size_t a = 0; a < angles.size(); ++a) {
      GammaComponent c;
      c.k = ks[a];
      c.vec.assign(size_t(D.rank), CycloElem::zero(ctx.get()));
      Rat coeff = 1;
      int idx = 1;
      for (const std::vector<CycloElem>& b : kernels[a]) {
        coeff = 1;
        for (int e = 0; e < esc; ++e) coeff *= idx;
        for (int i = 0; i < D.rank; ++i) c.vec[size_t(i)] = c.vec[size_t(i)] + coeff * b[size_t(i)];
        ++idx;
      }
      comps.push_back(std::move(c));
    }
    GammaDatum g = make_gamma(D, w, std::move(comps));
    bool ok = true;
    for (int r = 0; r < D.num_positive && ok; ++r) {
      Int first = -1;
      for (const GammaComponent& c : g.components)
        if (!root_value(D, r, c.vec, g.ctx.get()).is_zero()) {
          first = c.k;
          break;
        }
      ok = first >= 0 && Rat(long(first)) == target[size_t(r)] * Rat(long(d));
    }
    if (ok) return g;
  }
  throw internal_error("no generic shallow element found after deterministic escalation");
}

// ---------------------------------------------------------------------------
// From eigencomponent data to an indecomposably-good braid representative
// whose length is the discriminant valuation.
// ---------------------------------------------------------------------------

struct GammaBraidResult {
  Weyl element;                 // the class member carrying the good triple
  std::vector<Subspace> spaces;
  std::vector<Rat> angles;
  GoodRep rep;
  Rat dim;

  GammaBraidResult(Weyl el, std::vector<Subspace> sp, std::vector<Rat> an, GoodRep r, Rat dm)
      : element(std::move(el)), spaces(std::move(sp)), angles(std::move(an)), rep(std::move(r)),
        dim(std::move(dm)) {}
};

inline GammaBraidResult gamma_to_indecomposable(const GammaDatum& g) {
  const CoxeterDatum& D = *g.D;
  const CycloContext* cx = g.ctx.get();
  std::vector<Int> n_alpha = root_valuation_numerators(g);

  // jumps of the valuation chain
  std::vector<Int> jumps;
  for (Int n : n_alpha)
    if (std::find(jumps.begin(), jumps.end(), n) == jumps.end()) jumps.push_back(n);
  std::sort(jumps.begin(), jumps.end());

  QMat rootD(D.rank, D.rank, Rat(0));  // coroot coords -> reflection coords
  for (int i = 0; i < D.rank; ++i) rootD.at(i, i) = Rat(1) / D.half_norms[size_t(i)];

  std::vector<Subspace> spaces;
  std::vector<Rat> angles;
  for (Int n : jumps) {
    const GammaComponent* comp = nullptr;
    for (const GammaComponent& c : g.components)
      if (c.k == n) comp = &c;
    check(comp != nullptr, "valuation jump without a matching component");
    // v = D^{-1} c + conj(D^{-1} c), with the (zeta - zeta^{-1}) rescue
    std::vector<CycloElem> base(size_t(D.rank), CycloElem::zero(cx));
    for (int i = 0; i < D.rank; ++i)
      base[size_t(i)] = (Rat(1) / D.half_norms[size_t(i)]) * comp->vec[size_t(i)];
    std::vector<CycloElem> v(size_t(D.rank), CycloElem::zero(cx));
    auto fill = [&]() {
      for (int i = 0; i < D.rank; ++i) v[size_t(i)] = base[size_t(i)] + conj(base[size_t(i)]);
    };
    fill();
    if (std::all_of(v.begin(), v.end(), [](const CycloElem& e) { return e.is_zero(); })) {
      CycloElem rescue =
          CycloElem::root_power(cx, comp->k) - CycloElem::root_power(cx, -comp->k);
      for (CycloElem& e : base) e = rescue * e;
      fill();
    }
    spaces.push_back(indecomposable_plane(g.w, g.ctx, v));
    angles.push_back(Rat(long(n)) / Rat(long(g.d)));
  }

  // search the conjugacy class for an element making the transported triple
  // a good position triple
  struct Entry {
    int len;
    size_t order;
    Weyl w;
    std::vector<Subspace> spaces;
  };
  auto cmp = [](const Entry& a, const Entry& b) {
    return a.len != b.len ? a.len > b.len : a.order > b.order;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
  std::unordered_set<IMat, IMatHash> seen;
  size_t counter = 0;
  queue.push({length(g.w), counter++, g.w, spaces});
  seen.insert(g.w.m);
  while (!queue.empty()) {
    Entry e = queue.top();
    queue.pop();
    std::vector<std::vector<std::vector<CycloElem>>> spans;
    for (const Subspace& S : e.spaces) spans.push_back(S.basis);
    EigenFiltration F =
        assemble_filtration(D, e.w, g.ctx, angles, std::move(spans), e.spaces);
    if (good_position_test(F)) {
      GoodRep rep = construct_from_filtration(F);
      Rat val = discriminant_valuation(g);
      check(Rat(long(braid_length(rep.braid))) == val,
            "braid length does not equal the discriminant valuation");
      Rat dim = (val - Rat(D.rank - dim_fixed_space(g.w))) / 2;
      return GammaBraidResult(e.w, std::move(e.spaces), angles, std::move(rep), std::move(dim));
    }
    for (int i = 0; i < D.rank; ++i) {
      Weyl y = conjugate_by_simple(e.w, i);
      if (!seen.insert(y.m).second) continue;
      const IMat& S = D.simple_refl[size_t(i)];
      QMat Sq = detail::action_as_qmat(S);
      std::vector<Subspace> moved = e.spaces;
      for (Subspace& sp : moved)
        for (std::vector<CycloElem>& vec : sp.basis) {
          std::vector<CycloElem> img(size_t(D.rank), CycloElem::zero(cx));
          for (int r = 0; r < D.rank; ++r)
            for (int c2 = 0; c2 < D.rank; ++c2)
              if (sgn(Sq.at(r, c2)) != 0) img[size_t(r)] = img[size_t(r)] + Sq.at(r, c2) * vec[size_t(c2)];
          vec = std::move(img);
        }
      queue.push({length(y), counter++, y, std::move(moved)});
    }
  }
  throw internal_error("no good position triple found in the class (contradicts existence)");
}

}  // namespace weylbraid
