#pragma once

#include <algorithm>
#include <vector>

#include "weylbraid/braid.hpp"
#include "weylbraid/eigen.hpp"

namespace weylbraid {

// ---------------------------------------------------------------------------
// Good braid representatives: a positive braid projecting to the element
// whose d-th power is a descending product of lifted longest parabolic
// elements. Built by recursion along the irredundant filtration steps.
// ---------------------------------------------------------------------------

struct GoodRep {
  const CoxeterDatum* D = nullptr;
  Weyl element;
  Braid braid;
  EigenFiltration filtration;
  Int d = 1;
  // (generator subset, exponent) factors of the target power identity
  std::vector<std::pair<std::vector<int>, Int>> power_factors;

  GoodRep(const CoxeterDatum& dat, Weyl el, Braid b, EigenFiltration f)
      : D(&dat), element(std::move(el)), braid(std::move(b)), filtration(std::move(f)) {}
};

namespace detail {

inline Weyl wpow(Weyl w, Int k) {
  Weyl r = Weyl::identity(*w.D);
  check(k >= 0, "wpow: negative exponent");
  while (k-- > 0) r = r * w;
  return r;
}

inline Int floor_rat(const Rat& t) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
  return q.get_si();
}

struct GoodChain {
  std::vector<Rat> angles;                 // irredundant angles t_1 <= ... <= t_l
  std::vector<std::vector<int>> supports;  // generator subsets J_1 > ... > J_l
};

// Recursive step: the current twisted element is u . (conjugation by t), with
// u in the parabolic of the previous level. Returns the pure factor list.
inline std::vector<IMat> construct_core(const CoxeterDatum& D, const GoodChain& chain, size_t k,
                                        const std::vector<int>& gens_prev, Weyl u, Weyl t) {
  if (k == chain.angles.size()) {
    check(u.m.is_identity() && u.twist == 0,
          "construction tail is not the identity (sequence not admissible?)");
    return {};
  }
  const std::vector<int>& J = chain.supports[k];
  Weyl u_min = coset_minimum(D, J, u, CosetSide::Left);
  Weyl u1 = u * inverse(u_min);
  check(in_parabolic(u1, J), "coset complement left the parabolic subgroup");
  Weyl t_next = u_min * t;
  for (int j : J) {
    check(!column_negative(t_next.m, j),
          "stripped representative is not minimal in its double coset");
    int hit = -1;
    for (int i = 0; i < D.rank && hit != -2; ++i) {
      int v = t_next.m.at(i, j);
      if (v == 0) continue;
      hit = (v == 1 && hit == -1) ? i : -2;
    }
    check(hit >= 0 && std::find(J.begin(), J.end(), hit) != J.end(),
          "conjugation does not preserve the inner generators");
  }

  std::vector<IMat> inner = construct_core(D, chain, k + 1, J, u1, t_next);
  Braid acc(D);
  acc.factors = std::move(inner);

  Rat tk = chain.angles[k];
  Int whole = floor_rat(tk);
  Rat frac = tk - Rat(long(whole));
  if (whole > 0) {
    Weyl w0 = longest_element(D, gens_prev);
    Weyl w1 = longest_element(D, J);
    Braid ins = multiply(lift(w1 * w0), lift(w0 * w1));
    acc = multiply(acc, power(ins, whole));
  }
  if (sgn(frac) != 0) {
    Int p = frac.get_num().get_si();
    Int q = frac.get_den().get_si();
    Int t_bez = 1;
    while ((p * t_bez) % q != 1 % q) ++t_bez;
    Int s = (p * t_bez - 1) / q;
    (void)s;  // the twist surplus cancels against the sigma^{-sq} correction
    Weyl big = wpow(t_next, t_bez);
    Weyl x = big * wpow(inverse(t), t_bez);
    check(x.twist == 0, "fractional tail has a leftover twist");
    check(in_parabolic(x, gens_prev), "fractional tail left the ambient parabolic");
    Braid tail(D);
    for (Int i = 0; i < p; ++i) {
      Weyl shift = wpow(t, i * t_bez);
      Weyl xi = shift * x * inverse(shift);
      check(xi.twist == 0, "conjugated tail factor has a twist");
      tail = multiply(tail, lift(xi));
    }
    acc = multiply(acc, tail);
  } else {
    check(u_min.m.is_identity(), "integer-angle step with a nontrivial coset part");
  }
  return acc.factors;
}

}  // namespace detail

inline Int good_power_exponent(const CoxeterDatum& D, const EigenFiltration& F) {
  Int d = D.delta_order;
  for (int j : F.irredundant) d = illcm(d, Int(F.angles[size_t(j)].get_den().get_si()));
  return d;
}

inline Int filtration_length(const EigenFiltration& F) {
  Rat sum = 0;
  for (int j : F.irredundant) {
    size_t drop = F.hyperplanes[size_t(j)].size() - F.hyperplanes[size_t(j) + 1].size();
    sum += Rat(2) * F.angles[size_t(j)] * Rat(long(drop));
  }
  check(sum.get_den() == 1, "braid length formula is not an integer");
  return sum.get_num().get_si();
}

inline GoodRep construct_from_filtration(const EigenFiltration& F_in) {
  EigenFiltration F = F_in;
  const CoxeterDatum& D = *F.D;
  const Weyl w = F.element;
  detail::GoodChain chain;
  for (int j : F.irredundant) {
    chain.angles.push_back(F.angles[size_t(j)]);
    chain.supports.push_back(F.supports[size_t(j)]);
    // a good position pair has standard parabolic stabilizers
    check(D.positive_roots_supported_on(F.supports[size_t(j)]).size() ==
              F.hyperplanes[size_t(j) + 1].size(),
          "filtration stabilizer is not a standard parabolic (element not in good position?)");
  }
  std::vector<int> all(size_t(D.rank));
  for (int i = 0; i < D.rank; ++i) all[size_t(i)] = i;
  std::vector<IMat> factors =
      detail::construct_core(D, chain, 0, all, w.weyl_part(), Weyl::twist_element(D, w.twist));
  Braid b(D, std::move(factors), w.twist);
  GoodRep rep(D, w, std::move(b), std::move(F));
  check(project(rep.braid) == w, "braid does not project to the element");
  check(braid_length(rep.braid) == filtration_length(rep.filtration),
        "braid length disagrees with the hyperplane-drop formula");
  rep.d = good_power_exponent(D, rep.filtration);
  Rat prev = 0;
  for (size_t j = 0; j < chain.angles.size(); ++j) {
    Rat diff = Rat(2) * Rat(long(rep.d)) * (chain.angles[j] - prev);
    check(diff.get_den() == 1, "power exponent is not integral");
    rep.power_factors.emplace_back(j == 0 ? all : chain.supports[j - 1], diff.get_num().get_si());
    prev = chain.angles[j];
  }
  return rep;
}

// Good braid representative of (w, theta) for an increasing admissible
// sequence theta; the good-position precondition is checked.
inline GoodRep construct(const Weyl& w, const std::vector<Rat>& theta) {
  for (size_t i = 1; i < theta.size(); ++i)
    require(theta[i - 1] < theta[i], "angle sequence must be strictly increasing");
  EigenFiltration F = build_filtration(w, theta, true);
  require(good_position_test(F), "the pair is not in good position");
  return construct_from_filtration(F);
}

// Same recursion driven by an explicit sequence of stable subspaces inside
// single real eigenspaces, with a weakly increasing angle list.
inline GoodRep construct_indecomposable(const Weyl& w, const std::vector<Subspace>& spaces,
                                        const std::vector<Rat>& theta) {
  const CoxeterDatum& D = *w.D;
  require(spaces.size() == theta.size(), "one angle per subspace is required");
  for (size_t i = 1; i < theta.size(); ++i)
    require(theta[i - 1] <= theta[i], "angle sequence must be weakly increasing");
  require(!spaces.empty(), "empty subspace sequence");
  CycloCtxPtr ctx = spaces[0].ctx;
  for (const Subspace& S : spaces) {
    require(S.ctx && S.ctx->conductor == ctx->conductor, "subspaces use mismatched contexts");
    require(!S.basis.empty(), "zero subspace in the sequence");
  }
  QMat A = detail::action_as_qmat(w.m);
  QMat Ainv = detail::action_as_qmat(root_inverse(D, w.m));
  for (size_t k = 0; k < spaces.size(); ++k) {
    Int a = angle_to_power(ctx, theta[k]);
    CycloElem two_cos =
        CycloElem::root_power(ctx.get(), a) + CycloElem::root_power(ctx.get(), -a);
    for (const std::vector<CycloElem>& v : spaces[k].basis) {
      require(int(v.size()) == D.rank, "subspace vector has wrong dimension");
      for (const CycloElem& e : v) require(is_real(e), "subspace vector is not real");
      for (int i = 0; i < D.rank; ++i) {
        CycloElem lhs = CycloElem::zero(ctx.get());
        for (int j = 0; j < D.rank; ++j) {
          if (sgn(A.at(i, j)) != 0) lhs = lhs + A.at(i, j) * v[size_t(j)];
          if (sgn(Ainv.at(i, j)) != 0) lhs = lhs + Ainv.at(i, j) * v[size_t(j)];
        }
        require(lhs == two_cos * v[size_t(i)],
                "subspace is not inside the stated real eigenspace");
      }
    }
  }
  std::vector<std::vector<std::vector<CycloElem>>> spans;
  std::vector<Subspace> reals;
  for (const Subspace& S : spaces) {
    spans.push_back(S.basis);
    reals.push_back(S);
  }
  EigenFiltration F = assemble_filtration(D, w, ctx, theta, std::move(spans), std::move(reals));
  require(good_position_test(F), "the subspace triple is not in good position");
  return construct_from_filtration(F);
}

// ---------------------------------------------------------------------------
// The power identity b^d = w0^{e_0} w1^{e_1} ... sigma^d, plus the half
// identity when d is even. On failure both normal forms are returned.
// ---------------------------------------------------------------------------

struct PowerCheck {
  bool ok = false;
  Braid lhs, rhs;
  PowerCheck(Braid l, Braid r) : lhs(std::move(l)), rhs(std::move(r)) { ok = equals(lhs, rhs); }
};

inline Braid good_power_rhs(const GoodRep& rep, Int d, int halves) {
  const CoxeterDatum& D = *rep.D;
  Braid rhs = braid_identity(D);
  for (const auto& [J, e] : rep.power_factors) {
    Int exp = halves == 2 ? e / 2 : e;
    rhs = multiply(rhs, power(lift(longest_element(D, J)), exp));
  }
  rhs.twist = int(((Int(rep.element.twist) * d) % D.delta_order + D.delta_order) % D.delta_order);
  return rhs;
}

inline PowerCheck verify_good_power(const GoodRep& rep) {
  return PowerCheck(power(rep.braid, rep.d), good_power_rhs(rep, rep.d, 1));
}

inline PowerCheck verify_good_half_power(const GoodRep& rep) {
  check(rep.d % 2 == 0, "half identity needs an even exponent");
  for (const auto& [J, e] : rep.power_factors) check(e % 2 == 0, "odd parabolic exponent");
  return PowerCheck(power(rep.braid, rep.d / 2), good_power_rhs(rep, rep.d / 2, 2));
}

// ---------------------------------------------------------------------------
// Combinatorial slice data from the Deligne-Garside shape of the braid.
// ---------------------------------------------------------------------------

struct SliceCombinatorics {
  std::vector<int> fixed_roots;      // R^w (all, as root indices)
  std::vector<int> inv_winv;         // Inv(w^{-1}), positive root indices
  Weyl w_prime;                      // longest element of the parabolic of R^w
  Weyl w;                            // Weyl part of the element
  std::vector<IMat> dg_factors;      // right-greedy factor list
  std::vector<std::vector<int>> Ri;  // root subsets attached to the factors, leftmost first
};

inline SliceCombinatorics slice_combinatorics(const GoodRep& rep, Int n = 1) {
  const CoxeterDatum& D = *rep.D;
  const Weyl& el = rep.element;
  SliceCombinatorics out;
  out.w = el.weyl_part();
  for (int r = 0; r < 2 * D.num_positive; ++r)
    if (apply_to_root(el, r) == r) out.fixed_roots.push_back(r);
  out.inv_winv = inversion_set(inverse(out.w));
  check(out.inv_winv == inversion_set(inverse(el)),
        "inversion sets of the element and its Weyl part differ");
  // parabolic carried by the fixed roots
  std::vector<int> J;
  for (int i = 0; i < D.rank; ++i) {
    std::vector<int> alpha(size_t(D.rank), 0);
    alpha[size_t(i)] = 1;
    int idx = D.root_index(alpha);
    if (std::find(out.fixed_roots.begin(), out.fixed_roots.end(), idx) != out.fixed_roots.end())
      J.push_back(i);
  }
  check(2 * D.positive_roots_supported_on(J).size() == out.fixed_roots.size(),
        "fixed roots do not form a standard parabolic subsystem");
  out.w_prime = longest_element(D, J);
  check(length(out.w_prime * out.w) == length(out.w_prime) + length(out.w),
        "w' w is not a reduced product");
  out.dg_factors = right_dg_form(rep.braid);
  // expected shape: (w')^{2n-1} then w'w, degenerating to a single factor
  std::vector<IMat> expected;
  IMat wp = out.w_prime.m, wpw = (out.w_prime * out.w).m;
  if (wp.is_identity()) {
    if (!wpw.is_identity()) expected.push_back(wpw);
  } else {
    for (Int i = 0; i < 2 * n - 1; ++i) expected.push_back(wp);
    expected.push_back(wpw);
  }
  check(out.dg_factors == expected, "Deligne-Garside shape assertion failed");
  // R_m, ..., R_1 with R_k = (f_1 ... f_{k-1})(Inv(f_k^{-1}))
  Weyl prefix = Weyl::identity(D);
  for (const IMat& f : out.dg_factors) {
    Weyl fe(&D, f, 0);
    std::vector<int> ri;
    for (int r : inversion_set(inverse(fe))) ri.push_back(apply_to_root(prefix, r));
    std::sort(ri.begin(), ri.end());
    out.Ri.push_back(ri);
    prefix = prefix * fe;
  }
  return out;
}

// Convexity of (R^w)^+ u Inv(w^{-1}) and (R^w)^- u Inv(w^{-1}) as subsets of
// the root system: closed under positive integral combinations that are roots.
inline bool convexity_check(const Weyl& el) {
  const CoxeterDatum& D = *el.D;
  Weyl w = el.weyl_part();
  std::vector<int> fixed_pos, fixed_neg;
  for (int r = 0; r < 2 * D.num_positive; ++r)
    if (apply_to_root(el, r) == r) (D.root_is_positive(r) ? fixed_pos : fixed_neg).push_back(r);
  std::vector<int> inv = inversion_set(inverse(w));
  auto convex = [&](std::vector<int> set) {
    std::sort(set.begin(), set.end());
    for (int a : set)
      for (int b : set) {
        if (a == b) continue;
        for (int mM = 1; mM <= 4; ++mM)
          for (int nN = 1; nN <= 4; ++nN) {
            std::vector<int> comb(size_t(D.rank), 0);
            for (int i = 0; i < D.rank; ++i)
              comb[size_t(i)] =
                  mM * D.roots[size_t(a)][size_t(i)] + nN * D.roots[size_t(b)][size_t(i)];
            int idx = D.root_index(comb);
            if (idx >= 0 && !std::binary_search(set.begin(), set.end(), idx)) return false;
          }
      }
    return true;
  };
  std::vector<int> plus = fixed_pos, minus = fixed_neg;
  for (int r : inv) {
    plus.push_back(r);
    minus.push_back(r);
  }
  return convex(plus) && convex(minus);
}

}  // namespace weylbraid
