#pragma once

#include <map>
#include <vector>

#include "weylbraid/eigen.hpp"
#include "weylbraid/rootsys.hpp"

namespace weylbraid {

// ---------------------------------------------------------------------------
// Unipotent orbit parameters for classical groups: a partition, and in
// characteristic 2 a {0,1}-decoration on certain part sizes (even sizes for
// B/C/D, odd sizes for the twisted A component). Very-even splits in type D
// are collapsed to a single parameter.
// ---------------------------------------------------------------------------

struct OrbitParam {
  char family = 'A';
  int rank = 0;
  bool twisted = false;  // component away from the identity (2A, 2D)
  bool char2 = false;
  Partition nu;
  std::map<int, int> eps;  // decorated part sizes -> {0,1}

  bool operator==(const OrbitParam& o) const {
    return family == o.family && rank == o.rank && twisted == o.twisted && char2 == o.char2 &&
           nu == o.nu && eps == o.eps;
  }
  bool operator<(const OrbitParam& o) const {
    return std::tie(family, rank, twisted, char2, nu, eps) <
           std::tie(o.family, o.rank, o.twisted, o.char2, o.nu, o.eps);
  }
};

namespace detail {

inline bool in_parity_set(const Partition& p, int parity /* 0: even parts have even mult */) {
  for (int k = 1; k <= (p.empty() ? 0 : p[0]); ++k) {
    bool constrained = (parity == 0) ? (k % 2 == 0) : (k % 2 == 1);
    if (constrained && multiplicity(p, k) % 2 != 0) return false;
  }
  return true;
}

// Decorated sizes for char 2: even sizes for B/C/D, odd sizes for twisted A.
inline std::vector<int> decorated_sizes(const Partition& nu, bool odd_sizes) {
  std::vector<int> out;
  for (size_t i = 0; i < nu.size(); ++i) {
    if (i > 0 && nu[i] == nu[i - 1]) continue;
    if ((nu[i] % 2 == 1) == odd_sizes) out.push_back(nu[i]);
  }
  return out;
}

inline void enumerate_decorations(const Partition& nu, bool odd_sizes,
                                  std::vector<std::map<int, int>>& out) {
  std::vector<int> sizes = decorated_sizes(nu, odd_sizes);
  std::map<int, int> eps;
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == sizes.size()) {
      out.push_back(eps);
      return;
    }
    int s = sizes[i];
    if (multiplicity(nu, s) % 2 == 1) {
      eps[s] = 1;  // forced
      self(self, i + 1);
    } else {
      for (int v : {1, 0}) {
        eps[s] = v;
        self(self, i + 1);
      }
    }
    eps.erase(s);
  };
  rec(rec, 0);
}

}  // namespace detail

// P_eps(n) membership: m(k) even whenever (-1)^k = eps.
inline bool in_P_plus(const Partition& p) { return detail::in_parity_set(p, 0); }
inline bool in_P_minus(const Partition& p) { return detail::in_parity_set(p, 1); }

inline std::vector<OrbitParam> enumerate_orbits(char family, int rank, bool char2, bool twisted) {
  std::vector<OrbitParam> out;
  auto push = [&](Partition nu, std::map<int, int> eps) {
    OrbitParam op;
    op.family = family;
    op.rank = rank;
    op.twisted = twisted;
    op.char2 = char2;
    op.nu = std::move(nu);
    op.eps = std::move(eps);
    out.push_back(std::move(op));
  };
  if (family == 'A') {
    if (!twisted) {
      for (Partition& p : all_partitions(rank + 1)) push(std::move(p), {});
      return out;
    }
    require(char2, "the twisted A component has unipotent elements only in characteristic 2");
    for (const Partition& p : all_partitions(rank + 1)) {
      if (!in_P_plus(p)) continue;
      std::vector<std::map<int, int>> decos;
      detail::enumerate_decorations(p, /*odd_sizes=*/true, decos);
      for (auto& e : decos) push(p, std::move(e));
    }
    return out;
  }
  if (family == 'B' || family == 'C' || family == 'D') {
    require(family == 'D' || !twisted, "types B and C have no nontrivial component");
    if (!char2) {
      require(!twisted, "the twisted D component has unipotent elements only in characteristic 2");
      int boxes = family == 'B' ? 2 * rank + 1 : 2 * rank;
      for (const Partition& p : all_partitions(boxes)) {
        bool ok = (family == 'C') ? in_P_minus(p) : in_P_plus(p);
        if (ok) push(p, {});
      }
      return out;
    }
    for (const Partition& p : all_partitions(2 * rank)) {
      if (!in_P_minus(p)) continue;
      if (family == 'D') {
        bool odd_parts = int(p.size()) % 2 == 1;
        if (odd_parts != twisted) continue;
      }
      std::vector<std::map<int, int>> decos;
      detail::enumerate_decorations(p, /*odd_sizes=*/false, decos);
      for (auto& e : decos) push(p, std::move(e));
    }
    return out;
  }
  throw usage_error("orbit enumeration has no partition model for exceptional types");
}

// ---------------------------------------------------------------------------
// The surjection from conjugacy classes to unipotent orbits, type by type.
// ---------------------------------------------------------------------------

namespace detail {

// Correction map used by the B/D rules away from characteristic 2.
inline std::vector<int> psi_corrections(const Partition& lambda) {
  int a = int(lambda.size());
  std::vector<int> psi(size_t(a), 0);
  auto at = [&](int i) { return (i >= 1 && i <= a) ? lambda[size_t(i - 1)] : 0; };
  for (int i = 1; i <= a; ++i) {
    if (i % 2 == 1 && at(i - 1) != at(i))
      psi[size_t(i - 1)] = 1;
    else if (i % 2 == 0 && at(i + 1) != at(i))
      psi[size_t(i - 1)] = -1;
  }
  return psi;
}

inline Partition sorted_merge(Partition a, const Partition& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.rbegin(), a.rend());
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline Partition doubled(const Partition& p) {
  Partition d;
  for (int x : p) d.push_back(2 * x);
  return d;
}

inline Partition paired(const Partition& p) {
  Partition d;
  for (int x : p) {
    d.push_back(x);
    d.push_back(x);
  }
  return d;
}

}  // namespace detail

inline OrbitParam lusztig_phi(const CoxeterDatum& D, const ClassParam& cp, bool char2) {
  OrbitParam op;
  op.family = D.family;
  op.rank = D.rank;
  op.twisted = D.twisted;
  op.char2 = char2;
  switch (cp.kind) {
    case ClassParam::Kind::TypeA:
      op.nu = cp.lambda;
      return op;
    case ClassParam::Kind::TwistedA: {
      require(char2, "the twisted A component is empty away from characteristic 2");
      // m_nu(k) = m(k) + 2 m(2k) for odd k, 2 m(2k) for even k
      int top = cp.lambda.empty() ? 0 : 2 * cp.lambda[0];
      Partition nu;
      for (int k = top; k >= 1; --k) {
        int m = (k % 2 == 1 ? multiplicity(cp.lambda, k) : 0) + 2 * multiplicity(cp.lambda, 2 * k);
        for (int i = 0; i < m; ++i) nu.push_back(k);
      }
      for (int k : detail::decorated_sizes(nu, true)) {
        if (multiplicity(cp.lambda, k) != 0)
          op.eps[k] = 1;
        else {
          check(multiplicity(cp.lambda, 2 * k) != 0, "decoration rule hit an absent size");
          op.eps[k] = 0;
        }
      }
      op.nu = std::move(nu);
      check(in_P_plus(op.nu), "image partition leaves its parity set");
      return op;
    }
    case ClassParam::Kind::BCD: {
      const Partition& l = cp.lambda;
      const Partition& m = cp.mu;
      if (char2 || D.family == 'C') {
        op.nu = detail::sorted_merge(detail::doubled(l), detail::paired(m));
        if (char2) {
          for (int s : detail::decorated_sizes(op.nu, false))
            op.eps[s] = multiplicity(l, s / 2) != 0 ? 1 : 0;
          for (int s : detail::decorated_sizes(op.nu, false))
            if (multiplicity(op.nu, s) % 2 == 1)
              check(op.eps[s] == 1, "forced decoration violated");
        } else {
          check(in_P_minus(op.nu), "image partition leaves its parity set");
        }
        return op;
      }
      // characteristic != 2, types B and D via the correction map
      std::vector<int> psi = detail::psi_corrections(l);
      Partition lt;
      for (size_t i = 0; i < l.size(); ++i) lt.push_back(2 * l[i] + psi[i]);
      if (D.family == 'B' && l.size() % 2 == 0) lt.push_back(1);
      op.nu = detail::sorted_merge(lt, detail::paired(m));
      int boxes = D.family == 'B' ? 2 * D.rank + 1 : 2 * D.rank;
      check(partition_sum(op.nu) == boxes, "image partition has the wrong size");
      check(in_P_plus(op.nu), "image partition leaves its parity set");
      return op;
    }
    case ClassParam::Kind::Exceptional:
      throw usage_error("no partition model for exceptional orbits");
  }
  throw usage_error("bad class parameter");
}

// Most elliptic preimage: the unique class in the fiber minimizing the fixed
// space dimension. Split pairs of type D are collapsed before the uniqueness
// assertion.
inline ClassParam lusztig_psi(const CoxeterDatum& D, const OrbitParam& op) {
  require(op.family == D.family && op.rank == D.rank && op.twisted == D.twisted,
          "orbit does not match the datum");
  std::vector<ClassParam> classes = enumerate_classes(D);
  std::vector<std::pair<ClassParam, int>> fiber;
  for (const ClassParam& cp : classes) {
    OrbitParam img = lusztig_phi(D, cp, op.char2);
    if (img == op) fiber.emplace_back(cp, dim_fixed_space(class_representative(D, cp)));
  }
  check(!fiber.empty(), "empty preimage under the class-to-orbit map");
  int best = fiber[0].second;
  for (auto& [cp, t] : fiber) best = std::min(best, t);
  std::vector<ClassParam> minimizers;
  for (auto& [cp, t] : fiber)
    if (t == best) minimizers.push_back(cp);
  if (minimizers.size() > 1) {
    // only a split pair may tie
    check(minimizers.size() == 2, "non-unique most elliptic class");
    ClassParam a = minimizers[0], b = minimizers[1];
    a.marker = b.marker = 0;
    check(a == b && minimizers[0].marker != minimizers[1].marker,
          "non-unique most elliptic class");
  }
  ClassParam res = minimizers[0];

  // Cross-check of the direct reconstruction rules for the twisted A
  // component: odd sizes of lambda come from decorated sizes with value 1,
  // doubled sizes from the remaining multiplicities, halved.
  if (op.family == 'A' && op.twisted && op.char2) {
    Partition lambda;
    int top = op.nu.empty() ? 0 : 2 * op.nu[0];
    for (int j = top; j >= 1; --j) {
      int m = 0;
      if (j % 2 == 1) {
        auto it = op.eps.find(j);
        if (it != op.eps.end() && it->second == 1) m = multiplicity(op.nu, j);
      } else {
        int k = j / 2;
        if (k % 2 == 0) {
          m = multiplicity(op.nu, k) / 2;
        } else {
          auto it = op.eps.find(k);
          if (it != op.eps.end() && it->second == 0) m = multiplicity(op.nu, k) / 2;
        }
      }
      for (int i = 0; i < m; ++i) lambda.push_back(j);
    }
    check(lambda == res.lambda, "direct reconstruction disagrees with the minimizer");
  }
  return res;
}

// ---------------------------------------------------------------------------
// Codimension of a unipotent orbit inside the full group.
// ---------------------------------------------------------------------------

// chi(s) = max{0, min{n - s + t, t}} with t depending on type and V-blocks.
inline Int chi(int s, int n, char family, bool has_V_block) {
  bool typeD = family == 'D';
  Int t;
  if (has_V_block)
    t = typeD ? (s + 2) / 2 : s / 2;
  else
    t = typeD ? (s + 1) / 2 : (s - 1) / 2;
  return std::max(Int(0), std::min(Int(n - s) + t, t));
}

namespace detail {

inline Int codim_typeA(const Partition& nu) {
  // sum over distinct sizes r_j (descending) with multiplicities m_j
  Int total = 0, before = 0;
  for (size_t i = 0; i < nu.size();) {
    Int r = nu[i];
    Int m = multiplicity(nu, int(r));
    total += m * r * (m + 2 * before);
    before += m;
    i += size_t(m);
  }
  return total - 1;
}

// One stripping step of the characteristic-2 recursion for B/C/D.
inline Int codim_char2_BCD(const Partition& nu, const std::map<int, int>& eps, char family) {
  if (nu.empty()) return 0;
  check(partition_sum(nu) % 2 == 0, "partition sum must be even");
  Int n = partition_sum(nu) / 2;
  Int nu1 = nu[0];
  Int m1 = multiplicity(nu, int(nu1));
  bool typeD = family == 'D';
  Int delta;
  if (nu1 % 2 == 1) {
    delta = 2 * m1 * n - m1 * m1 * nu1 / 2 + (typeD ? -m1 / 2 : m1 / 2);
  } else {
    auto it = eps.find(int(nu1));
    check(it != eps.end(), "missing decoration on an even size");
    if (it->second == 1)
      delta = 2 * m1 * n - m1 * m1 * nu1 / 2 + (typeD ? -m1 : 0);
    else
      delta = 2 * m1 * n - m1 * m1 * nu1 / 2 + (typeD ? 0 : m1);
  }
  Partition rest(nu.begin() + m1, nu.end());
  std::map<int, int> eps_rest = eps;
  eps_rest.erase(int(nu1));
  return delta + codim_char2_BCD(rest, eps_rest, family);
}

// One stripping step for the twisted A component in characteristic 2.
inline Int codim_char2_twistedA(const Partition& nu, const std::map<int, int>& eps) {
  if (nu.empty()) return 0;
  Int n = partition_sum(nu) - 1;
  Int nu1 = nu[0];
  Int m1 = multiplicity(nu, int(nu1));
  Int delta;
  if (nu1 % 2 == 0) {
    delta = m1 * n - m1 * m1 * nu1 / 2 + m1;
  } else {
    auto it = eps.find(int(nu1));
    check(it != eps.end(), "missing decoration on an odd size");
    Int base = m1 * n * 2 - m1 * m1 * nu1 + m1;  // doubled to keep integrality visible
    check(base % 2 == 0, "half-integer stripping step");
    delta = base / 2;
    if (it->second == 0) delta += m1;
  }
  Partition rest(nu.begin() + m1, nu.end());
  std::map<int, int> eps_rest = eps;
  eps_rest.erase(int(nu1));
  return delta + codim_char2_twistedA(rest, eps_rest);
}

// Centralizer-dimension formulas through the dual partition (standard facts,
// used as the cross-check route away from characteristic 2).
inline Int codim_classical_char0(const Partition& nu, char family) {
  Partition dual = dual_partition(nu);
  Int sq = 0;
  for (int x : dual) sq += Int(x) * x;
  Int odd = 0;
  for (int x : nu)
    if (x % 2 == 1) ++odd;
  if (family == 'C') {
    check((sq + odd) % 2 == 0, "parity failure in the centralizer formula");
    return (sq + odd) / 2;
  }
  check((sq - odd) % 2 == 0, "parity failure in the centralizer formula");
  return (sq - odd) / 2;
}

}  // namespace detail

inline Int codim(const OrbitParam& op) {
  if (op.family == 'A' && !op.twisted) return detail::codim_typeA(op.nu);
  if (op.family == 'A' && op.twisted) {
    require(op.char2, "twisted A orbits exist only in characteristic 2");
    return detail::codim_char2_twistedA(op.nu, op.eps);
  }
  if (op.char2) return detail::codim_char2_BCD(op.nu, op.eps, op.family);
  return detail::codim_classical_char0(op.nu, op.family);
}

inline Int group_dimension(char family, int rank, bool /*twisted*/) {
  switch (family) {
    case 'A':
      return Int(rank) * rank + 2 * rank;
    case 'B':
    case 'C':
      return 2 * Int(rank) * rank + rank;
    case 'D':
      return 2 * Int(rank) * rank - rank;
    default:
      throw usage_error("no dimension table for this family");
  }
}

}  // namespace weylbraid
