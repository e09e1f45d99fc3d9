#pragma once

#include <string>

#include <json.hpp>

#include "weylbraid/springer.hpp"

namespace weylbraid {

using json = nlohmann::json;

inline json partition_to_json(const Partition& p) {
  json a = json::array();
  for (int x : p) a.push_back(x);
  return a;
}

inline Partition partition_from_json(const json& a) {
  Partition p;
  for (const auto& x : a) p.push_back(x.get<int>());
  require(std::is_sorted(p.rbegin(), p.rend()), "partition parts must be weakly decreasing");
  return p;
}

inline json class_to_json(const ClassParam& cp) {
  json j;
  switch (cp.kind) {
    case ClassParam::Kind::TypeA:
      j["type"] = "A";
      j["lambda"] = partition_to_json(cp.lambda);
      break;
    case ClassParam::Kind::TwistedA:
      j["type"] = "2A";
      j["lambda"] = partition_to_json(cp.lambda);
      break;
    case ClassParam::Kind::BCD:
      j["type"] = "BCD";
      j["lambda"] = partition_to_json(cp.lambda);
      j["mu"] = partition_to_json(cp.mu);
      j["marker"] = cp.marker == 0 ? json(nullptr) : json(cp.marker == 1 ? "I" : "II");
      break;
    case ClassParam::Kind::Exceptional: {
      j["type"] = "EXC";
      json w = json::array();
      for (int i : cp.word) w.push_back(i + 1);
      j["word"] = w;
      break;
    }
  }
  return j;
}

// Braids are serialized through the right-greedy factorization: one reduced
// word per factor (1-based generators), plus the twist exponent.
inline json braid_to_json(const Braid& b) {
  json factors = json::array();
  for (const auto& word : factor_words(right_dg_form(b), *b.D)) {
    json f = json::array();
    for (int i : word) f.push_back(i + 1);
    factors.push_back(f);
  }
  return json{{"factors", factors}, {"twist", b.twist}};
}

inline json goodrep_to_json(const GoodRep& rep) {
  json j;
  json ew = json::array();
  for (int i : reduced_word(rep.element)) ew.push_back(i + 1);
  j["element"] = ew;
  j["element_twist"] = rep.element.twist;
  j["braid"] = braid_to_json(rep.braid);
  json bw = json::array();
  for (int i : braid_word(rep.braid)) bw.push_back(i + 1);
  j["braid_word"] = bw;
  j["length"] = braid_length(rep.braid);
  j["d"] = rep.d;
  json pf = json::array();
  for (const auto& [J, e] : rep.power_factors) {
    json gens = json::array();
    for (int g : J) gens.push_back(g + 1);
    pf.push_back(json{{"generators", gens}, {"exponent", e}});
  }
  j["power_factors"] = pf;
  json ang = json::array();
  for (const Rat& t : rep.filtration.angles) ang.push_back(t.get_str());
  j["angles"] = ang;
  return j;
}

inline json orbit_to_json(const OrbitParam& op) {
  json eps = json::object();
  for (const auto& [s, v] : op.eps) eps[std::to_string(s)] = v;
  return json{{"type", std::string(op.twisted ? "2" : "") + op.family},
              {"rank", op.rank},
              {"char", op.char2 ? 2 : 0},
              {"component", op.twisted ? "D" : "G"},
              {"nu", partition_to_json(op.nu)},
              {"eps", eps},
              {"codim", codim(op)}};
}

// --class specifications: "3,1" / "2,1|1" (optional I or II suffix) /
// keywords identity, coxeter, pos2 / "w[1,2,1]" for explicit words.
inline ClassParam class_from_spec(const CoxeterDatum& D, std::string spec) {
  ClassParam cp;
  auto parse_parts = [](const std::string& s) {
    Partition p;
    size_t at = 0;
    while (at < s.size()) {
      size_t comma = s.find(',', at);
      std::string tok = s.substr(at, comma == std::string::npos ? comma : comma - at);
      if (!tok.empty()) p.push_back(std::stoi(tok));
      if (comma == std::string::npos) break;
      at = comma + 1;
    }
    require(std::is_sorted(p.rbegin(), p.rend()), "partition parts must be weakly decreasing");
    return p;
  };
  bool classical = D.family == 'A' || D.family == 'B' || D.family == 'C' || D.family == 'D';
  if (spec == "identity") {
    require(!D.twisted, "the identity class lives in the untwisted component");
    if (D.family == 'A') {
      cp.kind = ClassParam::Kind::TypeA;
      cp.lambda.assign(size_t(D.rank) + 1, 1);
    } else if (classical) {
      cp.kind = ClassParam::Kind::BCD;
      cp.mu.assign(size_t(D.rank), 1);
    } else {
      cp.kind = ClassParam::Kind::Exceptional;
    }
    return cp;
  }
  if (spec == "coxeter") {
    require(!D.twisted, "use an explicit word for twisted Coxeter classes");
    if (D.family == 'A') {
      cp.kind = ClassParam::Kind::TypeA;
      cp.lambda = {D.rank + 1};
    } else if (D.family == 'B' || D.family == 'C') {
      cp.kind = ClassParam::Kind::BCD;
      cp.lambda = {D.rank};
    } else if (D.family == 'D') {
      cp.kind = ClassParam::Kind::BCD;
      cp.lambda = {D.rank - 1, 1};
    } else {
      cp.kind = ClassParam::Kind::Exceptional;
      for (int i = 0; i < D.rank; ++i) cp.word.push_back(i);
    }
    return cp;
  }
  if (spec == "pos2") {
    require(classical && D.family != 'A', "pos2 names a signed-permutation class");
    cp.kind = ClassParam::Kind::BCD;
    cp.mu = {2};
    for (int i = 0; i < D.rank - 2; ++i) cp.mu.push_back(1);
    return cp;
  }
  if (spec.rfind("w[", 0) == 0 && spec.back() == ']') {
    cp.kind = ClassParam::Kind::Exceptional;
    for (int i : parse_parts(spec.substr(2, spec.size() - 3))) {
      require(i >= 1 && i <= D.rank, "generator index out of range in word");
      cp.word.push_back(i - 1);
    }
    return cp;
  }
  int marker = 0;
  if (spec.size() >= 2 && spec.substr(spec.size() - 2) == "II") {
    marker = 2;
    spec = spec.substr(0, spec.size() - 2);
  } else if (!spec.empty() && spec.back() == 'I') {
    marker = 1;
    spec = spec.substr(0, spec.size() - 1);
  }
  size_t bar = spec.find('|');
  if (bar == std::string::npos) {
    require(D.family == 'A', "bipartition spec needed for types B, C, D");
    cp.kind = D.twisted ? ClassParam::Kind::TwistedA : ClassParam::Kind::TypeA;
    cp.lambda = parse_parts(spec);
    require(partition_sum(cp.lambda) == D.rank + 1, "partition must have size rank+1");
    return cp;
  }
  require(D.family == 'B' || D.family == 'C' || D.family == 'D',
          "bipartitions parametrize types B, C, D");
  cp.kind = ClassParam::Kind::BCD;
  cp.lambda = parse_parts(spec.substr(0, bar));
  cp.mu = parse_parts(spec.substr(bar + 1));
  cp.marker = marker;
  require(partition_sum(cp.lambda) + partition_sum(cp.mu) == D.rank,
          "bipartition must have total size equal to the rank");
  return cp;
}

// ---------------------------------------------------------------------------
// Rational polynomials in z (meaning the root of unity of the ambient
// context), e.g. "1-2z+3/2z^3".
// ---------------------------------------------------------------------------

inline CycloElem parse_poly_in_z(const CycloCtxPtr& ctx, const std::string& s) {
  CycloElem out = CycloElem::zero(ctx.get());
  size_t i = 0;
  auto skip_ws = [&]() {
    while (i < s.size() && std::isspace(s[i])) ++i;
  };
  skip_ws();
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    skip_ws();
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else {
      require(first, "expected + or - between terms");
    }
    first = false;
    skip_ws();
    std::string num;
    while (i < s.size() && (std::isdigit(s[i]) || s[i] == '/')) num += s[i++];
    Rat coeff = num.empty() ? Rat(1) : Rat(num);
    coeff.canonicalize();
    Int expo = 0;
    skip_ws();
    if (i < s.size() && (s[i] == 'z' || s[i] == 'Z')) {
      ++i;
      expo = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string e;
        while (i < s.size() && std::isdigit(s[i])) e += s[i++];
        require(!e.empty(), "missing exponent after ^");
        expo = std::stol(e);
      }
    }
    CycloElem term = coeff * CycloElem::root_power(ctx.get(), expo);
    out = sign > 0 ? out + term : out - term;
    skip_ws();
  }
  return out;
}

inline GammaDatum gamma_from_json(const CoxeterDatum& D, const json& j) {
  require(j.contains("class") && j.contains("components"), "gamma file needs class and components");
  ClassParam cp = class_from_spec(D, j.at("class").get<std::string>());
  Weyl w = class_representative(D, cp);
  Int d = imat_order(w.m);
  CycloCtxPtr ctx = make_cyclo_context(d);
  std::vector<GammaComponent> comps;
  for (const auto& cj : j.at("components")) {
    GammaComponent c;
    c.k = cj.at("k").get<long>();
    for (const auto& entry : cj.at("vector"))
      c.vec.push_back(parse_poly_in_z(ctx, entry.get<std::string>()));
    comps.push_back(std::move(c));
  }
  return make_gamma(D, w, std::move(comps));
}

}  // namespace weylbraid
