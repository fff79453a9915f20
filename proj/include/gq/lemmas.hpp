#pragma once

// Structural claims about E, P and S_{U,W}, checked against the groups
// computed from their generators.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gq/constructions.hpp"
#include "gq/invariants.hpp"

namespace gq {

struct Claim {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ClaimReport {
  std::string group;
  std::uint64_t q = 0;
  GroupInvariantReport invariants;
  std::vector<Claim> claims;

  bool ok() const {
    for (const auto& c : claims)
      if (!c.ok) return false;
    return true;
  }
};

namespace detail {

using MatSet = std::set<Matrix>;

inline MatSet as_set(const ConcreteGroup<SemilinearMap>& C, const Subgroup& H) {
  MatSet s;
  for (Index i : H.elements) s.insert(C.elements[i].matrix());
  return s;
}

// Subgroup of GL(4,q) generated by the given matrices.
inline MatSet generated(const FieldSpec& F, const std::vector<Matrix>& gens) {
  std::vector<SemilinearMap> g;
  for (const auto& m : gens) g.emplace_back(m, 0);
  MatSet s;
  for (const auto& x : close_group(SemilinearMap::identity(F, 4), g, 1 << 22, 0).elements) s.insert(x.matrix());
  return s;
}

inline MatSet z_set(const FieldSpec& F) {
  MatSet s;
  for (Elt a = 0; a < F.q(); ++a) s.insert(elem_t(F, a, 0, 0));
  return s;
}

inline MatSet r_set(const FieldSpec& F) {
  MatSet s;
  for (Elt a = 0; a < F.q(); ++a)
    for (Elt b = 0; b < F.q(); ++b) s.insert(elem_t(F, a, b, 0));
  return s;
}

inline bool subset(const MatSet& a, const MatSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

inline std::string sizes(std::size_t got, std::size_t want) {
  return "got order " + std::to_string(got) + ", expected " + std::to_string(want);
}

inline std::uint64_t expected_exponent(const FieldSpec& F) {
  return F.p() > 3 ? F.p() : static_cast<std::uint64_t>(F.p()) * F.p();
}

struct Computed {
  ConcreteGroup<SemilinearMap> C;
  GroupStructure st;
  GroupInvariantReport inv;
  MatSet centre, derived, frattini;
};

inline Computed compute(const ConstructedGroup& g) {
  Computed c{enumerate_group(g), {}, {}, {}, {}, {}};
  c.inv = invariant_report(c.C.group, &c.st);
  c.centre = as_set(c.C, c.st.centre);
  c.derived = as_set(c.C, c.st.derived);
  if (c.st.frattini) c.frattini = as_set(c.C, *c.st.frattini);
  return c;
}

inline Claim claim(std::string name, bool ok, std::string detail = {}) { return {std::move(name), ok, std::move(detail)}; }

}  // namespace detail

inline ClaimReport check_E(const FieldSpec& F) {
  using namespace detail;
  const auto c = compute(build_E(F));
  ClaimReport r{"E", F.q(), c.inv, {}};
  const std::uint64_t q = F.q(), p = F.p();
  r.claims.push_back(claim("order q^3", c.inv.order == q * q * q, sizes(c.inv.order, q * q * q)));
  r.claims.push_back(claim("exponent p", c.inv.exponent == p, "exponent " + std::to_string(c.inv.exponent)));
  if (p == 2) {
    r.claims.push_back(claim("elementary abelian", c.inv.is_abelian && c.inv.exponent == 2));
  } else {
    const auto Z = z_set(F);
    r.claims.push_back(claim("Z(E) = {t_{a,0,0}}", c.centre == Z, sizes(c.centre.size(), Z.size())));
    r.claims.push_back(claim("E' = Z(E)", c.derived == Z, sizes(c.derived.size(), Z.size())));
    r.claims.push_back(claim("Phi(E) = Z(E)", c.frattini == Z, sizes(c.frattini.size(), Z.size())));
    r.claims.push_back(claim("special", c.inv.is_special));
    if (F.f() == 1) r.claims.push_back(claim("extraspecial", c.inv.is_extraspecial));
  }
  return r;
}

inline ClaimReport check_P(const FieldSpec& F) {
  using namespace detail;
  const auto c = compute(build_P(F));
  ClaimReport r{"P", F.q(), c.inv, {}};
  const std::uint64_t q = F.q(), p = F.p();
  const auto Z = z_set(F), R = r_set(F);
  r.claims.push_back(claim("order q^3", c.inv.order == q * q * q, sizes(c.inv.order, q * q * q)));
  r.claims.push_back(claim("P/R elementary abelian", subset(c.frattini, R) && !c.frattini.empty()));
  r.claims.push_back(claim("exponent p (p > 3) or p^2 (p = 2, 3)", c.inv.exponent == expected_exponent(F),
                           "exponent " + std::to_string(c.inv.exponent)));
  if (q == 2) {
    const std::map<std::uint64_t, std::uint64_t> c4c2{{1, 1}, {2, 3}, {4, 4}};
    r.claims.push_back(claim("P = C4 x C2", c.inv.is_abelian && c.inv.element_order_histogram == c4c2));
    return r;
  }
  r.claims.push_back(claim("nonabelian", !c.inv.is_abelian));
  if (p != 2) {
    r.claims.push_back(claim("Z(P) = Z(E)", c.centre == Z, sizes(c.centre.size(), Z.size())));
    r.claims.push_back(claim("P' = Z(E)", c.derived == Z, sizes(c.derived.size(), Z.size())));
    r.claims.push_back(claim("Phi(P) = Z(E)", c.frattini == Z, sizes(c.frattini.size(), Z.size())));
  } else {
    r.claims.push_back(claim("Z(P) = R", c.centre == R, sizes(c.centre.size(), R.size())));
    const MatSet want = q == 4 ? MatSet{elem_t(F, 0, 0, 0), elem_t(F, F.one(), 0, 0)} : Z;
    r.claims.push_back(claim(q == 4 ? "P' = {1, t_{1,0,0}}" : "P' = Z", c.derived == want,
                             sizes(c.derived.size(), want.size())));
    r.claims.push_back(claim("P' < Z(P)", subset(c.derived, c.centre) && c.derived.size() < c.centre.size()));
  }
  return r;
}

/// Expected derived subgroup of S_{U,W}, from its listed generators.
inline std::set<Matrix> expected_S_derived(const FieldSpec& F, const SubspaceDecomposition& d) {
  using namespace detail;
  // all elements of W
  std::vector<Elt> W{0};
  for (Elt w : d.W) {
    const std::size_t n = W.size();
    for (int k = 1; k < F.p(); ++k)
      for (std::size_t i = 0; i < n; ++i) W.push_back(F.add(W[i], F.mul(F.from_int(k), w)));
  }
  const int k = static_cast<int>(d.U.size());
  std::vector<Matrix> gens;
  if (F.p() != 2) {
    for (Elt a = 0; a < F.q(); ++a) gens.push_back(elem_t(F, a, 0, 0));
    for (Elt al : d.U)
      for (Elt w : W) gens.push_back(elem_t(F, 0, F.mul(al, w), 0));
    return generated(F, gens);
  }
  if (k >= 3) {
    for (Elt a = 0; a < F.q(); ++a) gens.push_back(elem_t(F, a, 0, 0));
  } else if (k == 2) {
    // [theta_a1, theta_a2] = t_{a1 a2 (a1 + a2), 0, 0}; this is t_{1,0,0} only for normalised bases
    gens.push_back(elem_t(F, F.mul(F.mul(d.U[0], d.U[1]), F.add(d.U[0], d.U[1])), 0, 0));
  }
  // one generator per k-tuple (w_1, ..., w_k) of elements of W
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    Elt a = 0, b = 0;
    for (int i = 0; i < k; ++i) {
      const Elt w = W[idx[i]];
      a = F.add(a, F.mul(d.U[i], F.mul(w, w)));
      b = F.add(b, F.mul(d.U[i], w));
    }
    gens.push_back(elem_t(F, a, b, 0));
    int i = k - 1;
    while (i >= 0 && ++idx[i] == W.size()) idx[i--] = 0;
    if (i < 0) break;
  }
  return generated(F, gens);
}

/// dim over GF(p) of alpha_1 W + ... + alpha_k W.
inline int span_dimension(const FieldSpec& F, const SubspaceDecomposition& d) {
  const auto& Fp = galois_field(F.p());
  std::vector<Vec> rows;
  for (Elt al : d.U)
    for (Elt w : d.W) {
      Vec v;
      for (int c : F.coeffs(F.mul(al, w))) v.push_back(Fp.from_int(c));
      rows.push_back(v);
    }
  if (rows.empty()) return 0;
  return rank(Matrix::from_rows(Fp, rows));
}

inline ClaimReport check_S(const FieldSpec& F, const SubspaceDecomposition& d) {
  using namespace detail;
  const auto c = compute(build_SUW(F, d));
  ClaimReport r{"S_{U,W}", F.q(), c.inv, {}};
  const std::uint64_t q = F.q(), p = F.p();
  r.claims.push_back(claim("order q^3", c.inv.order == q * q * q, sizes(c.inv.order, q * q * q)));
  r.claims.push_back(claim("nonabelian", !c.inv.is_abelian));
  r.claims.push_back(claim("exponent p (p > 3) or p^2 (p = 2, 3)", c.inv.exponent == expected_exponent(F),
                           "exponent " + std::to_string(c.inv.exponent)));
  const auto want = expected_S_derived(F, d);
  r.claims.push_back(claim("S' matches its listed generators", c.derived == want, sizes(c.derived.size(), want.size())));
  if (p != 2) {
    const auto Z = z_set(F);
    std::uint64_t order = q;
    for (int i = 0; i < span_dimension(F, d); ++i) order *= p;
    r.claims.push_back(claim("Z(S) = Z(E)", c.centre == Z, sizes(c.centre.size(), Z.size())));
    r.claims.push_back(claim("|S'| = q p^l", c.derived.size() == order, sizes(c.derived.size(), order)));
    r.claims.push_back(claim("Z(S) < S'", subset(c.centre, c.derived) && c.centre.size() < c.derived.size()));
    r.claims.push_back(claim("not special", !c.inv.is_special));
  } else {
    const auto R = r_set(F);
    r.claims.push_back(claim("Z(S) = R", c.centre == R, sizes(c.centre.size(), R.size())));
    r.claims.push_back(claim("S' < Z(S)", subset(c.derived, c.centre) && c.derived.size() < c.centre.size()));
  }
  return r;
}

}  // namespace gq
