#pragma once

// Explicit matrices and groups acting on W(3,q), its Payne derivation at
// x = <(1,0,0,0)>, and on elliptic quadrics Q-(5,q).

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "gq/action.hpp"
#include "gq/field.hpp"
#include "gq/finite_group.hpp"
#include "gq/forms.hpp"
#include "gq/matrix.hpp"

namespace gq {

// ---------------------------------------------------------------------------
// t and theta elements

/// Rows (1,0,0,0; -c,1,0,0; b,0,1,0; a,b,c,1).
inline Matrix elem_t(const FieldSpec& F, Elt a, Elt b, Elt c) {
  Matrix m = Matrix::identity(F, 4);
  m.set(1, 0, F.neg(c));
  m.set(2, 0, b);
  m.set(3, 0, a);
  m.set(3, 1, b);
  m.set(3, 2, c);
  return m;
}

/// Parameters (a, b, c) when m is some t_{a,b,c}.
inline std::optional<std::array<Elt, 3>> t_params(const Matrix& m) {
  const FieldSpec& F = m.field();
  if (m.rows() != 4 || m.cols() != 4) return std::nullopt;
  const Elt a = m.at(3, 0), b = m.at(3, 1), c = m.at(3, 2);
  if (m == elem_t(F, a, b, c)) return std::array<Elt, 3>{a, b, c};
  return std::nullopt;
}

/// Rows (1,0,0,0; -a,1,0,0; -a^2,a,1,0; 0,0,a,1).
inline Matrix elem_theta(const FieldSpec& F, Elt alpha) {
  Matrix m = Matrix::identity(F, 4);
  m.set(1, 0, F.neg(alpha));
  m.set(2, 0, F.neg(F.mul(alpha, alpha)));
  m.set(2, 1, alpha);
  m.set(3, 2, alpha);
  return m;
}

/// theta_alpha^n from the closed form. The coefficients n(n+1)/2,
/// n(n-1)/2 and n(n^2-1)/6 are integers and are reduced mod p only after
/// exact evaluation, so the formula holds in every characteristic.
inline Matrix theta_power(const FieldSpec& F, Elt alpha, long long n) {
  if (n < 0) throw DimensionMismatch("theta_power expects n >= 0");
  const Elt a2 = F.mul(alpha, alpha), a3 = F.mul(a2, alpha);
  const Elt na = F.mul(F.from_int(n), alpha);
  Matrix m = Matrix::identity(F, 4);
  m.set(1, 0, F.neg(na));
  m.set(2, 0, F.neg(F.mul(F.from_int(n * (n + 1) / 2), a2)));
  m.set(2, 1, na);
  m.set(3, 0, F.neg(F.mul(F.from_int(n * (n * n - 1) / 6), a3)));
  m.set(3, 1, F.mul(F.from_int(n * (n - 1) / 2), a2));
  m.set(3, 2, na);
  return m;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a.inverse() * b.inverse() * a * b; }

// ---------------------------------------------------------------------------
// Identity checks

struct IdentityReport {
  bool ok = true;
  std::uint64_t checked = 0;
  std::string first_failure;  // identity name and parameters

  void fail(const std::string& what) {
    if (ok) first_failure = what;
    ok = false;
  }
};

namespace detail {

inline std::string params_string(const FieldSpec& F, std::initializer_list<Elt> xs) {
  std::string out = "(";
  bool first = true;
  for (Elt x : xs) {
    out += (first ? "" : "; ") + F.to_string(x);
    first = false;
  }
  return out + ")";
}

// Calls visit(tuple) for every k-tuple over GF(q), or `samples` seeded
// random tuples when that is nonzero.
template <typename Visit>
void for_tuples(const FieldSpec& F, int k, std::uint64_t samples, Visit&& visit) {
  std::vector<Elt> t(k, 0);
  if (samples) {
    std::mt19937_64 rng(0);
    for (std::uint64_t s = 0; s < samples; ++s) {
      for (auto& x : t) x = static_cast<Elt>(rng() % F.q());
      visit(t);
    }
    return;
  }
  while (true) {
    visit(t);
    int i = k - 1;
    while (i >= 0 && ++t[i] == F.q()) t[i--] = 0;
    if (i < 0) return;
  }
}

}  // namespace detail

/// Relations (1)-(4) between theta_alpha and E, exhaustively when
/// samples == 0.
inline IdentityReport relation_check(const FieldSpec& F, std::uint64_t samples = 0) {
  IdentityReport r;
  const Elt two = F.from_int(2);
  detail::for_tuples(F, 4, samples, [&](const std::vector<Elt>& v) {
    const Elt a = v[0], b = v[1], c = v[2], al = v[3];
    const Matrix th = elem_theta(F, al), t = elem_t(F, a, b, c);
    // (1) theta^-1 t theta = t_{-2a^2c - 2ab + a, ac + b, c}
    const Elt a1 = F.add(F.neg(F.mul(two, F.add(F.mul(F.mul(al, al), c), F.mul(al, b)))), a);
    if (th.inverse() * t * th != elem_t(F, a1, F.add(F.mul(al, c), b), c))
      r.fail("relation (1) at (a;b;c;alpha) = " + detail::params_string(F, {a, b, c, al}));
    // (2) [t, theta] = t_{-alpha(c^2 + 2 alpha c + 2b), alpha c, 0}
    const Elt inner = F.add(F.add(F.mul(c, c), F.mul(two, F.mul(al, c))), F.mul(two, b));
    if (commutator(t, th) != elem_t(F, F.neg(F.mul(al, inner)), F.mul(al, c), 0))
      r.fail("relation (2) at (a;b;c;alpha) = " + detail::params_string(F, {a, b, c, al}));
    r.checked += 2;
  });
  detail::for_tuples(F, 2, samples, [&](const std::vector<Elt>& v) {
    const Elt al = v[0], be = v[1];
    const Matrix ta = elem_theta(F, al), tb = elem_theta(F, be);
    // (3) theta_a theta_b = t_{a^2 b, ab, 0} theta_{a+b}
    if (ta * tb != elem_t(F, F.mul(F.mul(al, al), be), F.mul(al, be), 0) * elem_theta(F, F.add(al, be)))
      r.fail("relation (3) at (alpha;beta) = " + detail::params_string(F, {al, be}));
    // (4) [theta_a, theta_b] = t_{ab(a-b), 0, 0}
    if (commutator(ta, tb) != elem_t(F, F.mul(F.mul(al, be), F.sub(al, be)), 0, 0))
      r.fail("relation (4) at (alpha;beta) = " + detail::params_string(F, {al, be}));
    r.checked += 2;
  });
  return r;
}

/// t_{a,b,c} t_{x,y,z} = t_{a+x-bz+cy, b+y, c+z} and
/// [t_{a,b,c}, t_{x,y,z}] = t_{-2bz+2cy, 0, 0}.
inline IdentityReport t_rule_check(const FieldSpec& F, std::uint64_t samples = 0) {
  IdentityReport r;
  const Elt two = F.from_int(2);
  detail::for_tuples(F, 6, samples, [&](const std::vector<Elt>& v) {
    const Matrix s = elem_t(F, v[0], v[1], v[2]), t = elem_t(F, v[3], v[4], v[5]);
    const Elt bz = F.mul(v[1], v[5]), cy = F.mul(v[2], v[4]);
    const Elt a = F.add(F.sub(F.add(v[0], v[3]), bz), cy);
    if (s * t != elem_t(F, a, F.add(v[1], v[4]), F.add(v[2], v[5])))
      r.fail("t-product at " + detail::params_string(F, {v[0], v[1], v[2], v[3], v[4], v[5]}));
    if (commutator(s, t) != elem_t(F, F.mul(two, F.sub(cy, bz)), 0, 0))
      r.fail("t-commutator at " + detail::params_string(F, {v[0], v[1], v[2], v[3], v[4], v[5]}));
    if (s.inverse() != elem_t(F, F.neg(v[0]), F.neg(v[1]), F.neg(v[2])))
      r.fail("t-inverse at " + detail::params_string(F, {v[0], v[1], v[2]}));
    r.checked += 3;
  });
  return r;
}

/// Closed form of theta_alpha^n against repeated multiplication for
/// 1 <= n <= p^2, plus the displayed inverse and the order of theta_alpha.
inline IdentityReport theta_power_check(const FieldSpec& F) {
  IdentityReport r;
  const long long p = F.p();
  for (Elt al = 0; al < F.q(); ++al) {
    const Matrix th = elem_theta(F, al);
    Matrix acc = th;
    for (long long n = 1; n <= p * p; ++n) {
      if (theta_power(F, al, n) != acc) r.fail("theta power n=" + std::to_string(n) + " alpha=" + F.to_string(al));
      acc = acc * th;
      ++r.checked;
    }
    Matrix inv = Matrix::identity(F, 4);
    inv.set(1, 0, al);
    inv.set(2, 1, F.neg(al));
    inv.set(3, 1, F.mul(al, al));
    inv.set(3, 2, F.neg(al));
    if (th.inverse() != inv) r.fail("theta inverse alpha=" + F.to_string(al));
    if (al != 0) {
      const long long expected = p > 3 ? p : p * p;
      long long order = 1;
      for (Matrix x = th; !x.is_identity(); x = x * th) ++order;
      if (order != expected) r.fail("theta order alpha=" + F.to_string(al));
    }
    r.checked += 2;
  }
  return r;
}

/// Every lower unitriangular 4x4 matrix over GF(q) has order dividing p
/// (p > 3) or p^2 (p = 2, 3). Also records the largest order seen.
struct SylowExponentReport {
  bool ok = true;
  std::uint64_t checked = 0;
  std::uint64_t max_order = 1;
};

inline SylowExponentReport sylow_exponent_check(const FieldSpec& F) {
  SylowExponentReport r;
  const long long p = F.p();
  const long long bound = p > 3 ? p : p * p;
  detail::for_tuples(F, 6, 0, [&](const std::vector<Elt>& v) {
    Matrix m = Matrix::identity(F, 4);
    m.set(1, 0, v[0]);
    m.set(2, 0, v[1]);
    m.set(2, 1, v[2]);
    m.set(3, 0, v[3]);
    m.set(3, 1, v[4]);
    m.set(3, 2, v[5]);
    std::uint64_t order = 1;
    Matrix x = m;
    while (!x.is_identity() && order <= static_cast<std::uint64_t>(bound)) {
      x = x * m;
      ++order;
    }
    if (!x.is_identity() || bound % static_cast<long long>(order) != 0) r.ok = false;
    r.max_order = std::max(r.max_order, order);
    ++r.checked;
  });
  return r;
}

// ---------------------------------------------------------------------------
// Groups

/// A group given by semilinear generators, with a JSON provenance record.
struct ConstructedGroup {
  std::string name;
  const FieldSpec* field = nullptr;
  int dim = 4;
  std::vector<SemilinearMap> gens;
  nlohmann::ordered_json provenance;
};

inline ConcreteGroup<SemilinearMap> enumerate_group(const ConstructedGroup& g, std::uint64_t limit = 1ULL << 20) {
  return close_group(SemilinearMap::identity(*g.field, g.dim), g.gens, limit);
}

namespace detail {

inline nlohmann::ordered_json field_json(const FieldSpec& F) {
  nlohmann::ordered_json j;
  j["q"] = F.q();
  j["p"] = F.p();
  j["f"] = F.f();
  j["modulus"] = F.modulus_string();
  return j;
}

inline nlohmann::ordered_json elts_json(const FieldSpec& F, const std::vector<Elt>& xs) {
  auto j = nlohmann::ordered_json::array();
  for (Elt x : xs) j.push_back(F.to_string(x));
  return j;
}

inline ConstructedGroup make_group(std::string name, const FieldSpec& F, std::vector<Matrix> mats) {
  ConstructedGroup g;
  g.name = std::move(name);
  g.field = &F;
  g.dim = mats.empty() ? 4 : mats[0].rows();
  for (auto& m : mats) g.gens.emplace_back(std::move(m), 0);
  g.provenance["group"] = g.name;
  g.provenance["field"] = field_json(F);
  return g;
}

}  // namespace detail

inline ConstructedGroup build_E(const FieldSpec& F) {
  std::vector<Matrix> gens;
  for (Elt b : F.prime_basis()) {
    gens.push_back(elem_t(F, b, 0, 0));
    gens.push_back(elem_t(F, 0, b, 0));
    gens.push_back(elem_t(F, 0, 0, b));
  }
  return detail::make_group("E", F, std::move(gens));
}

inline ConstructedGroup build_R(const FieldSpec& F) {
  std::vector<Matrix> gens;
  for (Elt b : F.prime_basis()) {
    gens.push_back(elem_t(F, b, 0, 0));
    gens.push_back(elem_t(F, 0, b, 0));
  }
  return detail::make_group("R", F, std::move(gens));
}

inline ConstructedGroup build_Z(const FieldSpec& F) {
  std::vector<Matrix> gens;
  for (Elt b : F.prime_basis()) gens.push_back(elem_t(F, b, 0, 0));
  return detail::make_group("Z", F, std::move(gens));
}

/// Throws BadDecomposition unless the elements are GF(p)-independent.
inline void require_independent(const FieldSpec& F, const std::vector<Elt>& xs, const std::string& what) {
  const auto& Fp = galois_field(F.p());
  if (xs.empty()) return;
  std::vector<Vec> rows;
  for (Elt x : xs) {
    Vec v;
    for (int c : F.coeffs(x)) v.push_back(Fp.from_int(c));
    rows.push_back(v);
  }
  if (rank(Matrix::from_rows(Fp, rows)) != static_cast<int>(xs.size()))
    throw BadDecomposition(what + " is not linearly independent over GF(" + std::to_string(F.p()) + ")");
}

/// P = <R, theta_alpha for alpha in a GF(p)-basis>; default basis 1, x, x^2, ...
inline ConstructedGroup build_P(const FieldSpec& F, std::vector<Elt> basis = {}) {
  if (basis.empty()) basis = F.prime_basis();
  if (static_cast<int>(basis.size()) != F.f()) throw BadDecomposition("basis must have f elements");
  require_independent(F, basis, "basis");
  auto g = build_R(F);
  g.name = "P";
  for (Elt a : basis) g.gens.emplace_back(elem_theta(F, a), 0);
  g.provenance["group"] = "P";
  g.provenance["basis"] = detail::elts_json(F, basis);
  return g;
}

struct SubspaceDecomposition {
  std::vector<Elt> U;  // basis alpha_1..alpha_k
  std::vector<Elt> W;  // basis of a complement
};

inline void validate(const FieldSpec& F, const SubspaceDecomposition& d) {
  if (F.f() < 2) throw BadDecomposition("S_{U,W} needs f >= 2");
  if (d.U.empty()) throw BadDecomposition("U must be nonzero");
  if (static_cast<int>(d.U.size() + d.W.size()) != F.f())
    throw BadDecomposition("dim U + dim W must equal f = " + std::to_string(F.f()));
  std::vector<Elt> all = d.U;
  all.insert(all.end(), d.W.begin(), d.W.end());
  require_independent(F, all, "U and W bases together");
}

/// U spanned by the first k powers of x, W by the remaining ones.
inline SubspaceDecomposition standard_decomposition(const FieldSpec& F, int k) {
  const auto basis = F.prime_basis();
  if (k < 1 || k >= F.f()) throw BadDecomposition("need 1 <= dim U < f");
  return {std::vector<Elt>(basis.begin(), basis.begin() + k), std::vector<Elt>(basis.begin() + k, basis.end())};
}

/// S_{U,W} = <R, theta_alpha (alpha in U basis), t_{0,0,w} (w in W basis)>.
inline ConstructedGroup build_SUW(const FieldSpec& F, const SubspaceDecomposition& d) {
  validate(F, d);
  auto g = build_R(F);
  g.name = "S_{U,W}";
  for (Elt a : d.U) g.gens.emplace_back(elem_theta(F, a), 0);
  for (Elt w : d.W) g.gens.emplace_back(elem_t(F, 0, 0, w), 0);
  g.provenance["group"] = g.name;
  g.provenance["U"] = detail::elts_json(F, d.U);
  g.provenance["W"] = detail::elts_json(F, d.W);
  return g;
}

/// All decompositions GF(q) = U + W with dim U = k, each as canonical
/// (reduced echelon over GF(p)) bases of U and W.
inline std::vector<SubspaceDecomposition> all_decompositions(const FieldSpec& F, int k) {
  const auto& Fp = galois_field(F.p());
  const int f = F.f();
  auto to_vec = [&](Elt x) {
    Vec v;
    for (int c : F.coeffs(x)) v.push_back(Fp.from_int(c));
    return v;
  };
  auto to_elt = [&](const Vec& v) {
    std::vector<int> c;
    for (Elt x : v) c.push_back(static_cast<int>(Fp.coeffs(x)[0]));
    return F.from_coeffs(c);
  };
  // subspaces of dimension d as sets of echelon bases
  auto subspaces = [&](int d) {
    std::set<std::vector<Elt>> seen;
    std::vector<Subspace> out;
    std::vector<Elt> pick(d);
    std::function<void(int, Elt)> rec = [&](int i, Elt start) {
      if (i == d) {
        std::vector<Vec> rows;
        for (Elt x : pick) rows.push_back(to_vec(x));
        Subspace s = Subspace::span(Fp, rows, f);
        if (s.dim() == d && seen.insert(s.basis().data()).second) out.push_back(s);
        return;
      }
      for (Elt x = start; x < F.q(); ++x) {
        pick[i] = x;
        rec(i + 1, x + 1);
      }
    };
    rec(0, 1);
    return out;
  };
  std::vector<SubspaceDecomposition> out;
  const auto us = subspaces(k);
  const auto ws = subspaces(f - k);
  for (const auto& u : us)
    for (const auto& w : ws) {
      auto rows = u.rows();
      for (auto& r : w.rows()) rows.push_back(r);
      if (rank(Matrix::from_rows(Fp, rows)) != f) continue;
      SubspaceDecomposition d;
      for (auto& r : u.rows()) d.U.push_back(to_elt(r));
      for (auto& r : w.rows()) d.W.push_back(to_elt(r));
      out.push_back(d);
    }
  return out;
}

/// The stabiliser of x = <e1> in the semisimilarity group of beta, acting
/// projectively: E, theta for a basis, torus diag(l,1,1,l^-1), the Levi
/// SL(2,q) on coordinates 2-3, the similitude diag(m,m,1,1) and the
/// Frobenius map.
inline ConstructedGroup build_ambient(const FieldSpec& F) {
  auto g = build_E(F);
  g.name = "ambient";
  const Elt lam = F.primitive();
  for (Elt a : F.prime_basis()) g.gens.emplace_back(elem_theta(F, a), 0);
  Matrix torus = Matrix::identity(F, 4);
  torus.set(0, 0, lam);
  torus.set(3, 3, F.inv(lam));
  Matrix levi_d = Matrix::identity(F, 4);
  levi_d.set(1, 1, lam);
  levi_d.set(2, 2, F.inv(lam));
  Matrix sim = Matrix::identity(F, 4);
  sim.set(0, 0, lam);
  sim.set(1, 1, lam);
  g.gens.emplace_back(torus, 0);
  for (Elt t : F.prime_basis()) {
    Matrix up = Matrix::identity(F, 4), down = Matrix::identity(F, 4);
    up.set(1, 2, t);
    down.set(2, 1, t);
    g.gens.emplace_back(up, 0);
    g.gens.emplace_back(down, 0);
  }
  g.gens.emplace_back(levi_d, 0);
  g.gens.emplace_back(sim, 0);
  if (F.f() > 1) g.gens.emplace_back(Matrix::identity(F, 4), 1);
  g.provenance["group"] = g.name;
  return g;
}

/// Expected order of the projective ambient group: q^4 (q-1)^2 (q+1) f.
inline std::uint64_t ambient_order(const FieldSpec& F) {
  const std::uint64_t q = F.q();
  return q * q * q * q * (q - 1) * (q - 1) * (q + 1) * static_cast<std::uint64_t>(F.f());
}

/// A Sylow p-subgroup of the ambient group: E, the lower Levi root group,
/// and the p-part of the Frobenius group.
inline ConstructedGroup build_ambient_sylow(const FieldSpec& F) {
  auto g = build_E(F);
  g.name = "ambient_sylow";
  for (Elt t : F.prime_basis()) {
    Matrix down = Matrix::identity(F, 4);
    down.set(2, 1, t);
    g.gens.emplace_back(down, 0);
  }
  int pf = 1;  // p-part of f
  for (int f = F.f(); f % F.p() == 0; f /= F.p()) pf *= F.p();
  if (pf > 1) g.gens.emplace_back(Matrix::identity(F, 4), F.f() / pf);
  g.provenance["group"] = g.name;
  return g;
}

// ---------------------------------------------------------------------------
// E and P are isomorphic for p > 3

struct IsoCheck {
  bool ok = false;
  std::uint64_t order = 0;
  std::uint64_t edges_checked = 0;
  std::string detail;
};

/// Verifies that t_{a,b,0} -> t_{a,b,0}, theta_alpha_i -> t_{0,-alpha_i^2/2,alpha_i}
/// extends to an isomorphism P -> E: the map is defined along a spanning
/// tree of P's Cayley graph and checked on every edge, then for injectivity.
inline IsoCheck iso_E_to_P(const FieldSpec& F) {
  if (F.p() <= 3) throw CharTooSmall("E and P are not isomorphic in characteristic " + std::to_string(F.p()));
  const auto P = build_P(F);
  std::vector<Matrix> images;
  const Elt half = F.inv(F.from_int(2));
  for (const auto& g : P.gens) {
    const Matrix& m = g.matrix();
    if (auto tp = t_params(m)) {
      images.push_back(m);
    } else {
      const Elt al = m.at(3, 2);
      images.push_back(elem_t(F, 0, F.neg(F.mul(F.mul(al, al), half)), al));
    }
  }
  const auto C = enumerate_group(P);
  const IndexedGroup& G = C.group;
  std::vector<Matrix> phi(G.size(), Matrix::identity(F, 4));
  std::vector<char> done(G.size(), 0);
  done[0] = 1;
  for (Index a : G.bfs_order()) {
    for (std::size_t k = 0; k < G.ngens(); ++k) {
      const Index b = G.right_gen(a, k);
      if (!done[b]) {
        phi[b] = phi[a] * images[k];
        done[b] = 1;
      }
    }
  }
  IsoCheck r;
  r.order = G.size();
  for (Index a = 0; a < G.size(); ++a)
    for (std::size_t k = 0; k < G.ngens(); ++k) {
      ++r.edges_checked;
      if (phi[G.right_gen(a, k)] != phi[a] * images[k]) {
        r.detail = "not a homomorphism at element " + std::to_string(a) + ", generator " + std::to_string(k);
        return r;
      }
    }
  std::unordered_set<Matrix> distinct(phi.begin(), phi.end());
  if (distinct.size() != G.size()) {
    r.detail = "map is not injective";
    return r;
  }
  for (const auto& m : phi)
    if (!t_params(m)) {
      r.detail = "image leaves E";
      return r;
    }
  r.ok = true;
  r.detail = "isomorphism verified on all " + std::to_string(r.edges_checked) + " Cayley graph edges";
  return r;
}

// ---------------------------------------------------------------------------
// Lines through x in W(3,q)

/// Sizes of the orbits of a group fixing x = <e1> on the q+1 lines through x,
/// identified with points (0:b:c:0) of x^perp / x. Ascending.
inline std::vector<std::size_t> line_orbits_through_x(const FieldSpec& F, const std::vector<SemilinearMap>& elements,
                                                      std::vector<std::vector<int>>* orbits = nullptr) {
  // line ids: (0:1) -> 0, (1:c) -> 1 + c
  auto line_id = [&](const Vec& v) -> int {
    Elt b = v[1], c = v[2];
    if (b == 0 && c == 0) throw NotInvariant("element does not fix x^perp / x");
    if (b == 0) return 0;
    return 1 + static_cast<int>(F.div(c, b));
  };
  const int nl = static_cast<int>(F.q()) + 1;
  auto label = [&](int id) {
    Vec v(4, 0);
    if (id == 0) v[2] = F.one();
    else {
      v[1] = F.one();
      v[2] = static_cast<Elt>(id - 1);
    }
    return v;
  };
  std::vector<int> orbit_of(nl, -1);
  std::vector<std::vector<int>> out;
  for (int l = 0; l < nl; ++l) {
    if (orbit_of[l] >= 0) continue;
    std::vector<int> orb;
    std::vector<char> seen(nl, 0);
    for (const auto& g : elements) {
      const Vec img = g.apply(label(l));
      // strip the e1 component (x is fixed, so it only shifts within the line)
      const int m = line_id(img);
      if (!seen[m]) {
        seen[m] = 1;
        orb.push_back(m);
      }
    }
    std::sort(orb.begin(), orb.end());
    for (int m : orb) orbit_of[m] = static_cast<int>(out.size());
    out.push_back(orb);
  }
  std::vector<std::size_t> sizes;
  for (const auto& o : out) sizes.push_back(o.size());
  std::sort(sizes.begin(), sizes.end());
  if (orbits) *orbits = out;
  return sizes;
}

// ---------------------------------------------------------------------------
// Regular groups on elliptic quadrics

namespace detail {

// 6x6 matrix from a 3x3 grid of 2x2 blocks.
inline Matrix block3(const FieldSpec& F, const std::array<std::array<Matrix, 3>, 3>& b) {
  Matrix m(F, 6, 6);
  for (int bi = 0; bi < 3; ++bi)
    for (int bj = 0; bj < 3; ++bj)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m.set(2 * bi + i, 2 * bj + j, b[bi][bj].at(i, j));
  return m;
}

}  // namespace detail

/// x1^2+x1x2+x2^2 + x3^2+x3x4+x4^2 + x5^2+x5x6+x6^2 over GF(2): three
/// anisotropic planes, an elliptic form.
inline QuadraticForm block_form27() {
  const auto& F = galois_field(2);
  Matrix c(F, 6, 6);
  for (int i = 0; i < 3; ++i) {
    c.set(2 * i, 2 * i, 1);
    c.set(2 * i, 2 * i + 1, 1);
    c.set(2 * i + 1, 2 * i + 1, 1);
  }
  return QuadraticForm(c);
}

enum class Extraspecial27 { Exp3, Exp9 };

/// The order-27 groups on Q-(5,2) preserving the block form, built from
/// A = [[0,1],[1,1]] of order 3 in O-(2,2).
inline ConstructedGroup build_extraspecial27(Extraspecial27 variant) {
  const auto& F = galois_field(2);
  const Matrix A = Matrix::from_ints(F, {{0, 1}, {1, 1}});
  const Matrix Ai = A.inverse();
  const Matrix I = Matrix::identity(F, 2);
  const Matrix O(F, 2, 2);
  std::vector<Matrix> gens;
  if (variant == Extraspecial27::Exp3) {
    gens.push_back(detail::block3(F, {{{A, O, O}, {O, Ai, O}, {O, O, I}}}));
    gens.push_back(detail::block3(F, {{{I, O, O}, {O, A, O}, {O, O, Ai}}}));
    gens.push_back(detail::block3(F, {{{O, I, O}, {O, O, I}, {I, O, O}}}));
  } else {
    gens.push_back(detail::block3(F, {{{O, A, O}, {O, O, I}, {I, O, O}}}));
    gens.push_back(detail::block3(F, {{{O, I, O}, {O, O, A}, {I, O, O}}}));
  }
  auto g = detail::make_group(variant == Extraspecial27::Exp3 ? "extraspecial27_exp3" : "extraspecial27_exp9", F,
                              std::move(gens));
  g.provenance["form"] = "x1^2+x1x2+x2^2+x3^2+x3x4+x4^2+x5^2+x5x6+x6^2";
  return g;
}

/// GF(8)^6 identified with GF(2^18) through the GF(8)-basis 1, x, ..., x^5.
class Gu513Model {
 public:
  Gu513Model() : F8_(galois_field(8)), K_(galois_field(2, 18)) {
    // omega: a root in K of the GF(8) modulus, among elements of order 7
    const Elt g7 = K_.pow(K_.primitive(), ((1 << 18) - 1) / 7);
    const auto& mod = F8_.modulus();
    for (int k = 1; k < 7 && omega_ == 0; ++k) {
      const Elt w = K_.pow(g7, k);
      Elt v = 0;
      for (int i = static_cast<int>(mod.size()) - 1; i >= 0; --i)
        v = K_.add(K_.mul(v, w), mod[i] ? K_.one() : 0);
      if (v == 0) omega_ = w;
    }
    if (omega_ == 0) throw InvalidField("no root of the GF(8) modulus in GF(2^18)");
    for (Elt c = 0; c < 8; ++c) {
      embed_[c] = to_big(c);
      unembed_.emplace(embed_[c], c);
    }
    // 18x18 GF(2) matrix: row 3i + j = bits of omega^j x^i
    const auto& F2 = galois_field(2);
    Matrix basis(F2, 18, 18);
    const Elt x = K_.generator();
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 3; ++j) {
        const Elt e = K_.mul(K_.pow(omega_, j), K_.pow(x, i));
        const auto bits = K_.coeffs(e);
        for (int b = 0; b < 18; ++b) basis.set(3 * i + j, b, bits[b] ? F2.one() : 0);
      }
    to_coords_ = basis.inverse();
  }

  const FieldSpec& small() const noexcept { return F8_; }
  const FieldSpec& big() const noexcept { return K_; }

  Elt to_big(Elt c) const {
    const auto co = F8_.coeffs(c);
    Elt v = 0;
    for (int j = 0; j < 3; ++j)
      if (co[j]) v = K_.add(v, K_.pow(omega_, j));
    return v;
  }

  Elt from_vec(const Vec& v) const {
    Elt X = 0;
    const Elt x = K_.generator();
    for (int i = 0; i < 6; ++i) X = K_.add(X, K_.mul(embed_[v[i]], K_.pow(x, i)));
    return X;
  }

  Vec to_vec(Elt X) const {
    const auto& F2 = galois_field(2);
    const auto bits = K_.coeffs(X);
    Vec row(18);
    for (int b = 0; b < 18; ++b) row[b] = bits[b] ? F2.one() : 0;
    const Vec c = vec_mat(row, to_coords_);
    Vec out(6);
    for (int i = 0; i < 6; ++i)
      out[i] = F8_.from_coeffs({c[3 * i] ? 1 : 0, c[3 * i + 1] ? 1 : 0, c[3 * i + 2] ? 1 : 0});
    return out;
  }

  /// Tr_{GF(512)/GF(8)}(X^513), as an element of GF(8).
  Elt q_value(const Vec& v) const {
    const Elt n = K_.pow(from_vec(v), 513);
    const Elt t = K_.add(K_.add(n, K_.pow(n, 8)), K_.pow(n, 64));
    auto it = unembed_.find(t);
    if (it == unembed_.end()) throw InvalidField("trace value outside GF(8)");
    return it->second;
  }

  QuadraticForm form() const {
    Matrix c(F8_, 6, 6);
    auto unit = [](int i) {
      Vec v(6, 0);
      v[i] = galois_field(8).one();
      return v;
    };
    for (int i = 0; i < 6; ++i) {
      c.set(i, i, q_value(unit(i)));
      for (int j = i + 1; j < 6; ++j) {
        Vec s = unit(i);
        s[j] = F8_.one();
        c.set(i, j, F8_.sub(F8_.sub(q_value(s), q_value(unit(i))), q_value(unit(j))));
      }
    }
    return QuadraticForm(c);
  }

  /// Multiplication by an element of order 513 and X -> X^4.
  ConstructedGroup group() const {
    const Elt lam = K_.pow(K_.primitive(), ((1 << 18) - 1) / 513);
    const Elt x = K_.generator();
    std::vector<Vec> mrows, frows;
    for (int i = 0; i < 6; ++i) {
      mrows.push_back(to_vec(K_.mul(lam, K_.pow(x, i))));
      frows.push_back(to_vec(K_.pow(x, 4 * i)));
    }
    ConstructedGroup g;
    g.name = "gu513";
    g.field = &F8_;
    g.dim = 6;
    g.gens.emplace_back(Matrix::from_rows(F8_, mrows), 0);
    g.gens.emplace_back(Matrix::from_rows(F8_, frows), 2);
    g.provenance["group"] = g.name;
    g.provenance["field"] = detail::field_json(F8_);
    g.provenance["extension_modulus"] = K_.modulus_string();
    g.provenance["form"] = "Tr_{GF(512)/GF(8)}(X^513) on GF(2^18) with GF(8)-basis 1,x,...,x^5";
    return g;
  }

 private:
  const FieldSpec& F8_;
  const FieldSpec& K_;
  Elt omega_ = 0;
  std::array<Elt, 8> embed_{};
  std::unordered_map<Elt, Elt> unembed_;
  Matrix to_coords_{galois_field(2), 0, 0};
};

}  // namespace gq
