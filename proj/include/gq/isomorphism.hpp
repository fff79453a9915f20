#pragma once

// Isomorphism testing for small groups: invariant comparison first, then a
// backtracking search for generator images.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gq/finite_group.hpp"
#include "gq/invariants.hpp"

namespace gq {

enum class IsoVerdict { Found, None, Unknown };

inline const char* to_string(IsoVerdict v) {
  switch (v) {
    case IsoVerdict::Found: return "Found";
    case IsoVerdict::None: return "None";
    default: return "Unknown";
  }
}

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::Unknown;
  std::vector<Index> map;  // G1 index -> G2 index when Found
  std::string reason;
};

inline constexpr std::size_t kIsoMaxOrder = 4096;

namespace detail {

// Generators independent modulo the Frattini subgroup, preferring elements
// of large order; a minimal generating set for p-groups.
inline std::vector<Index> frattini_generators(const IndexedGroup& G, const Subgroup& phi,
                                              const std::vector<std::uint64_t>& orders) {
  std::vector<Index> by_order(G.size());
  for (Index i = 0; i < G.size(); ++i) by_order[i] = i;
  std::stable_sort(by_order.begin(), by_order.end(), [&](Index a, Index b) { return orders[a] > orders[b]; });
  std::vector<Index> gens, with_phi = phi.gens;
  Subgroup H = phi;
  for (Index a : by_order) {
    if (H.size() == G.size()) break;
    if (H.contains(a)) continue;
    gens.push_back(a);
    with_phi.push_back(a);
    H = subgroup_closure(G, with_phi);
  }
  return gens;
}

// Per-element data preserved by isomorphisms.
inline std::vector<std::vector<std::uint64_t>> element_signatures(const IndexedGroup& G, const GroupStructure& st) {
  const std::size_t n = G.size();
  std::vector<std::uint64_t> class_count(n, 0), roots(n, 0), squares(n, 0);
  for (Index c : st.class_of) ++class_count[c];
  std::uint64_t p = 2;
  for (auto o : st.orders)
    if (o > 1) {
      p = prime_of_power(o) ? prime_of_power(o) : o;
      break;
    }
  for (Index a = 0; a < n; ++a) {
    ++roots[G.pow(a, static_cast<long long>(p))];
    ++squares[G.mul(a, a)];
  }
  std::vector<std::vector<std::uint64_t>> sig(n);
  for (Index a = 0; a < n; ++a)
    sig[a] = {st.orders[a],
              class_count[st.class_of[a]],
              roots[a],
              squares[a],
              st.centre.contains(a) ? 1u : 0u,
              st.derived.contains(a) ? 1u : 0u,
              st.frattini && st.frattini->contains(a) ? 1u : 0u};
  return sig;
}

inline std::string first_difference(const GroupInvariantReport& a, const GroupInvariantReport& b) {
  auto pair = [](const char* what, auto x, auto y) {
    return std::string(what) + " " + std::to_string(x) + " vs " + std::to_string(y);
  };
  if (a.exponent != b.exponent) return pair("exponent", a.exponent, b.exponent);
  if (a.centre_order != b.centre_order) return pair("centre order", a.centre_order, b.centre_order);
  if (a.derived_order != b.derived_order) return pair("derived order", a.derived_order, b.derived_order);
  if (a.element_order_histogram != b.element_order_histogram) return "element order histograms differ";
  if (a.class_sizes != b.class_sizes) return "class sizes differ";
  return "invariants differ";
}

// Extends gens[k] -> imgs[k] (k < m) over the subgroup they generate.
// Returns false when the map is not a well-defined injective homomorphism.
inline bool extend_partial(const IndexedGroup& G1, const IndexedGroup& G2, const std::vector<Index>& gens,
                           const std::vector<Index>& imgs, std::size_t m, std::vector<Index>& phi,
                           std::vector<Index>& touched) {
  constexpr Index kUnset = static_cast<Index>(-1);
  for (Index t : touched) phi[t] = kUnset;
  touched.assign(1, 0);
  phi[0] = 0;
  std::vector<char> hit(G2.size(), 0);
  hit[0] = 1;
  for (std::size_t qi = 0; qi < touched.size(); ++qi) {
    const Index a = touched[qi];
    for (std::size_t k = 0; k < m; ++k) {
      const Index b = G1.mul(a, gens[k]);
      const Index fb = G2.mul(phi[a], imgs[k]);
      if (phi[b] == kUnset) {
        if (hit[fb]) return false;
        hit[fb] = 1;
        phi[b] = fb;
        touched.push_back(b);
      } else if (phi[b] != fb) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace detail

/// Decides whether G1 and G2 are isomorphic. Unknown when an order exceeds
/// kIsoMaxOrder or the search exceeds node_limit candidate assignments.
inline IsoResult is_isomorphic_small(const IndexedGroup& G1, const IndexedGroup& G2,
                                     std::uint64_t node_limit = 1000000) {
  IsoResult r;
  if (G1.size() != G2.size()) {
    r.verdict = IsoVerdict::None;
    r.reason = "orders " + std::to_string(G1.size()) + " vs " + std::to_string(G2.size());
    return r;
  }
  if (G1.size() > kIsoMaxOrder) {
    r.reason = "order above " + std::to_string(kIsoMaxOrder);
    return r;
  }
  GroupStructure s1, s2;
  const auto inv1 = invariant_report(G1, &s1);
  const auto inv2 = invariant_report(G2, &s2);
  if (inv1.fingerprint != inv2.fingerprint) {
    r.verdict = IsoVerdict::None;
    r.reason = detail::first_difference(inv1, inv2);
    return r;
  }
  const auto sig1 = detail::element_signatures(G1, s1), sig2 = detail::element_signatures(G2, s2);
  std::map<std::vector<std::uint64_t>, std::uint64_t> census1, census2;
  for (const auto& x : sig1) ++census1[x];
  for (const auto& x : sig2) ++census2[x];
  if (census1 != census2) {
    r.verdict = IsoVerdict::None;
    r.reason = "element signatures differ";
    return r;
  }
  // without a Frattini subgroup fall back to the trivial subgroup
  const Subgroup phi1 = s1.frattini ? *s1.frattini : subgroup_closure(G1, {});
  const Subgroup phi2 = s2.frattini ? *s2.frattini : subgroup_closure(G2, {});
  const auto gens = detail::frattini_generators(G1, phi1, s1.orders);
  const std::size_t d = gens.size();
  std::vector<std::vector<Index>> candidates(d);
  for (std::size_t i = 0; i < d; ++i)
    for (Index h = 0; h < G2.size(); ++h)
      if (sig2[h] == sig1[gens[i]] && (!s1.frattini || !phi2.contains(h))) candidates[i].push_back(h);

  std::vector<Index> img(d);
  std::vector<Index> phi(G1.size(), static_cast<Index>(-1)), touched;
  std::uint64_t nodes = 0;
  bool exhausted = false;

  auto search = [&](auto&& self, std::size_t i, const Subgroup& span) -> bool {
    if (i == d) return touched.size() == G1.size();
    for (Index h : candidates[i]) {
      if (node_limit && ++nodes > node_limit) {
        exhausted = true;
        return false;
      }
      if (s1.frattini && span.contains(h)) continue;  // images stay independent modulo Phi
      img[i] = h;
      if (!detail::extend_partial(G1, G2, gens, img, i + 1, phi, touched)) continue;
      Subgroup next = span;
      if (s1.frattini) {
        auto g = span.gens;
        g.push_back(h);
        next = subgroup_closure(G2, g);
      }
      if (self(self, i + 1, next)) return true;
      if (exhausted) return false;
    }
    return false;
  };

  if (search(search, 0, phi2)) {
    r.verdict = IsoVerdict::Found;
    r.map = std::move(phi);
    r.reason = "generator images extend to an isomorphism";
  } else if (exhausted) {
    r.reason = "search budget of " + std::to_string(node_limit) + " nodes exhausted";
  } else {
    r.verdict = IsoVerdict::None;
    r.reason = "no generator images extend to an isomorphism";
  }
  return r;
}

}  // namespace gq
