#pragma once

// Structural invariants of finite groups: centre, derived and lower central
// series, Frattini subgroup, exponent, class sizes, and a fingerprint.

#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gq/field.hpp"
#include "gq/finite_group.hpp"

namespace gq {

/// Prime p when n is a power of p (n > 1), else 0.
inline std::uint64_t prime_of_power(std::uint64_t n) {
  if (n < 2) return 0;
  const auto f = detail::prime_factors(n);
  return f.size() == 1 ? f[0] : 0;
}

inline Subgroup centre(const IndexedGroup& G) {
  std::vector<Index> z;
  const auto gens = G.generators();
  for (Index a = 0; a < G.size(); ++a) {
    bool central = true;
    for (Index g : gens)
      if (G.mul(a, g) != G.mul(g, a)) {
        central = false;
        break;
      }
    if (central) z.push_back(a);
  }
  Subgroup H;
  H.member.assign(G.size(), 0);
  for (Index a : z) H.member[a] = 1;
  H.elements = z;
  // generators: greedy
  Subgroup acc = subgroup_closure(G, {});
  for (Index a : z)
    if (!acc.contains(a)) {
      auto gens2 = acc.gens;
      gens2.push_back(a);
      acc = subgroup_closure(G, gens2);
    }
  H.gens = acc.gens;
  return H;
}

/// [H, G] for a normal subgroup H.
inline Subgroup commutator_with_group(const IndexedGroup& G, const Subgroup& H) {
  std::vector<Index> seeds;
  for (Index h : H.gens)
    for (Index g : G.generators()) {
      const Index c = G.commutator(h, g);
      if (c != 0) seeds.push_back(c);
    }
  return normal_closure(G, seeds);
}

inline Subgroup derived_subgroup(const IndexedGroup& G) {
  return commutator_with_group(G, whole_group(G));
}

/// gamma_1 = G, gamma_{i+1} = [gamma_i, G], until the series stabilises.
inline std::vector<Subgroup> lower_central_series(const IndexedGroup& G) {
  std::vector<Subgroup> out{whole_group(G)};
  while (out.back().size() > 1) {
    Subgroup next = commutator_with_group(G, out.back());
    if (next.size() == out.back().size()) break;
    out.push_back(std::move(next));
  }
  return out;
}

inline bool is_nilpotent(const std::vector<Subgroup>& lcs) { return lcs.back().size() == 1; }

/// Phi(G) for nilpotent G: G' together with the r-th powers of the
/// generators, r the product of the primes dividing |G|. Empty for
/// non-nilpotent groups.
inline std::optional<Subgroup> frattini_subgroup(const IndexedGroup& G, const Subgroup& derived, bool nilpotent) {
  if (!nilpotent) return std::nullopt;
  std::uint64_t rad = 1;
  for (auto p : detail::prime_factors(G.size())) rad *= p;
  std::vector<Index> gens = derived.gens;
  for (Index g : G.generators()) gens.push_back(G.pow(g, static_cast<long long>(rad)));
  return subgroup_closure(G, gens);
}

inline std::optional<Subgroup> frattini_subgroup(const IndexedGroup& G) {
  const auto lcs = lower_central_series(G);
  const Subgroup d = lcs.size() > 1 ? lcs[1] : subgroup_closure(G, {});
  return frattini_subgroup(G, d, is_nilpotent(lcs));
}

/// Sizes of the conjugacy classes, one entry per class, ascending.
inline std::vector<std::uint64_t> class_sizes(const IndexedGroup& G, std::vector<Index>* class_of = nullptr) {
  std::vector<Index> cls(G.size(), static_cast<Index>(-1));
  std::vector<std::uint64_t> sizes;
  const auto gens = G.generators();
  std::vector<Index> orbit;
  for (Index a = 0; a < G.size(); ++a) {
    if (cls[a] != static_cast<Index>(-1)) continue;
    const Index id = static_cast<Index>(sizes.size());
    orbit.assign(1, a);
    cls[a] = id;
    for (std::size_t i = 0; i < orbit.size(); ++i)
      for (Index g : gens) {
        const Index c = G.conj(orbit[i], g);
        if (cls[c] == static_cast<Index>(-1)) {
          cls[c] = id;
          orbit.push_back(c);
        }
      }
    sizes.push_back(orbit.size());
  }
  if (class_of) *class_of = cls;
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

inline std::vector<std::uint64_t> element_orders(const IndexedGroup& G) {
  std::vector<std::uint64_t> out(G.size(), 0);
  out[0] = 1;
  // ord(g^k) = ord(g) / gcd(ord(g), k) fills powers cheaply
  for (Index a = 1; a < G.size(); ++a) {
    if (out[a]) continue;
    const std::uint64_t o = G.order_of(a);
    Index x = a;
    for (std::uint64_t k = 1; k < o; ++k) {
      if (!out[x]) out[x] = o / std::gcd(o, k);
      x = G.mul(x, a);
    }
  }
  return out;
}

struct GroupInvariantReport {
  std::uint64_t order = 0;
  std::uint64_t exponent = 0;
  std::uint64_t centre_order = 0;
  std::uint64_t derived_order = 0;
  std::vector<std::uint64_t> lower_central_series;  // gamma_1, gamma_2, ... orders
  std::optional<std::uint64_t> frattini_order;
  std::optional<int> nilpotency_class;
  bool is_abelian = false;
  bool is_special = false;
  bool is_extraspecial = false;
  std::vector<std::uint64_t> class_sizes;
  std::map<std::uint64_t, std::uint64_t> element_order_histogram;
  std::string fingerprint;
  bool partial = false;  // set when a field could not be computed exactly

  std::string canonical_string() const {
    std::ostringstream os;
    os << "o=" << order << ";e=" << exponent << ";z=" << centre_order << ";d=" << derived_order << ";l=";
    for (auto v : lower_central_series) os << v << ',';
    os << ";f=" << (frattini_order ? std::to_string(*frattini_order) : "-");
    os << ";c=" << (nilpotency_class ? std::to_string(*nilpotency_class) : "-");
    os << ";a=" << is_abelian << ";s=" << is_special << ";x=" << is_extraspecial << ";k=";
    for (auto v : class_sizes) os << v << ',';
    os << ";h=";
    for (const auto& [o, c] : element_order_histogram) os << o << ':' << c << ',';
    return os.str();
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["order"] = order;
    j["exponent"] = exponent;
    j["centre_order"] = centre_order;
    j["derived_order"] = derived_order;
    auto lcs = lower_central_series;
    std::sort(lcs.begin(), lcs.end());
    j["lower_central_series"] = lcs;
    j["frattini_order"] = frattini_order ? nlohmann::ordered_json(*frattini_order) : nlohmann::ordered_json(nullptr);
    j["nilpotency_class"] =
        nilpotency_class ? nlohmann::ordered_json(*nilpotency_class) : nlohmann::ordered_json(nullptr);
    j["is_abelian"] = is_abelian;
    j["is_special"] = is_special;
    j["is_extraspecial"] = is_extraspecial;
    j["class_sizes"] = class_sizes;
    auto hist = nlohmann::ordered_json::array();
    for (const auto& [o, c] : element_order_histogram) hist.push_back({o, c});
    j["element_order_histogram"] = hist;
    j["fingerprint"] = fingerprint;
    if (partial) j["partial"] = true;
    return j;
  }
};

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

/// All subgroups the report is built from, for callers that need them.
struct GroupStructure {
  Subgroup centre;
  Subgroup derived;
  std::vector<Subgroup> lcs;
  std::optional<Subgroup> frattini;
  std::vector<std::uint64_t> orders;  // per element
  std::vector<Index> class_of;
};

inline GroupInvariantReport invariant_report(const IndexedGroup& G, GroupStructure* keep = nullptr) {
  GroupInvariantReport r;
  r.order = G.size();
  GroupStructure st;
  st.orders = element_orders(G);
  r.exponent = 1;
  for (auto o : st.orders) {
    r.exponent = std::lcm(r.exponent, o);
    ++r.element_order_histogram[o];
  }
  st.centre = centre(G);
  r.centre_order = st.centre.size();
  st.lcs = lower_central_series(G);
  st.derived = st.lcs.size() > 1 ? st.lcs[1] : subgroup_closure(G, {});
  r.derived_order = st.derived.size();
  for (const auto& s : st.lcs) r.lower_central_series.push_back(s.size());
  const bool nilpotent = is_nilpotent(st.lcs);
  if (nilpotent) {
    r.nilpotency_class = static_cast<int>(st.lcs.size()) - 1;
    // the trivial group has class 0 and a one-term series
  }
  st.frattini = frattini_subgroup(G, st.derived, nilpotent);
  if (st.frattini) r.frattini_order = st.frattini->size();
  else r.partial = true;
  r.is_abelian = r.derived_order == 1;
  const std::uint64_t p = prime_of_power(r.order);
  r.is_special = p != 0 && st.frattini && st.centre.elements == st.derived.elements &&
                 st.derived.elements == st.frattini->elements && !r.is_abelian;
  r.is_extraspecial = r.is_special && r.centre_order == p;
  r.class_sizes = class_sizes(G, &st.class_of);
  r.fingerprint = fnv1a_hex(r.canonical_string());
  if (keep) *keep = std::move(st);
  return r;
}

}  // namespace gq
