#pragma once

// Point-regular subgroups of an automorphism group of a finite geometry,
// up to conjugacy: by descent through maximal subgroups of a Sylow subgroup
// when the point count is a prime power, otherwise by growing semiregular
// subgroups from transversal elements.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "gq/action.hpp"
#include "gq/constructions.hpp"
#include "gq/finite_group.hpp"
#include "gq/gq_search.hpp"
#include "gq/incidence.hpp"
#include "gq/invariants.hpp"
#include "gq/isomorphism.hpp"
#include "gq/permutation.hpp"

namespace gq {

// ---------------------------------------------------------------------------
// Sylow subgroups

/// Random elements of a permutation group by product replacement.
class RandomElements {
 public:
  RandomElements(const std::vector<Permutation>& gens, int degree, std::uint64_t seed = 0) : rng_(seed) {
    pool_ = gens;
    if (pool_.empty()) pool_.push_back(Permutation(degree));
    const std::size_t base = pool_.size();
    while (pool_.size() < 10) pool_.push_back(pool_[pool_.size() % base]);
    acc_ = Permutation(degree);
    for (int i = 0; i < 60; ++i) next();
  }

  Permutation next() {
    const std::size_t i = rng_() % pool_.size();
    std::size_t j = rng_() % pool_.size();
    if (j == i) j = (j + 1) % pool_.size();
    pool_[i] = (rng_() & 1) ? pool_[i] * pool_[j] : pool_[j] * pool_[i];
    acc_ = acc_ * pool_[i];
    return acc_;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<Permutation> pool_;
  Permutation acc_;
};

inline std::uint64_t p_part(std::uint64_t n, std::uint64_t p) {
  std::uint64_t out = 1;
  while (n % p == 0) {
    n /= p;
    out *= p;
  }
  return out;
}

inline bool is_power_of(std::uint64_t n, std::uint64_t p) { return p_part(n, p) == n; }

/// A Sylow p-subgroup of A containing the p-group generated by `start`.
/// p-parts of random elements are added while the result stays a p-group;
/// a maximal p-subgroup is Sylow. Throws BudgetExceeded after max_tries
/// consecutive failures.
inline PermGroup sylow_subgroup(const PermGroup& A, std::uint64_t p, std::vector<Permutation> start = {},
                                std::uint64_t seed = 0, std::uint64_t max_tries = 20000) {
  const std::uint64_t target = p_part(A.order(), p);
  for (const auto& g : start)
    if (!A.contains(g)) throw NotCompatible("starting generator is not in the ambient group");
  PermGroup P(A.degree(), start);
  if (!is_power_of(P.order(), p)) throw NotCompatible("starting generators do not generate a p-group");
  RandomElements rnd(A.generators(), A.degree(), seed);
  std::uint64_t failures = 0;
  while (P.order() < target) {
    if (++failures > max_tries) throw BudgetExceeded("no Sylow extension found after " + std::to_string(max_tries) + " tries");
    const Permutation r = rnd.next();
    const long long o = r.order();
    const long long m = static_cast<long long>(static_cast<std::uint64_t>(o) / p_part(o, p));
    const Permutation h = r.pow(m);
    if (h.is_identity() || P.contains(h)) continue;
    auto gens = P.generators();
    gens.push_back(h);
    PermGroup bigger(A.degree(), gens);
    if (!is_power_of(bigger.order(), p)) continue;
    P = std::move(bigger);
    failures = 0;
  }
  return P;
}

// ---------------------------------------------------------------------------
// Result table

struct RegularClass {
  std::vector<Permutation> generators;  // of the representative
  int conjugacy_id = 0;
  int isomorphism_id = 0;
  GroupInvariantReport invariants;
  std::vector<std::string> flags;  // "E", "P", "S_{U,W} dim U = k"
  std::string description;
  std::size_t members_found = 0;  // subgroups of the Sylow subgroup in this class
};

struct RegularClassTable {
  std::string gq_provenance;
  std::string ambient_provenance;
  std::uint64_t q = 0;  // 0 when unknown
  int degree = 0;
  std::uint64_t ambient_order = 0;
  std::uint64_t sylow_order = 0;
  std::vector<RegularClass> classes;
  int num_isomorphism_types = 0;
  bool classification_partial = false;
  bool complete = true;
  std::vector<std::vector<Permutation>> frontier;  // unexplored subgroups when incomplete
  std::uint64_t nodes = 0;
  std::uint64_t seed = 0;

  std::size_t num_classes() const { return classes.size(); }

  /// Comment column in the style of the published table.
  std::string comment() const {
    std::vector<std::string> parts;
    std::map<std::string, int> desc;
    bool any_desc = false;
    for (const auto& c : classes)
      if (!c.description.empty()) {
        ++desc[c.description];
        any_desc = true;
      }
    if (any_desc && classes.size() <= 6) {
      for (const auto& [d, k] : desc) parts.push_back(k == 1 ? d : std::to_string(k) + " " + d);
    } else {
      std::vector<std::string> named;
      for (const auto& c : classes)
        for (const auto& f : c.flags)
          if (f == "E" || f == "P")
            if (std::find(named.begin(), named.end(), f) == named.end()) named.push_back(f);
      if (named.size() == classes.size() && !named.empty()) {
        std::string s = named[0];
        for (std::size_t i = 1; i < named.size(); ++i) s += " and " + named[i];
        parts.push_back(s);
      } else if (num_isomorphism_types > 0) {
        parts.push_back(std::to_string(num_isomorphism_types) + " isomorphism types");
      }
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
    if (!complete) out += (out.empty() ? "" : ", ") + std::string("incomplete");
    return out;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["gq"] = {{"provenance", gq_provenance}, {"points", degree}};
    if (q) j["gq"]["q"] = q;
    j["ambient"] = {{"provenance", ambient_provenance}, {"order", ambient_order}, {"sylow_order", sylow_order}};
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : classes) {
      nlohmann::ordered_json e;
      e["conjugacy_id"] = c.conjugacy_id;
      e["isomorphism_id"] = c.isomorphism_id;
      e["description"] = c.description;
      e["flags"] = c.flags;
      e["representative"] = write_grp(PermGroup(degree, c.generators));
      e["invariants"] = c.invariants.to_json();
      arr.push_back(e);
    }
    j["classes"] = arr;
    j["num_classes"] = classes.size();
    j["num_isomorphism_types"] = num_isomorphism_types;
    j["comment"] = comment();
    j["complete"] = complete;
    if (classification_partial) j["classification_partial"] = true;
    if (!complete) {
      auto fr = nlohmann::ordered_json::array();
      for (const auto& gens : frontier) fr.push_back(write_grp(PermGroup(degree, gens)));
      j["frontier"] = fr;
    }
    j["seed"] = seed;
    return j;
  }
};

struct SearchLimits {
  std::uint64_t max_nodes = 0;  // 0 = unlimited
  double max_seconds = 0;       // 0 = unlimited
  std::uint64_t seed = 0;       // for the random Sylow construction
};

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

// Regular subgroup membership via the image of point 0.
class RegularLookup {
 public:
  explicit RegularLookup(const std::vector<Permutation>& elements) {
    if (elements.empty()) return;
    by_image_.assign(elements[0].degree(), Permutation());
    for (const auto& e : elements) by_image_[e[0]] = e;
  }
  bool contains(const Permutation& g) const { return by_image_[g[0]] == g; }

 private:
  std::vector<Permutation> by_image_;
};

inline std::string describe_small(const GroupInvariantReport& r) {
  if (r.order == 8) {
    if (r.is_abelian) {
      if (r.exponent == 2) return "2^3";
      if (r.exponent == 4) return "C4xC2";
      return "C8";
    }
    return r.element_order_histogram.count(2) && r.element_order_histogram.at(2) == 5 ? "D8" : "Q8";
  }
  if (r.order == 27 && r.is_extraspecial) return r.exponent == 3 ? "3^{1+2} exponent 3" : "3^{1+2} exponent 9";
  return "";
}

struct Node {
  std::vector<Index> gens;
  std::vector<Index> elements;  // sorted
};

inline std::uint64_t hash_elements(const std::vector<Index>& xs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Index x : xs) h = (h ^ x) * 0x100000001b3ULL;
  return h;
}

}  // namespace detail

struct KnownGroup {
  std::string flag;
  std::vector<Permutation> generators;
};

/// The E, P and S_{U,W} subgroups acting on the derived points of W(3,q),
/// for flagging enumerated classes.
inline std::vector<KnownGroup> known_groups(const FieldSpec& F, const IncidenceGQ& derived) {
  std::vector<KnownGroup> out;
  out.push_back({"E", action_from_linear(build_E(F).gens, derived).generators()});
  out.push_back({"P", action_from_linear(build_P(F).gens, derived).generators()});
  for (int k = 1; k < F.f(); ++k)
    for (const auto& d : all_decompositions(F, k))
      out.push_back({"S_{U,W} dim U = " + std::to_string(k), action_from_linear(build_SUW(F, d).gens, derived).generators()});
  return out;
}

namespace detail {

struct RegularLeaf {
  std::vector<Permutation> gens;
  std::vector<Permutation> elements;
  GroupInvariantReport inv;
  IndexedGroup group;
};

inline RegularLeaf make_leaf(std::vector<Permutation> gens) {
  const int n = gens.front().degree();
  auto C = close_group(Permutation(n), gens, kIsoMaxOrder + 1);
  RegularLeaf l{std::move(gens), std::move(C.elements), {}, std::move(C.group)};
  l.inv = invariant_report(l.group);
  return l;
}

// Fuses regular subgroups under `ambient` (through the stabiliser of point 0),
// orders the classes canonically, flags known groups and assigns
// isomorphism types.
inline void fuse_and_classify(RegularClassTable& table, std::vector<RegularLeaf> found, const PermGroup& ambient,
                              const std::vector<KnownGroup>& known) {
  const int n = table.degree;
  const PermGroup A0(n, ambient.pointwise_stabilizer_generators({0}));
  const auto a0 = A0.elements();
  auto conjugate = [&](const std::vector<Permutation>& gens, const RegularLookup& target) {
    for (const auto& g : a0) {
      const Permutation gi = g.inverse();
      bool ok = true;
      for (const auto& x : gens) {
        if (!target.contains(gi * x * g)) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
    return false;
  };

  std::vector<int> class_of(found.size(), -1);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (std::size_t r = 0; r < reps.size() && class_of[i] < 0; ++r) {
      const auto& R = found[reps[r]];
      if (R.inv.fingerprint != found[i].inv.fingerprint) continue;
      if (conjugate(found[i].gens, RegularLookup(R.elements))) class_of[i] = static_cast<int>(r);
    }
    if (class_of[i] < 0) {
      class_of[i] = static_cast<int>(reps.size());
      reps.push_back(i);
    }
  }

  // canonical order: fingerprint, then the sorted image lists of the class's least member
  std::vector<std::vector<std::vector<int>>> key(reps.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    std::vector<std::vector<int>> k;
    for (const auto& e : found[i].elements) k.emplace_back(e.images().begin(), e.images().end());
    std::sort(k.begin(), k.end());
    auto& cur = key[class_of[i]];
    if (cur.empty() || k < cur) cur = k;
  }
  std::vector<std::size_t> order(reps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& fa = found[reps[a]].inv.fingerprint;
    const auto& fb = found[reps[b]].inv.fingerprint;
    if (fa != fb) return fa < fb;
    return key[a] < key[b];
  });

  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t r = order[pos];
    const auto& L = found[reps[r]];
    RegularClass c;
    c.conjugacy_id = static_cast<int>(pos);
    c.invariants = L.inv;
    c.description = describe_small(L.inv);
    for (std::size_t i = 0; i < found.size(); ++i)
      if (class_of[i] == static_cast<int>(r)) ++c.members_found;
    // representative: the class member with the least sorted image lists
    for (std::size_t i = 0; i < found.size(); ++i) {
      if (class_of[i] != static_cast<int>(r)) continue;
      std::vector<std::vector<int>> k;
      for (const auto& e : found[i].elements) k.emplace_back(e.images().begin(), e.images().end());
      std::sort(k.begin(), k.end());
      if (k == key[r]) {
        c.generators = found[i].gens;
        break;
      }
    }
    const RegularLookup lookup(L.elements);
    for (const auto& kg : known) {
      if (std::find(c.flags.begin(), c.flags.end(), kg.flag) != c.flags.end()) continue;
      const PermGroup K(n, kg.generators);
      if (K.order() != static_cast<std::uint64_t>(n)) continue;
      if (conjugate(kg.generators, lookup)) c.flags.push_back(kg.flag);
    }
    table.classes.push_back(std::move(c));
  }

  // isomorphism types; a class joins a type when any member of the type is
  // isomorphic to it, so one unresolved pair does not split a type
  std::vector<std::vector<std::size_t>> types;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& L = found[reps[order[pos]]];
    int id = -1;
    bool unresolved = false;
    for (std::size_t t = 0; t < types.size() && id < 0; ++t)
      for (std::size_t m : types[t]) {
        const auto& T = found[reps[order[m]]];
        if (T.inv.fingerprint != L.inv.fingerprint) break;
        const auto res = is_isomorphic_small(L.group, T.group);
        if (res.verdict == IsoVerdict::Found) {
          id = static_cast<int>(t);
          break;
        }
        if (res.verdict == IsoVerdict::Unknown) unresolved = true;
      }
    if (id < 0) {
      if (unresolved) table.classification_partial = true;
      id = static_cast<int>(types.size());
      types.emplace_back();
    }
    types[id].push_back(pos);
    table.classes[pos].isomorphism_id = id;
  }
  table.num_isomorphism_types = static_cast<int>(types.size());
}

}  // namespace detail

namespace detail {

// Elements of <gens> when it is semiregular of order at most bound.
inline std::optional<std::vector<Permutation>> semiregular_closure(const std::vector<Permutation>& gens,
                                                                   std::size_t bound) {
  const int n = gens.front().degree();
  std::vector<Permutation> elems{Permutation(n)};
  std::unordered_set<Permutation> seen{elems[0]};
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const auto& g : gens) {
      Permutation h = elems[i] * g;
      if (seen.count(h)) continue;
      if (elems.size() == bound) return std::nullopt;
      for (int x = 0; x < n; ++x)
        if (h[x] == x) return std::nullopt;
      seen.insert(h);
      elems.push_back(std::move(h));
    }
  return elems;
}

inline bool fixed_point_free(const Permutation& g) {
  for (int x = 0; x < g.degree(); ++x)
    if (g[x] == x) return false;
  return true;
}

inline std::vector<std::vector<int>> subgroup_key(const std::vector<Permutation>& elems) {
  std::vector<std::vector<int>> k;
  for (const auto& e : elems) k.emplace_back(e.images().begin(), e.images().end());
  std::sort(k.begin(), k.end());
  return k;
}

}  // namespace detail

/// Regular subgroups for any point count: grows semiregular subgroups one
/// element at a time, each new element sending point 0 to the least point
/// not yet reached. The first element is chosen up to conjugacy in the
/// stabiliser of points 0 and 1.
inline RegularClassTable enumerate_regular_transversal(const IncidenceGQ& gq, const PermGroup& ambient,
                                                       SearchLimits limits = {},
                                                       const std::vector<KnownGroup>& known = {},
                                                       std::string ambient_provenance = "") {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const int n = gq.npoints();
  if (ambient.degree() != n) throw NotCompatible("ambient group does not act on the geometry's points");
  if (ambient.order() % n != 0) throw NotCompatible("ambient order is not divisible by the point count");
  if (!ambient.is_transitive()) throw NotCompatible("ambient group is not transitive on points");
  if (static_cast<std::size_t>(n) > kIsoMaxOrder) throw TooLarge("point count exceeds " + std::to_string(kIsoMaxOrder));

  RegularClassTable table;
  table.gq_provenance = gq.provenance();
  table.ambient_provenance = std::move(ambient_provenance);
  table.degree = n;
  table.ambient_order = ambient.order();
  table.seed = limits.seed;

  // t[j] sends 0 to j
  std::vector<Permutation> t(n);
  std::vector<char> reached(n, 0);
  t[0] = Permutation(n);
  reached[0] = 1;
  std::vector<int> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto& g : ambient.generators()) {
      const int y = g[queue[i]];
      if (reached[y]) continue;
      reached[y] = 1;
      t[y] = t[queue[i]] * g;
      queue.push_back(y);
    }
  const auto a0 = PermGroup(n, ambient.pointwise_stabilizer_generators({0})).elements();
  auto coset = [&](int j) {
    std::vector<Permutation> out;
    for (const auto& a : a0) {
      Permutation g = a * t[j];
      if (detail::fixed_point_free(g)) out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const Permutation& x, const Permutation& y) { return x.images() < y.images(); });
    return out;
  };

  struct Node {
    std::vector<Permutation> gens, elements;
  };
  std::vector<Node> frontier;
  {
    const auto a01 = PermGroup(n, ambient.pointwise_stabilizer_generators({0, 1})).elements();
    std::unordered_set<Permutation> done;
    for (const auto& g : coset(1)) {
      if (done.count(g)) continue;
      for (const auto& c : a01) done.insert(c.inverse() * g * c);
      if (auto el = detail::semiregular_closure({g}, n)) frontier.push_back({{g}, std::move(*el)});
    }
  }
  std::vector<std::vector<Permutation>> leaves;
  std::set<std::vector<std::vector<int>>> seen;
  auto over_budget = [&] {
    if (limits.max_nodes && table.nodes >= limits.max_nodes) return true;
    return limits.max_seconds > 0 && std::chrono::duration<double>(Clock::now() - t0).count() > limits.max_seconds;
  };
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (std::size_t fi = 0; fi < frontier.size(); ++fi) {
      const Node& H = frontier[fi];
      if (H.elements.size() == static_cast<std::size_t>(n)) {
        leaves.push_back(H.gens);
        continue;
      }
      if (over_budget()) {
        table.complete = false;
        for (std::size_t r = fi; r < frontier.size(); ++r) table.frontier.push_back(frontier[r].gens);
        for (const auto& nd : next) table.frontier.push_back(nd.gens);
        next.clear();
        break;
      }
      ++table.nodes;
      std::vector<char> covered(n, 0);
      for (const auto& h : H.elements) covered[h[0]] = 1;
      const int j = static_cast<int>(std::find(covered.begin(), covered.end(), 0) - covered.begin());
      for (const auto& g : coset(j)) {
        bool ok = true;
        for (const auto& h : H.elements)
          if (!detail::fixed_point_free(h * g)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        auto gens = H.gens;
        gens.push_back(g);
        auto el = detail::semiregular_closure(gens, n);
        if (!el) continue;
        if (!seen.insert(detail::subgroup_key(*el)).second) continue;
        next.push_back({std::move(gens), std::move(*el)});
      }
    }
    frontier.swap(next);
  }

  std::vector<detail::RegularLeaf> found;
  for (auto& gens : leaves) found.push_back(detail::make_leaf(std::move(gens)));
  detail::fuse_and_classify(table, std::move(found), ambient, known);
  for (auto& c : table.classes)
    if (c.description.empty() && !prime_of_power(c.invariants.order))
      c.description = "|Z|=" + std::to_string(c.invariants.centre_order) + ", |G'|=" +
                      std::to_string(c.invariants.derived_order);
  return table;
}

/// Enumerates regular subgroups of `ambient` on the points of `gq`, up to
/// conjugacy in `ambient`, starting from a Sylow subgroup containing the
/// p-group generated by `sylow_start`.
inline RegularClassTable enumerate_regular(const IncidenceGQ& gq, const PermGroup& ambient,
                                           const std::vector<Permutation>& sylow_start, SearchLimits limits = {},
                                           const std::vector<KnownGroup>& known = {},
                                           std::string ambient_provenance = "") {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const int n = gq.npoints();
  if (ambient.degree() != n) throw NotCompatible("ambient group does not act on the geometry's points");
  if (ambient.order() % n != 0) throw NotCompatible("ambient order is not divisible by the point count");
  const std::uint64_t p = prime_of_power(n);
  if (p == 0) return enumerate_regular_transversal(gq, ambient, limits, known, std::move(ambient_provenance));

  RegularClassTable table;
  table.gq_provenance = gq.provenance();
  table.ambient_provenance = std::move(ambient_provenance);
  table.degree = n;
  table.ambient_order = ambient.order();

  table.seed = limits.seed;
  const PermGroup sylow = sylow_subgroup(ambient, p, sylow_start, limits.seed);
  table.sylow_order = sylow.order();
  if (sylow.order() > kIsoMaxOrder)
    throw TooLarge("Sylow subgroup of order " + std::to_string(sylow.order()) + " exceeds " + std::to_string(kIsoMaxOrder));
  const auto S = close_group(Permutation(n), sylow.generators(), kIsoMaxOrder, kIsoMaxOrder);
  const IndexedGroup& G = S.group;

  auto transitive = [&](const std::vector<Index>& gens) {
    std::vector<char> seen(n, 0);
    std::vector<int> orb{0};
    seen[0] = 1;
    for (std::size_t i = 0; i < orb.size(); ++i)
      for (Index g : gens) {
        const int y = S.elements[g][orb[i]];
        if (!seen[y]) {
          seen[y] = 1;
          orb.push_back(y);
        }
      }
    return static_cast<int>(orb.size()) == n;
  };

  // maximal subgroups of H: preimages of hyperplanes of H / Phi(H)
  auto maximal_subgroups = [&](const detail::Node& node) {
    Subgroup H = subgroup_closure(G, node.gens);
    const auto I = induced_group(G, H);
    const auto phi_local = frattini_subgroup(I.group);
    std::vector<Index> phi_gens;
    for (Index x : phi_local->gens) phi_gens.push_back(I.global[x]);
    Subgroup Phi = subgroup_closure(G, phi_gens);
    std::vector<Index> basis;  // images form a basis of H / Phi
    {
      std::vector<Index> gens = phi_gens;
      Subgroup cur = Phi;
      for (Index h : H.elements) {
        if (cur.contains(h)) continue;
        basis.push_back(h);
        gens.push_back(h);
        cur = subgroup_closure(G, gens);
        if (cur.size() == H.size()) break;
      }
    }
    const int d = static_cast<int>(basis.size());
    std::vector<std::vector<Index>> out;
    // functionals c in GF(p)^d normalised with leading coefficient 1
    std::vector<std::uint64_t> c(d, 0);
    for (int lead = 0; lead < d; ++lead) {
      std::uint64_t count = 1;
      for (int i = lead + 1; i < d; ++i) count *= p;
      for (std::uint64_t code = 0; code < count; ++code) {
        std::fill(c.begin(), c.end(), 0);
        c[lead] = 1;
        std::uint64_t x = code;
        for (int i = d - 1; i > lead; --i) {
          c[i] = x % p;
          x /= p;
        }
        std::vector<Index> gens = phi_gens;
        for (int j = 0; j < d; ++j) {
          if (j == lead) continue;
          // b_j - c_j b_lead lies in the kernel
          gens.push_back(G.mul(basis[j], G.pow(basis[lead], static_cast<long long>((p - c[j]) % p))));
        }
        out.push_back(gens);
      }
    }
    return out;
  };

  std::vector<detail::Node> frontier{{G.generators(), {}}};
  std::vector<detail::Node> leaves;
  std::unordered_set<std::uint64_t> seen;
  auto over_budget = [&] {
    if (limits.max_nodes && table.nodes >= limits.max_nodes) return true;
    if (limits.max_seconds > 0 &&
        std::chrono::duration<double>(Clock::now() - t0).count() > limits.max_seconds)
      return true;
    return false;
  };

  if (sylow.order() == static_cast<std::uint64_t>(n)) {
    if (transitive(G.generators())) leaves.push_back(frontier[0]);
    frontier.clear();
  }
  while (!frontier.empty()) {
    std::vector<detail::Node> next;
    for (std::size_t fi = 0; fi < frontier.size(); ++fi) {
      if (over_budget()) {
        table.complete = false;
        for (std::size_t r = fi; r < frontier.size(); ++r) {
          std::vector<Permutation> gens;
          for (Index g : frontier[r].gens) gens.push_back(S.elements[g]);
          table.frontier.push_back(gens);
        }
        for (const auto& nd : next) {
          std::vector<Permutation> gens;
          for (Index g : nd.gens) gens.push_back(S.elements[g]);
          table.frontier.push_back(gens);
        }
        frontier.clear();
        next.clear();
        break;
      }
      ++table.nodes;
      for (auto& gens : maximal_subgroups(frontier[fi])) {
        if (!transitive(gens)) continue;
        Subgroup M = subgroup_closure(G, gens);
        const auto h = detail::hash_elements(M.elements);
        if (!seen.insert(h).second) continue;
        detail::Node nd{M.gens, M.elements};
        if (M.size() == static_cast<std::size_t>(n)) leaves.push_back(std::move(nd));
        else next.push_back(std::move(nd));
      }
    }
    frontier.swap(next);
  }

  std::vector<detail::RegularLeaf> found;
  for (const auto& nd : leaves) {
    std::vector<Permutation> gens;
    for (Index g : nd.gens) gens.push_back(S.elements[g]);
    found.push_back(detail::make_leaf(std::move(gens)));
  }
  detail::fuse_and_classify(table, std::move(found), ambient, known);
  return table;
}

// ---------------------------------------------------------------------------
// Derived quadrangles of W(3,q)

struct DerivedSetup {
  IncidenceGQ gq;
  PermGroup ambient;
  std::vector<Permutation> sylow_start;
  std::vector<KnownGroup> known;
  std::string ambient_provenance;
};

/// The derived GQ of W(3,q) with the ambient group used for its row of the
/// regular-subgroup table: the stabiliser group for q = 2 and q >= 5, the
/// full automorphism group for q = 3, 4.
inline DerivedSetup derived_setup(const FieldSpec& F) {
  auto d = derived_w3(F);
  const std::uint64_t q = F.q();
  const auto stab = action_from_linear(build_ambient(F).gens, d);
  const auto start = action_from_linear(build_ambient_sylow(F).gens, d).generators();
  auto known = known_groups(F, d);
  if (q == 3 || q == 4) {
    auto A = aut_incidence(d);
    return {std::move(d), std::move(A), start, std::move(known), "automorphism group of the derived GQ"};
  }
  return {std::move(d), stab, start, std::move(known), "stabiliser of x in the semisimilarity group"};
}

/// The regular-subgroup table of the derived GQ of W(3,q).
inline RegularClassTable enumerate_derived(const FieldSpec& F, SearchLimits limits = {}) {
  const auto s = derived_setup(F);
  auto t = enumerate_regular(s.gq, s.ambient, s.sylow_start, limits, s.known, s.ambient_provenance);
  t.q = F.q();
  return t;
}

}  // namespace gq
