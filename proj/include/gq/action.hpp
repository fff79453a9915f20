#pragma once

// Induced actions of semilinear maps on labelled GQ points, and regularity
// tests for permutation groups and concrete matrix groups.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gq/finite_group.hpp"
#include "gq/incidence.hpp"
#include "gq/matrix.hpp"
#include "gq/permutation.hpp"

namespace gq {

/// The point permutation induced by g. Scalars act trivially.
inline Permutation point_permutation(const SemilinearMap& g, const IncidenceGQ& gq) {
  if (!gq.has_labels()) throw NotCompatible("geometry has no vector labels");
  if (&g.field() != gq.field()) throw SpecMismatch("map and geometry are over different fields");
  std::vector<int> img(gq.npoints());
  std::vector<char> hit(gq.npoints(), 0);
  for (int p = 0; p < gq.npoints(); ++p) {
    const auto q = gq.point_of(g.apply(gq.labels()[p]));
    if (!q) throw NotAnAutomorphism("image of point " + std::to_string(p) + " is not a point of the geometry");
    if (hit[*q]) throw NotAnAutomorphism("map is not injective on points (point " + std::to_string(p) + ")");
    hit[*q] = 1;
    img[p] = *q;
  }
  return Permutation(img);
}

inline PermGroup action_from_linear(const std::vector<SemilinearMap>& maps, const IncidenceGQ& gq) {
  std::vector<Permutation> gens;
  gens.reserve(maps.size());
  for (const auto& m : maps) gens.push_back(point_permutation(m, gq));
  return PermGroup(gq.npoints(), std::move(gens));
}

/// True when the permutation maps lines to lines.
inline bool preserves_lines(const Permutation& g, const IncidenceGQ& gq) {
  std::set<std::vector<int>> lines(gq.lines().begin(), gq.lines().end());
  for (const auto& l : gq.lines()) {
    std::vector<int> img;
    for (int p : l) img.push_back(g[p]);
    std::sort(img.begin(), img.end());
    if (!lines.count(img)) return false;
  }
  return true;
}

struct RegularityReport {
  bool transitive = false;
  bool semiregular = false;
  bool regular = false;
  std::uint64_t order = 0;
  std::size_t orbits = 0;
};

/// Regularity of G on an invariant point set (all points when empty).
inline RegularityReport regularity(const PermGroup& G, const std::vector<int>& on = {}) {
  std::vector<int> pts = on;
  if (pts.empty())
    for (int i = 0; i < G.degree(); ++i) pts.push_back(i);
  std::vector<int> local(G.degree(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) local[pts[i]] = static_cast<int>(i);
  std::vector<Permutation> gens;
  for (const auto& g : G.generators()) {
    std::vector<int> img(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const int y = local[g[pts[i]]];
      if (y < 0) throw NotInvariant("point set is not invariant: " + std::to_string(pts[i]) + " maps outside");
      img[i] = y;
    }
    gens.emplace_back(img);
  }
  const PermGroup H(static_cast<int>(pts.size()), gens);
  RegularityReport r;
  r.order = H.order();
  std::vector<char> seen(pts.size(), 0);
  r.semiregular = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (seen[i]) continue;
    ++r.orbits;
    const auto orb = H.orbit(static_cast<int>(i));
    for (int x : orb) seen[x] = 1;
    if (orb.size() != r.order) r.semiregular = false;
  }
  r.transitive = r.orbits == 1;
  r.regular = r.transitive && r.semiregular;
  return r;
}

inline bool is_regular(const PermGroup& G, const std::vector<int>& on = {}) { return regularity(G, on).regular; }
inline bool is_semiregular(const PermGroup& G, const std::vector<int>& on = {}) {
  return regularity(G, on).semiregular;
}

/// Regularity of a fully enumerated linear group on the labelled points:
/// every element moves the base point to a distinct point and |G| = |points|.
inline bool regular_on_points(const std::vector<SemilinearMap>& elements, const IncidenceGQ& gq, int base = 0) {
  if (static_cast<int>(elements.size()) != gq.npoints()) return false;
  std::vector<char> hit(gq.npoints(), 0);
  for (const auto& g : elements) {
    const auto q = gq.point_of(g.apply(gq.labels()[base]));
    if (!q) throw NotAnAutomorphism("group element maps a point off the geometry");
    if (hit[*q]) return false;
    hit[*q] = 1;
  }
  return true;
}

}  // namespace gq
