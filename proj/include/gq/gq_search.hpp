#pragma once

// Automorphism groups of, and isomorphisms between, finite incidence
// structures by individualisation and equitable refinement of the
// collinearity graph.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gq/error.hpp"
#include "gq/incidence.hpp"
#include "gq/permutation.hpp"

namespace gq {

/// Largest structure the search accepts.
inline constexpr int kAutSearchMaxPoints = 400;

namespace detail {

// An ordered partition of the points plus the history of how refinement
// split it. Equal traces at equal depth are necessary for two nodes to be
// related by an isomorphism.
struct Partition {
  std::vector<std::vector<int>> cells;
  std::vector<std::int64_t> trace;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.size();
    return n;
  }
  int first_nonsingleton() const {
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (cells[i].size() > 1) return static_cast<int>(i);
    return -1;
  }
  std::vector<int> order() const {
    std::vector<int> out;
    for (const auto& c : cells) out.insert(out.end(), c.begin(), c.end());
    return out;
  }
};

class Refiner {
 public:
  explicit Refiner(const IncidenceGQ& gq) : gq_(gq), n_(gq.npoints()) {}

  Partition unit() const {
    Partition p;
    std::vector<int> all(n_);
    for (int i = 0; i < n_; ++i) all[i] = i;
    p.cells.push_back(all);
    refine(p, {0});
    return p;
  }

  // Moves v to a singleton cell in front of its cell, then refines.
  Partition individualise(const Partition& p, int cell, int v) const {
    Partition out = p;
    auto& c = out.cells[cell];
    c.erase(std::find(c.begin(), c.end(), v));
    out.cells.insert(out.cells.begin() + cell, std::vector<int>{v});
    out.trace.push_back(-1);
    out.trace.push_back(cell);
    refine(out, {cell});
    return out;
  }

 private:
  int neighbours_in(int v, const std::vector<std::uint64_t>& s) const {
    const auto& w = gq_.closed_neighbourhood(v).words();
    int c = 0;
    for (std::size_t i = 0; i < w.size(); ++i) c += __builtin_popcountll(w[i] & s[i]);
    return c;
  }

  // Splits cells by neighbour counts into every splitter until equitable.
  // Splitters are snapshots of cells taken when they were queued.
  void refine(Partition& p, std::vector<int> queue_cells) const {
    std::vector<std::vector<std::uint64_t>> queue;
    const std::size_t words = (n_ + 63) / 64;
    auto as_bits = [&](const std::vector<int>& cell) {
      std::vector<std::uint64_t> b(words, 0);
      for (int v : cell) b[v >> 6] |= 1ULL << (v & 63);
      return b;
    };
    for (int c : queue_cells) queue.push_back(as_bits(p.cells[c]));
    std::vector<int> cnt(n_);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const auto splitter = queue[qi];
      for (std::size_t ci = 0; ci < p.cells.size(); ++ci) {
        auto& cell = p.cells[ci];
        if (cell.size() == 1) continue;
        bool uniform = true;
        for (int v : cell) {
          cnt[v] = neighbours_in(v, splitter);
          uniform = uniform && cnt[v] == cnt[cell[0]];
        }
        if (uniform) continue;
        std::map<int, std::vector<int>> parts;
        for (int v : cell) parts[cnt[v]].push_back(v);
        std::vector<std::vector<int>> pieces;
        p.trace.push_back(static_cast<std::int64_t>(ci));
        for (auto& [k, part] : parts) {
          p.trace.push_back(k);
          p.trace.push_back(static_cast<std::int64_t>(part.size()));
          pieces.push_back(std::move(part));
        }
        for (const auto& piece : pieces) queue.push_back(as_bits(piece));
        p.cells.erase(p.cells.begin() + ci);
        p.cells.insert(p.cells.begin() + ci, pieces.begin(), pieces.end());
        ci += pieces.size() - 1;
      }
    }
    p.trace.push_back(static_cast<std::int64_t>(p.cells.size()));
  }

  const IncidenceGQ& gq_;
  int n_;
};

inline std::set<std::vector<int>> line_set(const IncidenceGQ& gq) {
  return std::set<std::vector<int>>(gq.lines().begin(), gq.lines().end());
}

// The map a[i] -> b[i] as a permutation-like image vector when it sends
// lines of `from` onto lines of `to`.
inline std::optional<std::vector<int>> leaf_map(const std::vector<int>& a, const std::vector<int>& b,
                                                const IncidenceGQ& from, const std::set<std::vector<int>>& to_lines) {
  std::vector<int> img(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) img[a[i]] = b[i];
  std::vector<int> l;
  for (const auto& line : from.lines()) {
    l.clear();
    for (int p : line) l.push_back(img[p]);
    std::sort(l.begin(), l.end());
    if (!to_lines.count(l)) return std::nullopt;
  }
  return img;
}

struct SearchBudget {
  std::uint64_t nodes = 0;
  std::uint64_t limit = 0;  // 0 = unlimited
  void tick() {
    if (limit && ++nodes > limit) throw BudgetExceeded("search exceeded " + std::to_string(limit) + " nodes");
  }
};

// Depth-first search below `node` (at `depth` on the path) for a leaf whose
// trace matches the reference path and whose map from the reference leaf is
// an isomorphism. `prefix` holds the individualised points so far; when
// `aut` is given, only one candidate per orbit of its pointwise stabiliser
// of the prefix is tried.
struct PathSearch {
  const Refiner& refiner;
  const IncidenceGQ& source;  // geometry of the reference leaf
  const std::set<std::vector<int>>& target_lines;
  const std::vector<Partition>& reference;  // nodes on the reference path
  const PermGroup* aut = nullptr;
  SearchBudget* budget = nullptr;

  std::optional<std::vector<int>> run(const Partition& node, std::size_t depth, std::vector<int>& prefix) const {
    if (budget) budget->tick();
    if (node.trace != reference[depth].trace) return std::nullopt;
    const int cell = node.first_nonsingleton();
    if (cell < 0) return leaf_map(reference.back().order(), node.order(), source, target_lines);
    std::vector<int> candidates = node.cells[cell];
    if (aut) {
      std::vector<Permutation> gens = prefix.empty() ? aut->generators() : pointwise_stabilizer(*aut, prefix);
      std::vector<char> seen(node.total(), 0);
      std::vector<int> reps;
      for (int v : candidates) {
        if (seen[v]) continue;
        reps.push_back(v);
        std::vector<int> orb{v};
        seen[v] = 1;
        for (std::size_t i = 0; i < orb.size(); ++i)
          for (const auto& g : gens)
            if (!seen[g[orb[i]]]) {
              seen[g[orb[i]]] = 1;
              orb.push_back(g[orb[i]]);
            }
      }
      candidates.swap(reps);
    }
    for (int v : candidates) {
      prefix.push_back(v);
      auto found = run(refiner.individualise(node, cell, v), depth + 1, prefix);
      prefix.pop_back();
      if (found) return found;
    }
    return std::nullopt;
  }

  static std::vector<Permutation> pointwise_stabilizer(const PermGroup& G, const std::vector<int>& pts) {
    return G.pointwise_stabilizer_generators(pts);
  }
};

inline void require_searchable(const IncidenceGQ& gq) {
  if (gq.npoints() > kAutSearchMaxPoints)
    throw TooLarge("automorphism search is limited to " + std::to_string(kAutSearchMaxPoints) + " points, got " +
                   std::to_string(gq.npoints()));
}

// Nodes on the first path: always the first point of the first nonsingleton cell.
inline std::vector<Partition> first_path(const Refiner& r) {
  std::vector<Partition> path{r.unit()};
  while (true) {
    const int cell = path.back().first_nonsingleton();
    if (cell < 0) return path;
    path.push_back(r.individualise(path.back(), cell, path.back().cells[cell][0]));
  }
}

}  // namespace detail

/// The automorphism group of an incidence structure, acting on points.
inline PermGroup aut_incidence(const IncidenceGQ& gq, std::uint64_t node_limit = 0) {
  detail::require_searchable(gq);
  const int n = gq.npoints();
  const detail::Refiner refiner(gq);
  const auto path = detail::first_path(refiner);
  const auto lines = detail::line_set(gq);
  detail::SearchBudget budget{0, node_limit};
  std::vector<int> base;
  for (std::size_t d = 0; d + 1 < path.size(); ++d) {
    const auto& node = path[d];
    base.push_back(node.cells[node.first_nonsingleton()][0]);
  }
  std::vector<Permutation> gens;
  PermGroup G = PermGroup::trivial(n);
  // deepest level first: at level d the known stabiliser of base[0..d-1]
  // is complete, so its orbit of base[d] can be grown to the true orbit
  for (int d = static_cast<int>(base.size()) - 1; d >= 0; --d) {
    const auto& node = path[d];
    const int cell = node.first_nonsingleton();
    const std::vector<int> prefix(base.begin(), base.begin() + d);
    auto orbit_under = [&](const std::vector<Permutation>& stab) {
      std::vector<char> in(n, 0);
      std::vector<int> orb{base[d]};
      in[base[d]] = 1;
      for (std::size_t i = 0; i < orb.size(); ++i)
        for (const auto& g : stab)
          if (!in[g[orb[i]]]) {
            in[g[orb[i]]] = 1;
            orb.push_back(g[orb[i]]);
          }
      return in;
    };
    std::vector<Permutation> stab = prefix.empty() ? gens : G.pointwise_stabilizer_generators(prefix);
    auto in_orbit = orbit_under(stab);
    std::vector<char> rejected(n, 0);
    for (int w : node.cells[cell]) {
      if (in_orbit[w] || rejected[w]) continue;
      const detail::PathSearch search{refiner, gq, lines, path, nullptr, &budget};
      std::vector<int> pre = prefix;
      pre.push_back(w);
      auto found = search.run(refiner.individualise(node, cell, w), d + 1, pre);
      if (!found) {
        rejected[w] = 1;
        continue;
      }
      gens.emplace_back(*found);
      G = PermGroup(n, gens);
      stab = prefix.empty() ? gens : G.pointwise_stabilizer_generators(prefix);
      in_orbit = orbit_under(stab);
    }
  }
  return G;
}

/// An isomorphism from a to b as a point map (image of point i at index i),
/// or nullopt when none exists.
inline std::optional<Permutation> gq_isomorphic(const IncidenceGQ& a, const IncidenceGQ& b,
                                                std::uint64_t node_limit = 0) {
  detail::require_searchable(a);
  detail::require_searchable(b);
  if (a.npoints() != b.npoints() || a.nlines() != b.nlines()) return std::nullopt;
  const detail::Refiner ra(a), rb(b);
  const auto path = detail::first_path(ra);
  const auto aut_b = aut_incidence(b, node_limit);
  const auto lines_b = detail::line_set(b);
  detail::SearchBudget budget{0, node_limit};
  const detail::PathSearch search{rb, a, lines_b, path, &aut_b, &budget};
  std::vector<int> prefix;
  auto found = search.run(rb.unit(), 0, prefix);
  if (!found) return std::nullopt;
  return Permutation(*found);
}

}  // namespace gq
