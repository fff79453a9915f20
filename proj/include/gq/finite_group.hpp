#pragma once

// Finite groups held as indexed element sets. Elements are numbered
// 0..N-1 with 0 the identity; a group is determined by the right action of
// its generators on indices. Products follow generator words from a
// breadth-first spanning tree, or a full table for small N.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "gq/error.hpp"

namespace gq {

using Index = std::uint32_t;

class IndexedGroup {
 public:
  static constexpr std::size_t kTableLimit = 1024;

  /// right[k][i] is the index of (element i) * (generator k). A full
  /// multiplication table is kept when the order is at most table_limit.
  explicit IndexedGroup(std::vector<std::vector<Index>> right, std::size_t table_limit = kTableLimit)
      : right_(std::move(right)) {
    n_ = right_.empty() ? 1 : right_[0].size();
    for (const auto& r : right_)
      if (r.size() != n_) throw DimensionMismatch("generator tables of unequal size");
    right_inv_.assign(right_.size(), std::vector<Index>(n_));
    for (std::size_t k = 0; k < right_.size(); ++k)
      for (Index i = 0; i < n_; ++i) right_inv_[k][right_[k][i]] = i;
    parent_.assign(n_, 0);
    parent_gen_.assign(n_, 0);
    depth_.assign(n_, 0);
    std::vector<char> seen(n_, 0);
    std::vector<Index> order{0};
    seen[0] = 1;
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
      const Index x = order[qi];
      for (std::size_t k = 0; k < right_.size(); ++k) {
        const Index y = right_[k][x];
        if (seen[y]) continue;
        seen[y] = 1;
        parent_[y] = x;
        parent_gen_[y] = static_cast<std::uint16_t>(k);
        depth_[y] = depth_[x] + 1;
        order.push_back(y);
      }
    }
    if (order.size() != n_) throw DimensionMismatch("generators do not reach every element");
    bfs_ = std::move(order);
    if (n_ <= table_limit) build_table();
    inverse_.assign(n_, 0);
    for (Index i = 0; i < n_; ++i) {
      Index x = 0;
      // i = g_{k1} ... g_{km}; i^-1 = g_km^-1 ... g_k1^-1
      for (Index y = i; y != 0; y = parent_[y]) x = right_inv_[parent_gen_[y]][x];
      inverse_[i] = x;
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t ngens() const noexcept { return right_.size(); }
  Index identity() const noexcept { return 0; }
  Index generator(std::size_t k) const { return right_.at(k)[0]; }
  std::vector<Index> generators() const {
    std::vector<Index> out;
    for (std::size_t k = 0; k < right_.size(); ++k) out.push_back(right_[k][0]);
    return out;
  }
  /// Element times generator k.
  Index right_gen(Index a, std::size_t k) const { return right_[k][a]; }

  Index mul(Index a, Index b) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(a) * n_ + b];
    Index stack[512];
    std::vector<Index> big;
    int depth = 0;
    if (depth_[b] > 512) {
      big.reserve(depth_[b]);
      for (Index y = b; y != 0; y = parent_[y]) big.push_back(parent_gen_[y]);
      for (auto it = big.rbegin(); it != big.rend(); ++it) a = right_[*it][a];
      return a;
    }
    for (Index y = b; y != 0; y = parent_[y]) stack[depth++] = parent_gen_[y];
    while (depth > 0) a = right_[stack[--depth]][a];
    return a;
  }
  Index inv(Index a) const noexcept { return inverse_[a]; }
  Index pow(Index a, long long e) const {
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    Index result = 0;
    while (e > 0) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }
  /// [a, b] = a^-1 b^-1 a b
  Index commutator(Index a, Index b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  /// g^-1 a g
  Index conj(Index a, Index g) const { return mul(mul(inv(g), a), g); }

  std::uint64_t order_of(Index a) const {
    std::uint64_t k = 1;
    for (Index x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }

  /// Indices in breadth-first order from the identity.
  const std::vector<Index>& bfs_order() const noexcept { return bfs_; }
  /// Generator word of a (generator indices, left to right).
  std::vector<std::uint16_t> word(Index a) const {
    std::vector<std::uint16_t> w;
    for (Index y = a; y != 0; y = parent_[y]) w.push_back(parent_gen_[y]);
    std::reverse(w.begin(), w.end());
    return w;
  }

 private:
  void build_table() {
    table_.assign(n_ * n_, 0);
    for (Index a = 0; a < n_; ++a) {
      Index* row = &table_[static_cast<std::size_t>(a) * n_];
      row[0] = a;
      for (std::size_t qi = 1; qi < bfs_.size(); ++qi) {
        const Index b = bfs_[qi];
        row[b] = right_[parent_gen_[b]][row[parent_[b]]];
      }
    }
  }

  std::size_t n_ = 1;
  std::vector<std::vector<Index>> right_;
  std::vector<std::vector<Index>> right_inv_;
  std::vector<Index> parent_;
  std::vector<std::uint16_t> parent_gen_;
  std::vector<std::uint32_t> depth_;
  std::vector<Index> bfs_;
  std::vector<Index> table_;
  std::vector<Index> inverse_;
};

/// A subgroup of an IndexedGroup: generators plus sorted element list.
struct Subgroup {
  std::vector<Index> gens;
  std::vector<Index> elements;
  std::vector<char> member;

  std::size_t size() const noexcept { return elements.size(); }
  bool contains(Index i) const { return member[i] != 0; }
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elements == b.elements; }
};

inline Subgroup subgroup_closure(const IndexedGroup& G, std::vector<Index> gens) {
  Subgroup H;
  H.member.assign(G.size(), 0);
  std::vector<Index> kept;
  for (Index g : gens)
    if (g != 0) kept.push_back(g);
  H.gens = kept;
  H.elements.push_back(0);
  H.member[0] = 1;
  for (std::size_t i = 0; i < H.elements.size(); ++i)
    for (Index g : H.gens) {
      const Index y = G.mul(H.elements[i], g);
      if (!H.member[y]) {
        H.member[y] = 1;
        H.elements.push_back(y);
      }
    }
  std::sort(H.elements.begin(), H.elements.end());
  return H;
}

inline Subgroup whole_group(const IndexedGroup& G) {
  Subgroup H;
  H.gens = G.generators();
  H.elements.resize(G.size());
  std::iota(H.elements.begin(), H.elements.end(), Index{0});
  H.member.assign(G.size(), 1);
  return H;
}

/// Smallest normal subgroup of G containing the seeds.
inline Subgroup normal_closure(const IndexedGroup& G, const std::vector<Index>& seeds) {
  Subgroup H = subgroup_closure(G, seeds);
  const auto ggens = G.generators();
  bool grown = true;
  while (grown) {
    grown = false;
    for (std::size_t i = 0; i < H.gens.size() && !grown; ++i)
      for (Index g : ggens) {
        const Index c = G.conj(H.gens[i], g);
        if (!H.contains(c)) {
          auto gens = H.gens;
          gens.push_back(c);
          H = subgroup_closure(G, gens);
          grown = true;
          break;
        }
      }
  }
  return H;
}

/// Closure of an element set under G's products, generated by the given
/// elements; throws when the set is not closed.
inline Subgroup subgroup_from_elements(const IndexedGroup& G, const std::vector<Index>& elements) {
  std::vector<char> member(G.size(), 0);
  for (Index e : elements) member[e] = 1;
  // generators: greedy from the element list
  std::vector<Index> gens;
  Subgroup H = subgroup_closure(G, {});
  std::vector<Index> sorted = elements;
  std::sort(sorted.begin(), sorted.end());
  for (Index e : sorted) {
    if (H.contains(e)) continue;
    gens.push_back(e);
    H = subgroup_closure(G, gens);
    if (H.size() > sorted.size()) throw DimensionMismatch("element set is not a subgroup");
  }
  if (H.size() != sorted.size()) throw DimensionMismatch("element set is not a subgroup");
  return H;
}

/// The subgroup H as a group in its own right. local[i] is the position of
/// H.elements[i]; `global` maps local indices back.
struct InducedGroup {
  IndexedGroup group;
  std::vector<Index> global;                 // local -> index in G
  std::unordered_map<Index, Index> local;    // index in G -> local
};

inline InducedGroup induced_group(const IndexedGroup& G, const Subgroup& H) {
  std::vector<Index> global{0};
  std::unordered_map<Index, Index> local{{0, 0}};
  std::vector<std::vector<Index>> right(H.gens.size());
  for (std::size_t i = 0; i < global.size(); ++i)
    for (std::size_t k = 0; k < H.gens.size(); ++k) {
      const Index y = G.mul(global[i], H.gens[k]);
      auto it = local.find(y);
      if (it == local.end()) {
        it = local.emplace(y, static_cast<Index>(global.size())).first;
        global.push_back(y);
      }
      right[k].push_back(it->second);
    }
  return InducedGroup{IndexedGroup(std::move(right)), std::move(global), std::move(local)};
}

/// Breadth-first closure of concrete generators. T needs operator*,
/// operator== and std::hash.
template <typename T>
struct ConcreteGroup {
  std::vector<T> elements;
  std::unordered_map<T, Index> index;
  std::vector<T> gens;
  IndexedGroup group;

  std::size_t size() const noexcept { return elements.size(); }
  bool contains(const T& x) const { return index.count(x) != 0; }
  Index index_of(const T& x) const {
    auto it = index.find(x);
    if (it == index.end()) throw NotCompatible("element is not in the group");
    return it->second;
  }
};

template <typename T>
ConcreteGroup<T> close_group(const T& identity, std::vector<T> gens, std::uint64_t limit = 1ULL << 20,
                             std::size_t table_limit = IndexedGroup::kTableLimit) {
  std::vector<T> elements{identity};
  std::unordered_map<T, Index> index{{identity, 0}};
  std::vector<std::vector<Index>> right(gens.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      T y = elements[i] * gens[k];
      auto it = index.find(y);
      if (it == index.end()) {
        if (elements.size() >= limit) throw TooLarge("group closure exceeds " + std::to_string(limit) + " elements");
        it = index.emplace(y, static_cast<Index>(elements.size())).first;
        elements.push_back(std::move(y));
      }
      right[k].push_back(it->second);
    }
  }
  IndexedGroup group(std::move(right), table_limit);
  return ConcreteGroup<T>{std::move(elements), std::move(index), std::move(gens), std::move(group)};
}

}  // namespace gq
