#pragma once

// Permutations and permutation groups with a deterministic Schreier-Sims
// stabiliser chain. Products compose left to right: (g * h)(i) = h(g(i)).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "gq/error.hpp"

namespace gq {

class Permutation {
 public:
  using Point = std::uint16_t;

  Permutation() = default;
  explicit Permutation(int degree) : img_(degree) {
    if (degree > 65536) throw InvalidPermutation("degree above 65536");
    std::iota(img_.begin(), img_.end(), Point{0});
  }
  explicit Permutation(const std::vector<int>& images) : img_(images.size()) {
    const int n = static_cast<int>(images.size());
    if (n > 65536) throw InvalidPermutation("degree above 65536");
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
      const int v = images[i];
      if (v < 0 || v >= n || seen[v])
        throw InvalidPermutation("image list is not a bijection on [0," + std::to_string(n) + ") at position " +
                                 std::to_string(i));
      seen[v] = 1;
      img_[i] = static_cast<Point>(v);
    }
  }

  int degree() const noexcept { return static_cast<int>(img_.size()); }
  int operator[](int i) const noexcept { return img_[i]; }
  const std::vector<Point>& images() const noexcept { return img_; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw InvalidPermutation("degree mismatch in product");
    Permutation out;
    out.img_.resize(a.img_.size());
    for (std::size_t i = 0; i < a.img_.size(); ++i) out.img_[i] = b.img_[a.img_[i]];
    return out;
  }

  Permutation inverse() const {
    Permutation out;
    out.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) out.img_[img_[i]] = static_cast<Point>(i);
    return out;
  }

  Permutation pow(long long e) const {
    Permutation base = e < 0 ? inverse() : *this;
    if (e < 0) e = -e;
    Permutation result(degree());
    while (e > 0) {
      if (e & 1) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  long long order() const {
    std::vector<char> seen(img_.size(), 0);
    long long result = 1;
    for (std::size_t i = 0; i < img_.size(); ++i) {
      if (seen[i]) continue;
      long long len = 0;
      for (std::size_t j = i; !seen[j]; j = img_[j]) {
        seen[j] = 1;
        ++len;
      }
      result = std::lcm(result, len);
    }
    return result;
  }

  /// Smallest moved point, or -1 for the identity.
  int first_moved() const noexcept {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return static_cast<int>(i);
    return -1;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) { return a.img_ == b.img_; }
  friend bool operator!=(const Permutation& a, const Permutation& b) { return !(a == b); }
  friend bool operator<(const Permutation& a, const Permutation& b) { return a.img_ < b.img_; }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < img_.size(); ++i) os << (i ? " " : "") << img_[i];
    return os.str();
  }

 private:
  std::vector<Point> img_;
};

}  // namespace gq

template <>
struct std::hash<gq::Permutation> {
  std::size_t operator()(const gq::Permutation& p) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : p.images()) h = (h ^ v) * 0x100000001b3ULL;
    return h;
  }
};

namespace gq {

/// A permutation group with a stabiliser chain built eagerly at construction.
/// Base points are chosen as the smallest point moved by the element that
/// forces a new level, after an optional caller-supplied prefix.
class PermGroup {
 public:
  PermGroup(int degree, std::vector<Permutation> gens, std::vector<int> base_prefix = {})
      : degree_(degree), gens_(std::move(gens)) {
    for (const auto& g : gens_)
      if (g.degree() != degree_)
        throw InvalidPermutation("generator of degree " + std::to_string(g.degree()) + " in a group of degree " +
                                 std::to_string(degree_));
    for (int b : base_prefix) {
      if (b < 0 || b >= degree_) throw InvalidPermutation("base point out of range");
      add_level(b);
    }
    build();
  }

  static PermGroup trivial(int degree) { return PermGroup(degree, {}); }

  int degree() const noexcept { return degree_; }
  const std::vector<Permutation>& generators() const noexcept { return gens_; }
  Permutation identity() const { return Permutation(degree_); }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (const auto& l : levels_) o *= l.orbit.size();
    return o;
  }

  std::vector<int> base() const {
    std::vector<int> b;
    for (const auto& l : levels_) b.push_back(l.point);
    return b;
  }

  /// Orbit lengths of the chain, level by level.
  std::vector<std::size_t> basic_orbit_lengths() const {
    std::vector<std::size_t> out;
    for (const auto& l : levels_) out.push_back(l.orbit.size());
    return out;
  }

  bool contains(const Permutation& g) const {
    if (g.degree() != degree_) return false;
    auto [residue, level] = sift(g, 0);
    return level == static_cast<int>(levels_.size()) && residue.is_identity();
  }

  /// Generators of the pointwise stabiliser of the first k base points.
  std::vector<Permutation> stabilizer_generators(int k) const {
    if (k >= static_cast<int>(levels_.size())) return {};
    return levels_[k].gens;
  }

  std::vector<int> orbit(int pt) const { return orbit_of(pt, gens_); }

  bool is_transitive() const { return static_cast<int>(orbit(0).size()) == degree_; }

  /// All elements, enumerated as products of transversal elements from the
  /// deepest level up. Throws TooLarge past the limit.
  std::vector<Permutation> elements(std::uint64_t limit = 1ULL << 20) const {
    if (order() > limit) throw TooLarge("group of order " + std::to_string(order()) + " exceeds element limit " +
                                        std::to_string(limit));
    std::vector<Permutation> out{identity()};
    for (int li = static_cast<int>(levels_.size()) - 1; li >= 0; --li) {
      const auto& l = levels_[li];
      std::vector<Permutation> next;
      next.reserve(out.size() * l.orbit.size());
      for (int pt : l.orbit) {
        const Permutation& u = l.transversal[l.slot[pt]];
        for (const auto& h : out) next.push_back(h * u);
      }
      out.swap(next);
    }
    return out;
  }

  /// Elements of the pointwise stabiliser of the first k base points.
  std::vector<Permutation> stabilizer_elements(int k, std::uint64_t limit = 1ULL << 20) const {
    std::uint64_t o = 1;
    for (std::size_t li = k; li < levels_.size(); ++li) o *= levels_[li].orbit.size();
    if (o > limit) throw TooLarge("stabiliser too large to enumerate");
    std::vector<Permutation> out{identity()};
    for (int li = static_cast<int>(levels_.size()) - 1; li >= k; --li) {
      const auto& l = levels_[li];
      std::vector<Permutation> next;
      next.reserve(out.size() * l.orbit.size());
      for (int pt : l.orbit) {
        const Permutation& u = l.transversal[l.slot[pt]];
        for (const auto& h : out) next.push_back(h * u);
      }
      out.swap(next);
    }
    return out;
  }

  /// Group with the chain rebuilt so that `pts` lead the base.
  PermGroup with_base(const std::vector<int>& pts) const { return PermGroup(degree_, gens_, pts); }

  /// Generators of the pointwise stabiliser of pts. Levels whose basic orbit
  /// is trivial are dropped from the chain, so count the kept levels at pts.
  std::vector<Permutation> pointwise_stabilizer_generators(const std::vector<int>& pts) const {
    const PermGroup g = with_base(pts);
    int kept = 0;
    for (const auto& l : g.levels_)
      if (std::find(pts.begin(), pts.end(), l.point) != pts.end()) ++kept;
    return g.stabilizer_generators(kept);
  }

  /// Stabiliser of a single point, as its own group.
  PermGroup point_stabilizer(int pt) const {
    const PermGroup g = with_base({pt});
    if (g.levels_.empty() || g.levels_[0].point != pt) return *this;  // pt is fixed by every element
    return PermGroup(degree_, g.stabilizer_generators(1));
  }

 private:
  struct Level {
    int point = -1;
    std::vector<Permutation> gens;
    std::vector<int> orbit;
    std::vector<int> slot;  // point -> index into transversal, -1 if outside orbit
    std::vector<Permutation> transversal;      // u with point^u = orbit point
    std::vector<Permutation> transversal_inv;
  };

  static std::vector<int> orbit_of(int pt, const std::vector<Permutation>& gens) {
    if (gens.empty()) return {pt};
    const int n = gens[0].degree();
    std::vector<char> seen(n, 0);
    std::vector<int> out{pt};
    seen[pt] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto& g : gens) {
        const int y = g[out[i]];
        if (!seen[y]) {
          seen[y] = 1;
          out.push_back(y);
        }
      }
    return out;
  }

  void add_level(int point) {
    Level l;
    l.point = point;
    levels_.push_back(std::move(l));
    recompute_orbit(static_cast<int>(levels_.size()) - 1);
  }

  void recompute_orbit(int li) {
    Level& l = levels_[li];
    l.orbit.assign(1, l.point);
    l.slot.assign(degree_, -1);
    l.transversal.assign(1, identity());
    l.transversal_inv.assign(1, identity());
    l.slot[l.point] = 0;
    for (std::size_t i = 0; i < l.orbit.size(); ++i) {
      const int x = l.orbit[i];
      for (const auto& g : l.gens) {
        const int y = g[x];
        if (l.slot[y] >= 0) continue;
        l.slot[y] = static_cast<int>(l.transversal.size());
        Permutation u = l.transversal[l.slot[x]] * g;
        l.transversal_inv.push_back(u.inverse());
        l.transversal.push_back(std::move(u));
        l.orbit.push_back(y);
      }
    }
  }

  // Sift g through levels from `start`; returns the residue and the level at
  // which sifting stopped (levels_.size() when it passed every level).
  std::pair<Permutation, int> sift(Permutation g, int start) const {
    for (int li = start; li < static_cast<int>(levels_.size()); ++li) {
      const Level& l = levels_[li];
      const int slot = l.slot[g[l.point]];
      if (slot < 0) return {g, li};
      g = g * l.transversal_inv[slot];
    }
    return {g, static_cast<int>(levels_.size())};
  }

  void build() {
    std::vector<Permutation> strong;
    for (const auto& g : gens_)
      if (!g.is_identity()) strong.push_back(g);
    for (const auto& g : strong) {
      bool fixes_base = true;
      for (const auto& l : levels_)
        if (g[l.point] != l.point) {
          fixes_base = false;
          break;
        }
      if (fixes_base) {
        Level l;
        l.point = g.first_moved();
        levels_.push_back(std::move(l));
      }
    }
    for (std::size_t li = 0; li < levels_.size(); ++li) {
      for (const auto& g : strong) {
        bool fixes = true;
        for (std::size_t lj = 0; lj < li && fixes; ++lj) fixes = g[levels_[lj].point] == levels_[lj].point;
        if (fixes) levels_[li].gens.push_back(g);
      }
      recompute_orbit(static_cast<int>(li));
    }
    int i = static_cast<int>(levels_.size()) - 1;
    while (i >= 0) {
      bool restarted = false;
      for (std::size_t oi = 0; oi < levels_[i].orbit.size() && !restarted; ++oi) {
        for (std::size_t gi = 0; gi < levels_[i].gens.size() && !restarted; ++gi) {
          const Level& l = levels_[i];
          const int beta = l.orbit[oi];
          const Permutation& s = l.gens[gi];
          Permutation h = l.transversal[l.slot[beta]] * s * l.transversal_inv[l.slot[s[beta]]];
          if (h.is_identity()) continue;
          auto [residue, stop] = sift(h, i + 1);
          const int k = static_cast<int>(levels_.size());
          if (stop == k && residue.is_identity()) continue;
          if (stop == k) {
            Level nl;
            nl.point = residue.first_moved();
            levels_.push_back(std::move(nl));
          }
          for (int lj = i + 1; lj <= stop; ++lj) {
            levels_[lj].gens.push_back(residue);
            recompute_orbit(lj);
          }
          i = stop;
          restarted = true;
        }
      }
      if (!restarted) --i;
    }
    std::vector<Level> kept;
    for (auto& l : levels_)
      if (l.orbit.size() > 1) kept.push_back(std::move(l));
    levels_.swap(kept);
  }

  int degree_;
  std::vector<Permutation> gens_;
  std::vector<Level> levels_;
};

/// "GRP degree ngens" then one image list per generator.
inline std::string write_grp(const PermGroup& g) {
  std::ostringstream os;
  os << "GRP " << g.degree() << ' ' << g.generators().size() << '\n';
  for (const auto& p : g.generators()) os << p.to_string() << '\n';
  return os.str();
}

inline PermGroup read_grp(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  int degree = 0, ngens = 0;
  if (!(in >> header >> degree >> ngens) || header != "GRP" || degree <= 0 || ngens < 0)
    throw ParseError("expected header 'GRP <degree> <ngens>'");
  std::vector<Permutation> gens;
  for (int k = 0; k < ngens; ++k) {
    std::vector<int> img(degree);
    for (int i = 0; i < degree; ++i)
      if (!(in >> img[i])) throw ParseError("generator " + std::to_string(k) + " is truncated");
    gens.emplace_back(img);
  }
  return PermGroup(degree, std::move(gens));
}

}  // namespace gq
