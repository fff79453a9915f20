#pragma once

// Point-line incidence structures: construction from forms, axiom checking,
// duality, perps, Payne derivation and the plain-text file format.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gq/error.hpp"
#include "gq/field.hpp"
#include "gq/forms.hpp"

namespace gq {

/// Dense bitset over point ids.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int n) : n_(n), words_((n + 63) / 64, 0) {}
  int size() const noexcept { return n_; }
  void set(int i) noexcept { words_[i >> 6] |= (1ULL << (i & 63)); }
  void reset(int i) noexcept { words_[i >> 6] &= ~(1ULL << (i & 63)); }
  bool test(int i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
  int count() const noexcept {
    int c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
  }
  PointSet& operator&=(const PointSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  PointSet& operator|=(const PointSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  std::vector<int> members() const {
    std::vector<int> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      auto bits = words_[w];
      while (bits) {
        out.push_back(static_cast<int>(w * 64 + __builtin_ctzll(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }
  friend bool operator==(const PointSet& a, const PointSet& b) { return a.n_ == b.n_ && a.words_ == b.words_; }
  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// A finite incidence structure of points and lines. Lines are stored as
/// ascending point-id lists and kept in lexicographic order. Points may carry
/// projective labels (normalised vectors) over a field.
class IncidenceGQ {
 public:
  IncidenceGQ(int npoints, std::vector<std::vector<int>> lines, std::string provenance = "",
              std::vector<Vec> labels = {}, const FieldSpec* field = nullptr)
      : npoints_(npoints), lines_(std::move(lines)), provenance_(std::move(provenance)),
        labels_(std::move(labels)), field_(field) {
    if (npoints_ <= 0) throw ParseError("incidence structure needs at least one point");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != npoints_)
      throw DimensionMismatch("label count differs from point count");
    for (auto& l : lines_) {
      std::sort(l.begin(), l.end());
      for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i] < 0 || l[i] >= npoints_) throw ParseError("line refers to point " + std::to_string(l[i]) + " out of range");
        if (i && l[i] == l[i - 1]) throw ParseError("line repeats point " + std::to_string(l[i]));
      }
    }
    std::sort(lines_.begin(), lines_.end());
    point_lines_.assign(npoints_, {});
    for (int li = 0; li < nlines(); ++li)
      for (int p : lines_[li]) point_lines_[p].push_back(li);
    adj_.assign(npoints_, PointSet(npoints_));
    for (const auto& l : lines_)
      for (int a : l)
        for (int b : l) adj_[a].set(b);
    for (int p = 0; p < npoints_; ++p) adj_[p].set(p);
    if (field_ && !labels_.empty())
      for (int p = 0; p < npoints_; ++p) label_index_.emplace(packed_key(*field_, labels_[p]), p);
  }

  int npoints() const noexcept { return npoints_; }
  int nlines() const noexcept { return static_cast<int>(lines_.size()); }
  const std::vector<std::vector<int>>& lines() const noexcept { return lines_; }
  const std::vector<int>& line(int i) const { return lines_.at(i); }
  const std::vector<int>& lines_through(int p) const { return point_lines_.at(p); }
  const std::string& provenance() const noexcept { return provenance_; }
  const std::vector<Vec>& labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return !labels_.empty() && field_ != nullptr; }
  const FieldSpec* field() const noexcept { return field_; }

  /// Point id for a (not necessarily normalised) label vector.
  std::optional<int> point_of(const Vec& v) const {
    if (!has_labels()) return std::nullopt;
    auto it = label_index_.find(packed_key(*field_, normalize(*field_, v)));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Reflexive collinearity.
  bool collinear(int a, int b) const { return adj_[a].test(b); }
  /// Points collinear with p, p included.
  const PointSet& closed_neighbourhood(int p) const { return adj_[p]; }

  /// (s, t) read from the first line and point; -1 when undefined.
  std::pair<int, int> nominal_order() const {
    const int s = lines_.empty() ? -1 : static_cast<int>(lines_[0].size()) - 1;
    const int t = static_cast<int>(point_lines_[0].size()) - 1;
    return {s, t};
  }

  friend bool operator==(const IncidenceGQ& a, const IncidenceGQ& b) {
    return a.npoints_ == b.npoints_ && a.lines_ == b.lines_;
  }

 private:
  int npoints_;
  std::vector<std::vector<int>> lines_;
  std::string provenance_;
  std::vector<Vec> labels_;
  const FieldSpec* field_;
  std::vector<std::vector<int>> point_lines_;
  std::vector<PointSet> adj_;
  std::unordered_map<std::uint64_t, int> label_index_;
};

/// Outcome of verify_gq: either the order or the first violated condition.
struct GQCheck {
  bool ok = false;
  int s = -1;
  int t = -1;
  std::string violation;  // empty when ok
  int witness_point = -1;
  int witness_line = -1;

  explicit operator bool() const noexcept { return ok; }
};

/// Checks line-size and degree constancy, that two points share at most one
/// line, and the quadrangle axiom for every non-incident pair. Witnesses are
/// the lowest line id, then the lowest point id. Never throws.
inline GQCheck verify_gq(const IncidenceGQ& gq) {
  GQCheck r;
  const int n = gq.npoints();
  const int m = gq.nlines();
  if (m == 0) {
    r.violation = "no lines";
    return r;
  }
  const int s = static_cast<int>(gq.line(0).size()) - 1;
  for (int li = 0; li < m; ++li)
    if (static_cast<int>(gq.line(li).size()) - 1 != s) {
      r.violation = "line size not constant";
      r.witness_line = li;
      return r;
    }
  const int t = static_cast<int>(gq.lines_through(0).size()) - 1;
  for (int p = 0; p < n; ++p)
    if (static_cast<int>(gq.lines_through(p).size()) - 1 != t) {
      r.violation = "point degree not constant";
      r.witness_point = p;
      return r;
    }
  if (s < 1 || t < 0) {
    r.violation = "degenerate order";
    return r;
  }
  // two points on at most one common line
  std::vector<int> mark(n, -1);
  for (int p = 0; p < n; ++p) {
    for (int li : gq.lines_through(p))
      for (int x : gq.line(li)) {
        if (x == p) continue;
        if (mark[x] == p) {
          r.violation = "two points on more than one common line";
          r.witness_point = std::min(p, x);
          r.witness_line = li;
          return r;
        }
        mark[x] = p;
      }
  }
  // quadrangle axiom: every point off L is collinear with exactly one point of L
  std::vector<int> count(n, 0);
  std::vector<char> on_line(n, 0);
  for (int li = 0; li < m; ++li) {
    std::fill(count.begin(), count.end(), 0);
    for (int p : gq.line(li)) on_line[p] = 1;
    for (int p : gq.line(li))
      for (int lj : gq.lines_through(p)) {
        if (lj == li) continue;
        for (int x : gq.line(lj))
          if (x != p) ++count[x];
      }
    for (int x = 0; x < n; ++x) {
      if (on_line[x]) continue;
      if (count[x] != 1) {
        r.violation = count[x] == 0 ? "point collinear with no point of a line"
                                    : "point collinear with several points of a line";
        r.witness_line = li;
        r.witness_point = x;
        for (int p : gq.line(li)) on_line[p] = 0;
        return r;
      }
    }
    for (int p : gq.line(li)) on_line[p] = 0;
  }
  const long long st1 = 1LL * s * t + 1;
  if (n != (s + 1) * st1 || m != (t + 1) * st1) {
    r.violation = "point or line count does not match order";
    return r;
  }
  r.ok = true;
  r.s = s;
  r.t = t;
  return r;
}

/// Throws with the violation text unless the structure is a GQ.
inline std::pair<int, int> require_gq(const IncidenceGQ& gq) {
  const auto r = verify_gq(gq);
  if (!r.ok)
    throw NotCompatible("not a generalised quadrangle: " + r.violation + " (point " +
                        std::to_string(r.witness_point) + ", line " + std::to_string(r.witness_line) + ")");
  return {r.s, r.t};
}

/// Points and lines swap roles. Old line i becomes point i.
inline IncidenceGQ dual(const IncidenceGQ& gq) {
  std::vector<std::vector<int>> lines;
  lines.reserve(gq.npoints());
  for (int p = 0; p < gq.npoints(); ++p) lines.push_back(gq.lines_through(p));
  return IncidenceGQ(gq.nlines(), std::move(lines), "dual(" + gq.provenance() + ")");
}

inline PointSet perp_set(const IncidenceGQ& gq, const std::vector<int>& s) {
  if (s.empty()) throw DimensionMismatch("perp of an empty set");
  PointSet out = gq.closed_neighbourhood(s[0]);
  for (std::size_t i = 1; i < s.size(); ++i) out &= gq.closed_neighbourhood(s[i]);
  return out;
}

inline PointSet double_perp(const IncidenceGQ& gq, int x, int y) {
  const PointSet first = perp_set(gq, {x, y});
  return perp_set(gq, first.members());
}

inline IncidenceGQ build_w3(const FieldSpec& F, bool verify = true) {
  const auto form = AlternatingForm::standard(F);
  auto geo = singular_geometry(form, true);
  const int n = static_cast<int>(geo.points.size());
  IncidenceGQ gq(n, std::move(geo.lines), "W(3," + std::to_string(F.q()) + ") modulus " + F.modulus_string(),
                 std::move(geo.points), &F);
  if (verify) require_gq(gq);
  return gq;
}

/// GQ of singular points and lines of a quadratic form (the elliptic
/// quadric when the form has minus type in dimension 6).
inline IncidenceGQ build_quadric_gq(const QuadraticForm& form, std::string provenance, bool verify = true) {
  auto geo = singular_geometry(form, true);
  const int n = static_cast<int>(geo.points.size());
  IncidenceGQ gq(n, std::move(geo.lines), std::move(provenance), std::move(geo.points), &form.field());
  if (verify) require_gq(gq);
  return gq;
}

inline IncidenceGQ build_qminus5(const FieldSpec& F, bool verify = true) {
  return build_quadric_gq(QuadraticForm::elliptic(F),
                          "Q-(5," + std::to_string(F.q()) + ") modulus " + F.modulus_string(), verify);
}

/// Id of <(1,0,0,0)> in build_w3 output.
inline int w3_base_point(const FieldSpec& F) {
  return static_cast<int>(F.q() * F.q() + F.q() + 1);
}

/// The derived quadrangle at a regular point x of a GQ of order (s, s).
/// New point ids follow the old ids in ascending order; labels carry over.
inline IncidenceGQ payne_derive(const IncidenceGQ& gq, int x) {
  const auto [s, t] = require_gq(gq);
  if (s != t) throw NotCompatible("Payne derivation needs order (s,s), got (" + std::to_string(s) + "," +
                                  std::to_string(t) + ")");
  if (x < 0 || x >= gq.npoints()) throw DimensionMismatch("base point out of range");
  const int n = gq.npoints();
  const PointSet& xperp = gq.closed_neighbourhood(x);
  std::vector<int> new_id(n, -1);
  std::vector<int> kept;
  for (int p = 0; p < n; ++p)
    if (!xperp.test(p)) {
      new_id[p] = static_cast<int>(kept.size());
      kept.push_back(p);
    }
  std::vector<std::vector<int>> lines;
  for (const auto& l : gq.lines()) {
    if (std::find(l.begin(), l.end(), x) != l.end()) continue;
    std::vector<int> nl;
    for (int p : l)
      if (new_id[p] >= 0) nl.push_back(new_id[p]);
    lines.push_back(nl);
  }
  std::vector<char> covered(n, 0);
  for (int y : kept) {
    const PointSet h = double_perp(gq, x, y);
    if (h.count() != s + 1)
      throw NotRegularPoint("point " + std::to_string(x) + " is not regular: |{x,y}^perp perp| = " +
                            std::to_string(h.count()) + " for y = " + std::to_string(y));
    if (covered[y]) continue;
    std::vector<int> nl;
    for (int p : h.members()) {
      if (p == x) continue;
      covered[p] = 1;
      nl.push_back(new_id[p]);
    }
    lines.push_back(nl);
  }
  std::vector<Vec> labels;
  if (gq.has_labels())
    for (int p : kept) labels.push_back(gq.labels()[p]);
  IncidenceGQ out(static_cast<int>(kept.size()), std::move(lines),
                  "payne(" + gq.provenance() + ", x=" + std::to_string(x) + ")", std::move(labels), gq.field());
  return out;
}

/// Payne derivation of W(3,q) at <(1,0,0,0)>.
inline IncidenceGQ derived_w3(const FieldSpec& F) {
  return payne_derive(build_w3(F), w3_base_point(F));
}

/// n x n grid: points are cells, lines are rows and columns.
inline IncidenceGQ grid_gq(int n) {
  std::vector<std::vector<int>> lines;
  for (int r = 0; r < n; ++r) {
    std::vector<int> row, col;
    for (int c = 0; c < n; ++c) {
      row.push_back(r * n + c);
      col.push_back(c * n + r);
    }
    lines.push_back(row);
    lines.push_back(col);
  }
  return IncidenceGQ(n * n, std::move(lines), "grid(" + std::to_string(n) + ")");
}

/// "GQ n m s t" followed by one ascending id list per line.
inline std::string write_gq(const IncidenceGQ& gq) {
  const auto [s, t] = gq.nominal_order();
  std::ostringstream os;
  os << "GQ " << gq.npoints() << ' ' << gq.nlines() << ' ' << s << ' ' << t << '\n';
  for (const auto& l : gq.lines()) {
    for (std::size_t i = 0; i < l.size(); ++i) os << (i ? " " : "") << l[i];
    os << '\n';
  }
  return os.str();
}

inline IncidenceGQ read_gq(const std::string& text, std::string provenance = "file") {
  std::istringstream in(text);
  std::string header;
  int n = 0, m = 0, s = 0, t = 0;
  if (!(in >> header >> n >> m >> s >> t) || header != "GQ")
    throw ParseError("expected header 'GQ <npoints> <nlines> <s> <t>'");
  std::string rest;
  std::getline(in, rest);
  std::vector<std::vector<int>> lines;
  std::string row;
  while (std::getline(in, row)) {
    if (row.empty()) continue;
    std::istringstream rs(row);
    std::vector<int> l;
    int v;
    while (rs >> v) l.push_back(v);
    if (!rs.eof()) throw ParseError("non-integer token in line " + std::to_string(lines.size() + 2));
    if (static_cast<int>(l.size()) != s + 1)
      throw ParseError("line " + std::to_string(lines.size() + 2) + " has " + std::to_string(l.size()) +
                       " points, header says " + std::to_string(s + 1));
    lines.push_back(std::move(l));
  }
  if (static_cast<int>(lines.size()) != m)
    throw ParseError("header declares " + std::to_string(m) + " lines, found " + std::to_string(lines.size()));
  return IncidenceGQ(n, std::move(lines), std::move(provenance));
}

}  // namespace gq
