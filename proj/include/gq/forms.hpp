#pragma once

// Bilinear and quadratic forms, canonical subspaces, and enumeration of
// totally isotropic / totally singular points and lines.

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gq/error.hpp"
#include "gq/field.hpp"
#include "gq/matrix.hpp"

namespace gq {

/// Scale v so its first nonzero entry is 1. The zero vector is returned as is.
inline Vec normalize(const FieldSpec& F, Vec v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    if (v[i] == F.one()) return v;
    const Elt s = F.inv(v[i]);
    for (std::size_t j = i; j < v.size(); ++j) v[j] = F.mul(v[j], s);
    return v;
  }
  return v;
}

/// sum v_i q^(n-1-i); ascending keys follow lexicographic element order.
inline std::uint64_t packed_key(const FieldSpec& F, const Vec& v) {
  std::uint64_t key = 0;
  for (Elt x : v) key = key * F.q() + x;
  return key;
}

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Elt x) { return x == 0; });
}

/// A subspace of GF(q)^n held by its reduced row echelon basis.
class Subspace {
 public:
  Subspace(const FieldSpec& F, int ambient_dim) : basis_(F, 0, ambient_dim) {}
  explicit Subspace(const Matrix& spanning) : basis_(rref(spanning)) {}
  static Subspace span(const FieldSpec& F, const std::vector<Vec>& vectors, int ambient_dim) {
    if (vectors.empty()) return Subspace(F, ambient_dim);
    for (const auto& v : vectors)
      if (static_cast<int>(v.size()) != ambient_dim) throw DimensionMismatch("spanning vector of wrong length");
    return Subspace(Matrix::from_rows(F, vectors));
  }
  static Subspace whole(const FieldSpec& F, int n) { return Subspace(Matrix::identity(F, n)); }

  const FieldSpec& field() const noexcept { return basis_.field(); }
  int dim() const noexcept { return basis_.rows(); }
  int ambient_dim() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }
  std::vector<Vec> rows() const {
    std::vector<Vec> out;
    for (int i = 0; i < basis_.rows(); ++i) out.push_back(basis_.row(i));
    return out;
  }

  bool contains(const Vec& v) const {
    auto r = rows();
    r.push_back(v);
    return rank(Matrix::from_rows(field(), r)) == dim();
  }
  bool contains(const Subspace& other) const {
    auto r = rows();
    for (auto& v : other.rows()) r.push_back(v);
    if (r.empty()) return true;
    return rank(Matrix::from_rows(field(), r)) == dim();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
  friend bool operator<(const Subspace& a, const Subspace& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.basis_.data() < b.basis_.data();
  }

  /// Echelon rows separated by ';', entries separated by spaces.
  std::string to_string() const {
    std::string out;
    for (int i = 0; i < basis_.rows(); ++i) {
      if (i) out += ";";
      for (int j = 0; j < basis_.cols(); ++j) {
        if (j) out += " ";
        out += field().to_string(basis_.at(i, j));
      }
    }
    return out;
  }

 private:
  Matrix basis_;
};

/// Symmetric bilinear data given by a Gram matrix: B(u, v) = u G v^T.
class BilinearForm {
 public:
  explicit BilinearForm(Matrix gram) : gram_(std::move(gram)) {
    if (gram_.rows() != gram_.cols()) throw DimensionMismatch("Gram matrix must be square");
  }
  const FieldSpec& field() const noexcept { return gram_.field(); }
  int dim() const noexcept { return gram_.rows(); }
  const Matrix& gram() const noexcept { return gram_; }

  Elt eval(const Vec& u, const Vec& v) const {
    if (static_cast<int>(u.size()) != dim() || static_cast<int>(v.size()) != dim())
      throw DimensionMismatch("form of dimension " + std::to_string(dim()) + " applied to vectors of length " +
                              std::to_string(u.size()) + ", " + std::to_string(v.size()));
    const Vec ug = vec_mat(u, gram_);
    return dot(ug, v);
  }
  Elt dot(const Vec& a, const Vec& b) const {
    const FieldSpec& F = field();
    Elt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && b[i]) s = F.add(s, F.mul(a[i], b[i]));
    return s;
  }

 private:
  Matrix gram_;
};

/// A nondegenerate alternating form.
class AlternatingForm : public BilinearForm {
 public:
  explicit AlternatingForm(Matrix gram) : BilinearForm(std::move(gram)) {
    const FieldSpec& F = field();
    for (int i = 0; i < dim(); ++i) {
      if (this->gram().at(i, i)) throw InvalidField("alternating form needs a zero diagonal");
      for (int j = 0; j < dim(); ++j)
        if (this->gram().at(i, j) != F.neg(this->gram().at(j, i)))
          throw InvalidField("alternating form needs an antisymmetric Gram matrix");
    }
    if (rank(this->gram()) != dim()) throw InvalidField("alternating form is degenerate");
  }

  /// x1y4 - y1x4 + x2y3 - y2x3 on GF(q)^4.
  static AlternatingForm standard(const FieldSpec& F) {
    return AlternatingForm(Matrix::from_ints(F, {{0, 0, 0, 1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {-1, 0, 0, 0}}));
  }
};

inline Elt beta_eval(const AlternatingForm& form, const Vec& u, const Vec& v) { return form.eval(u, v); }

/// Q(x) = sum_{i <= j} c_ij x_i x_j with an upper-triangular coefficient matrix.
class QuadraticForm {
 public:
  explicit QuadraticForm(Matrix coeffs) : c_(std::move(coeffs)) {
    if (c_.rows() != c_.cols()) throw DimensionMismatch("coefficient matrix must be square");
    for (int i = 0; i < c_.rows(); ++i)
      for (int j = 0; j < i; ++j)
        if (c_.at(i, j)) throw InvalidField("coefficient matrix must be upper triangular");
  }

  /// x1x2 + x3x4 + x5^2 + x5x6 + d x6^2 with t^2 + t + d irreducible, d least.
  static QuadraticForm elliptic(const FieldSpec& F) {
    Matrix c(F, 6, 6);
    c.set(0, 1, F.one());
    c.set(2, 3, F.one());
    c.set(4, 4, F.one());
    c.set(4, 5, F.one());
    c.set(5, 5, elliptic_constant(F));
    return QuadraticForm(c);
  }

  /// Least d (by index) such that t^2 + t + d has no root in GF(q).
  static Elt elliptic_constant(const FieldSpec& F) {
    for (Elt d = 0; d < F.q(); ++d) {
      bool has_root = false;
      for (Elt t = 0; t < F.q() && !has_root; ++t)
        has_root = F.add(F.add(F.mul(t, t), t), d) == 0;
      if (!has_root) return d;
    }
    throw InvalidField("no irreducible t^2 + t + d");
  }

  const FieldSpec& field() const noexcept { return c_.field(); }
  int dim() const noexcept { return c_.rows(); }
  const Matrix& coeffs() const noexcept { return c_; }

  Elt eval(const Vec& v) const {
    if (static_cast<int>(v.size()) != dim())
      throw DimensionMismatch("quadratic form of dimension " + std::to_string(dim()) + " applied to length " +
                              std::to_string(v.size()));
    const FieldSpec& F = field();
    Elt s = 0;
    for (int i = 0; i < dim(); ++i) {
      if (!v[i]) continue;
      for (int j = i; j < dim(); ++j)
        if (c_.at(i, j) && v[j]) s = F.add(s, F.mul(c_.at(i, j), F.mul(v[i], v[j])));
    }
    return s;
  }

 private:
  Matrix c_;
};

inline Elt quad_eval(const QuadraticForm& form, const Vec& u) { return form.eval(u); }

/// B(u, v) = Q(u + v) - Q(u) - Q(v).
inline BilinearForm polarize(const QuadraticForm& form) {
  const FieldSpec& F = form.field();
  const int n = form.dim();
  Matrix g(F, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) g.set(i, i, F.add(form.coeffs().at(i, i), form.coeffs().at(i, i)));
      else if (i < j) g.set(i, j, form.coeffs().at(i, j));
      else g.set(i, j, form.coeffs().at(j, i));
    }
  return BilinearForm(g);
}

/// { v : B(v, s) = 0 for all s in S }.
inline Subspace perp(const BilinearForm& form, const Subspace& s) {
  if (s.ambient_dim() != form.dim()) throw DimensionMismatch("subspace and form dimensions differ");
  const FieldSpec& F = form.field();
  if (s.dim() == 0) return Subspace::whole(F, form.dim());
  // B(v, s) = v G s^T, so v must annihilate the columns G s^T: (S G^T) v^T = 0.
  const Matrix conditions = s.basis() * form.gram().transpose();
  return Subspace(nullspace(conditions));
}

/// M preserves the form: B(uM, vM) = B(u, v) on all basis pairs.
inline bool preserves_form(const BilinearForm& form, const Matrix& m) {
  if (m.rows() != form.dim() || m.cols() != form.dim())
    throw DimensionMismatch("matrix does not match form dimension");
  return m * form.gram() * m.transpose() == form.gram();
}

inline bool sp4_membership(const AlternatingForm& form, const Matrix& m) {
  if (form.dim() != 4 || m.rows() != 4 || m.cols() != 4) throw DimensionMismatch("sp4_membership expects 4x4 data");
  return preserves_form(form, m);
}

/// Singular points (as normalised vectors in ascending key order) and lines
/// (as ascending point-id lists, sorted lexicographically) of a form.
struct SingularGeometry {
  std::vector<Vec> points;
  std::vector<std::vector<int>> lines;
  std::unordered_map<std::uint64_t, int> index;  // packed key -> point id
};

namespace detail {

// All normalised nonzero vectors of GF(q)^n in ascending key order.
template <typename Visit>
void for_each_projective_point(const FieldSpec& F, int n, Visit&& visit) {
  const std::uint32_t q = F.q();
  for (int lead = n - 1; lead >= 0; --lead) {
    const int free = n - 1 - lead;
    std::uint64_t count = 1;
    for (int i = 0; i < free; ++i) count *= q;
    Vec v(n, 0);
    v[lead] = F.one();
    for (std::uint64_t code = 0; code < count; ++code) {
      std::uint64_t c = code;
      for (int i = n - 1; i > lead; --i) {
        v[i] = static_cast<Elt>(c % q);
        c /= q;
      }
      visit(v);
    }
  }
}

inline SingularGeometry singular_geometry(const FieldSpec& F, const BilinearForm& polar,
                                          const QuadraticForm* quadratic, bool with_lines) {
  SingularGeometry geo;
  const int n = polar.dim();
  for_each_projective_point(F, n, [&](const Vec& v) {
    if (quadratic == nullptr || quadratic->eval(v) == 0) {
      geo.index.emplace(packed_key(F, v), static_cast<int>(geo.points.size()));
      geo.points.push_back(v);
    }
  });
  if (!with_lines) return geo;
  const int np = static_cast<int>(geo.points.size());
  std::vector<Vec> pg(np);
  for (int i = 0; i < np; ++i) pg[i] = vec_mat(geo.points[i], polar.gram());
  std::vector<int> ids;
  for (int a = 0; a < np; ++a) {
    for (int b = a + 1; b < np; ++b) {
      if (polar.dot(pg[a], geo.points[b]) != 0) continue;
      // points of <P_a, P_b>: P_a and normalize(P_b + l P_a)
      ids.clear();
      ids.push_back(a);
      bool emit = true;
      for (Elt l = 0; l < F.q() && emit; ++l) {
        Vec w = geo.points[b];
        for (int i = 0; i < n; ++i) w[i] = F.add(w[i], F.mul(l, geo.points[a][i]));
        w = normalize(F, w);
        auto it = geo.index.find(packed_key(F, w));
        if (it == geo.index.end()) throw InvalidField("line through two singular points leaves the quadric");
        if (it->second < b) emit = false;  // not the (min, second-min) pair of this line
        ids.push_back(it->second);
      }
      if (!emit) continue;
      std::sort(ids.begin(), ids.end());
      geo.lines.push_back(ids);
    }
  }
  std::sort(geo.lines.begin(), geo.lines.end());
  return geo;
}

}  // namespace detail

inline SingularGeometry singular_geometry(const AlternatingForm& form, bool with_lines = true) {
  return detail::singular_geometry(form.field(), form, nullptr, with_lines);
}

inline SingularGeometry singular_geometry(const QuadraticForm& form, bool with_lines = true) {
  const BilinearForm polar = polarize(form);
  return detail::singular_geometry(form.field(), polar, &form, with_lines);
}

namespace detail {
inline std::vector<Subspace> geometry_subspaces(const FieldSpec& F, const SingularGeometry& geo, int dim, int n) {
  std::vector<Subspace> out;
  if (dim == 1) {
    for (const auto& v : geo.points) out.push_back(Subspace::span(F, {v}, n));
  } else if (dim == 2) {
    for (const auto& line : geo.lines)
      out.push_back(Subspace::span(F, {geo.points[line[0]], geo.points[line[1]]}, n));
  } else {
    throw DimensionMismatch("enumerate_singular supports dimensions 1 and 2");
  }
  return out;
}
}  // namespace detail

inline std::vector<Subspace> enumerate_singular(const AlternatingForm& form, int dim) {
  if (dim != 1 && dim != 2) throw DimensionMismatch("enumerate_singular supports dimensions 1 and 2");
  return detail::geometry_subspaces(form.field(), singular_geometry(form, dim == 2), dim, form.dim());
}

inline std::vector<Subspace> enumerate_singular(const QuadraticForm& form, int dim) {
  if (dim != 1 && dim != 2) throw DimensionMismatch("enumerate_singular supports dimensions 1 and 2");
  return detail::geometry_subspaces(form.field(), singular_geometry(form, dim == 2), dim, form.dim());
}

}  // namespace gq
