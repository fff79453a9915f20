#pragma once

// Dense matrices over GF(q), acting on row vectors (v -> vM), and
// semilinear maps v -> (v^sigma^e) M.

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "gq/error.hpp"
#include "gq/field.hpp"

namespace gq {

using Vec = std::vector<Elt>;

class Matrix {
 public:
  Matrix(const FieldSpec& field, int rows, int cols)
      : field_(&field), rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0) {}

  static Matrix identity(const FieldSpec& field, int n) {
    Matrix m(field, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, field.one());
    return m;
  }

  /// Entries given as integers, reduced into the prime field.
  static Matrix from_ints(const FieldSpec& field, std::initializer_list<std::initializer_list<long long>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r ? static_cast<int>(rows.begin()->size()) : 0;
    Matrix m(field, r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != c) throw DimensionMismatch("ragged matrix literal");
      int j = 0;
      for (long long v : row) m.set(i, j++, field.from_int(v));
      ++i;
    }
    return m;
  }

  static Matrix from_rows(const FieldSpec& field, const std::vector<Vec>& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r ? static_cast<int>(rows[0].size()) : 0;
    Matrix m(field, r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[i].size()) != c) throw DimensionMismatch("ragged row list");
      for (int j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  const FieldSpec& field() const noexcept { return *field_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  Elt at(int i, int j) const noexcept { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  void set(int i, int j, Elt v) noexcept { data_[static_cast<std::size_t>(i) * cols_ + j] = v; }
  const std::vector<Elt>& data() const noexcept { return data_; }

  Vec row(int i) const { return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i) * cols_,
                                    data_.begin() + static_cast<std::ptrdiff_t>(i + 1) * cols_); }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (at(i, j) != (i == j ? field_->one() : 0)) return false;
    return true;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.field_ != b.field_) throw SpecMismatch("matrix operands over different fields");
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
    const FieldSpec& F = *a.field_;
    Matrix out(F, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Elt aik = a.at(i, k);
        if (!aik) continue;
        for (int j = 0; j < b.cols_; ++j) {
          const Elt bkj = b.at(k, j);
          if (bkj) out.set(i, j, F.add(out.at(i, j), F.mul(aik, bkj)));
        }
      }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }
  friend bool operator<(const Matrix& a, const Matrix& b) { return a.data_ < b.data_; }

  Matrix transpose() const {
    Matrix out(*field_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
    return out;
  }

  /// Entrywise x -> x^(p^e).
  Matrix frobenius(int e) const {
    Matrix out = *this;
    if (e % field_->f() == 0) return out;
    for (auto& v : out.data_) v = field_->frobenius(v, e);
    return out;
  }

  Matrix inverse() const {
    if (rows_ != cols_) throw DimensionMismatch("inverse of a non-square matrix");
    const FieldSpec& F = *field_;
    const int n = rows_;
    Matrix a = *this;
    Matrix inv = identity(F, n);
    for (int col = 0; col < n; ++col) {
      int pivot = -1;
      for (int r = col; r < n; ++r)
        if (a.at(r, col)) {
          pivot = r;
          break;
        }
      if (pivot < 0) throw DivisionByZero("matrix is singular");
      a.swap_rows(pivot, col);
      inv.swap_rows(pivot, col);
      const Elt s = F.inv(a.at(col, col));
      a.scale_row(col, s);
      inv.scale_row(col, s);
      for (int r = 0; r < n; ++r) {
        if (r == col || !a.at(r, col)) continue;
        const Elt factor = F.neg(a.at(r, col));
        a.add_row_multiple(r, col, factor);
        inv.add_row_multiple(r, col, factor);
      }
    }
    return inv;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
      os << "[";
      for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << field_->to_string(at(i, j));
      os << "]";
    }
    return os.str();
  }

  void swap_rows(int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols_; ++j) std::swap(data_[static_cast<std::size_t>(a) * cols_ + j],
                                              data_[static_cast<std::size_t>(b) * cols_ + j]);
  }
  void scale_row(int r, Elt s) {
    for (int j = 0; j < cols_; ++j) set(r, j, field_->mul(at(r, j), s));
  }
  // row[r] += s * row[src]
  void add_row_multiple(int r, int src, Elt s) {
    for (int j = 0; j < cols_; ++j)
      if (at(src, j)) set(r, j, field_->add(at(r, j), field_->mul(s, at(src, j))));
  }

 private:
  const FieldSpec* field_;
  int rows_;
  int cols_;
  std::vector<Elt> data_;
};

/// v M for a row vector v.
inline Vec vec_mat(const Vec& v, const Matrix& m) {
  if (static_cast<int>(v.size()) != m.rows()) throw DimensionMismatch("vector length does not match matrix");
  const FieldSpec& F = m.field();
  Vec out(m.cols(), 0);
  for (int i = 0; i < m.rows(); ++i) {
    if (!v[i]) continue;
    for (int j = 0; j < m.cols(); ++j)
      if (m.at(i, j)) out[j] = F.add(out[j], F.mul(v[i], m.at(i, j)));
  }
  return out;
}

inline Vec vec_frobenius(const FieldSpec& F, const Vec& v, int e) {
  if (e % F.f() == 0) return v;
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = F.frobenius(v[i], e);
  return out;
}

/// Reduced row echelon form with zero rows removed. Pivots are 1.
inline Matrix rref(const Matrix& m) {
  const FieldSpec& F = m.field();
  Matrix a = m;
  int r = 0;
  for (int col = 0; col < a.cols() && r < a.rows(); ++col) {
    int pivot = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a.at(i, col)) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    a.swap_rows(pivot, r);
    a.scale_row(r, F.inv(a.at(r, col)));
    for (int i = 0; i < a.rows(); ++i)
      if (i != r && a.at(i, col)) a.add_row_multiple(i, r, F.neg(a.at(i, col)));
    ++r;
  }
  Matrix out(F, r, a.cols());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < a.cols(); ++j) out.set(i, j, a.at(i, j));
  return out;
}

inline int rank(const Matrix& m) { return rref(m).rows(); }

/// Basis (as rows, in RREF) of { x : A x^T = 0 }.
inline Matrix nullspace(const Matrix& a) {
  const FieldSpec& F = a.field();
  const Matrix r = rref(a);
  const int n = a.cols();
  std::vector<int> pivot_col(r.rows());
  std::vector<bool> is_pivot(n, false);
  for (int i = 0; i < r.rows(); ++i) {
    int j = 0;
    while (!r.at(i, j)) ++j;
    pivot_col[i] = j;
    is_pivot[j] = true;
  }
  std::vector<Vec> basis;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vec v(n, 0);
    v[free] = F.one();
    for (int i = 0; i < r.rows(); ++i) v[pivot_col[i]] = F.neg(r.at(i, free));
    basis.push_back(v);
  }
  if (basis.empty()) return Matrix(F, 0, n);
  return rref(Matrix::from_rows(F, basis));
}

/// v -> (v^(p^e)) M. Composition is left to right: (g * h)(v) = h(g(v)).
class SemilinearMap {
 public:
  SemilinearMap(Matrix m, int e = 0) : m_(std::move(m)), e_(0) {
    if (m_.rows() != m_.cols()) throw DimensionMismatch("semilinear map needs a square matrix");
    const int f = m_.field().f();
    e_ = ((e % f) + f) % f;
  }
  static SemilinearMap identity(const FieldSpec& F, int n) { return SemilinearMap(Matrix::identity(F, n), 0); }

  const Matrix& matrix() const noexcept { return m_; }
  int frob() const noexcept { return e_; }
  const FieldSpec& field() const noexcept { return m_.field(); }
  int dim() const noexcept { return m_.rows(); }

  Vec apply(const Vec& v) const { return vec_mat(vec_frobenius(m_.field(), v, e_), m_); }

  friend SemilinearMap operator*(const SemilinearMap& a, const SemilinearMap& b) {
    // v -> ((v^s^ea) A)^s^eb B = v^s^(ea+eb) A^s^eb B
    return SemilinearMap(a.m_.frobenius(b.e_) * b.m_, a.e_ + b.e_);
  }
  SemilinearMap inverse() const {
    // (M, e)^-1 = ((M^s^-e)^-1, -e)
    return SemilinearMap(m_.frobenius(-e_).inverse(), -e_);
  }
  friend bool operator==(const SemilinearMap& a, const SemilinearMap& b) {
    return a.e_ == b.e_ && a.m_ == b.m_;
  }
  bool is_identity() const { return e_ == 0 && m_.is_identity(); }

 private:
  Matrix m_;
  int e_;
};

namespace detail {
inline std::size_t hash_words(const std::vector<Elt>& data, std::size_t seed) {
  std::size_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (Elt v : data) h = (h ^ v) * 0x100000001b3ULL;
  return h;
}
}  // namespace detail

}  // namespace gq

template <>
struct std::hash<gq::Matrix> {
  std::size_t operator()(const gq::Matrix& m) const noexcept {
    return gq::detail::hash_words(m.data(), static_cast<std::size_t>(m.rows()));
  }
};

template <>
struct std::hash<gq::SemilinearMap> {
  std::size_t operator()(const gq::SemilinearMap& s) const noexcept {
    return gq::detail::hash_words(s.matrix().data(), static_cast<std::size_t>(s.frob()) + 17);
  }
};
