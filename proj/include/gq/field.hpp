#pragma once

// Exact arithmetic in GF(p^f).
//
// Elements are stored as indices into [0, q). The index of the element with
// coefficient vector (c0, c1, ..., c{f-1}) (c_i the coefficient of x^i) is
//   c0 * p^(f-1) + c1 * p^(f-2) + ... + c{f-1},
// so the numeric order of indices is the lexicographic order on coefficient
// vectors. Multiplication goes through log/antilog tables, addition through a
// table (odd p, small q), XOR (p = 2) or digit-wise arithmetic.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gq/error.hpp"

namespace gq {

using Elt = std::uint32_t;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline int mod(long long a, int p) {
  long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

inline int inv_mod(int a, int p) {
  // p is prime, a != 0
  int result = 1, base = mod(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) result = static_cast<int>(1LL * result * base % p);
    base = static_cast<int>(1LL * base * base % p);
    e >>= 1;
  }
  return result;
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.
using Poly = std::vector<int>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo b (b nonzero).
inline Poly poly_rem(Poly a, const Poly& b, int p) {
  trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  const int lead_inv = inv_mod(b.back(), p);
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - db;
    const int factor = static_cast<int>(1LL * a.back() * lead_inv % p);
    for (int i = 0; i <= db; ++i)
      a[shift + i] = mod(a[shift + i] - 1LL * factor * b[i], p);
    trim(a);
  }
  return a;
}

/// Exhaustive trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const Poly& poly_in, int p) {
  Poly poly = poly_in;
  trim(poly);
  const int deg = static_cast<int>(poly.size()) - 1;
  if (deg < 1) return false;
  if (deg == 1) return true;
  for (int d = 1; d <= deg / 2; ++d) {
    // enumerate monic polynomials of degree d: p^d of them
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= static_cast<std::uint64_t>(p);
    Poly divisor(d + 1, 0);
    divisor[d] = 1;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::uint64_t c = code;
      for (int i = 0; i < d; ++i) {
        divisor[i] = static_cast<int>(c % p);
        c /= p;
      }
      if (poly_rem(poly, divisor, p).empty()) return false;
    }
  }
  return true;
}

// Fixed irreducible moduli (coefficients lowest degree first), f = 1..6.
inline const std::map<std::pair<int, int>, Poly>& default_moduli() {
  static const std::map<std::pair<int, int>, Poly> table = {
      {{2, 1}, {1, 1}},
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{3, 1}, {1, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{3, 4}, {2, 0, 0, 2, 1}},
      {{3, 5}, {1, 2, 0, 0, 0, 1}},
      {{3, 6}, {2, 2, 1, 0, 2, 0, 1}},
      {{5, 1}, {3, 1}},
      {{5, 2}, {2, 4, 1}},
      {{5, 3}, {3, 3, 0, 1}},
      {{5, 4}, {2, 4, 4, 0, 1}},
      {{5, 5}, {3, 4, 0, 0, 0, 1}},
      {{5, 6}, {2, 0, 1, 4, 1, 0, 1}},
      {{7, 1}, {4, 1}},
      {{7, 2}, {3, 6, 1}},
      {{7, 3}, {4, 0, 6, 1}},
      {{7, 4}, {3, 4, 5, 0, 1}},
      {{7, 5}, {4, 1, 0, 0, 0, 1}},
      {{7, 6}, {3, 6, 4, 5, 1, 0, 1}},
      {{11, 1}, {9, 1}},
      {{11, 2}, {2, 7, 1}},
      {{11, 3}, {9, 2, 0, 1}},
      {{11, 4}, {2, 10, 8, 0, 1}},
      {{11, 5}, {9, 0, 10, 0, 0, 1}},
      {{11, 6}, {2, 7, 6, 4, 3, 0, 1}},
      {{13, 1}, {11, 1}},
      {{13, 2}, {2, 12, 1}},
      {{13, 3}, {11, 2, 0, 1}},
      {{13, 4}, {2, 12, 3, 0, 1}},
      {{13, 5}, {11, 4, 0, 0, 0, 1}},
      {{13, 6}, {2, 11, 11, 10, 0, 0, 1}},
  };
  return table;
}

/// Lexicographically least monic irreducible of degree f (coefficients
/// compared from the constant term upwards).
inline Poly least_irreducible(int p, int f) {
  std::uint64_t count = 1;
  for (int i = 0; i < f; ++i) count *= static_cast<std::uint64_t>(p);
  Poly poly(f + 1, 0);
  poly[f] = 1;
  for (std::uint64_t code = 0; code < count; ++code) {
    // code enumerates (c0, ..., c{f-1}) with c0 most significant
    std::uint64_t c = code;
    for (int i = f - 1; i >= 0; --i) {
      poly[i] = static_cast<int>(c % p);
      c /= p;
    }
    if (is_irreducible(poly, p)) return poly;
  }
  throw InvalidField("no irreducible polynomial found");
}

}  // namespace detail

/// GF(p^f) with a fixed monic irreducible modulus. Immutable after
/// construction; obtain instances through `galois_field`, which keeps them
/// alive for the lifetime of the process.
class FieldSpec {
 public:
  FieldSpec(int p, int f, detail::Poly modulus) : p_(p), f_(f), modulus_(std::move(modulus)) {
    if (!detail::is_prime(static_cast<std::uint64_t>(p)))
      throw InvalidField("characteristic " + std::to_string(p) + " is not prime");
    if (f < 1) throw InvalidField("extension degree must be at least 1");
    if (static_cast<int>(modulus_.size()) != f + 1 || modulus_.back() != 1)
      throw InvalidField("modulus must be monic of degree " + std::to_string(f));
    for (int& c : modulus_) c = detail::mod(c, p);
    if (!detail::is_irreducible(modulus_, p))
      throw InvalidField("modulus " + modulus_string() + " is reducible over GF(" +
                         std::to_string(p) + ")");
    std::uint64_t q = 1;
    for (int i = 0; i < f; ++i) q *= static_cast<std::uint64_t>(p);
    if (q > (1ULL << 24)) throw InvalidField("field too large for table arithmetic");
    q_ = static_cast<std::uint32_t>(q);
    pow_p_.resize(f_ + 1);
    pow_p_[0] = 1;
    for (int i = 1; i <= f_; ++i) pow_p_[i] = pow_p_[i - 1] * static_cast<std::uint32_t>(p_);
    one_ = pow_p_[f_ - 1];
    build_tables();
  }

  int p() const noexcept { return p_; }
  int f() const noexcept { return f_; }
  std::uint32_t q() const noexcept { return q_; }
  const std::vector<int>& modulus() const noexcept { return modulus_; }

  Elt zero() const noexcept { return 0; }
  Elt one() const noexcept { return one_; }

  /// The class of x in GF(p)[x]/(modulus); equals one() when f = 1.
  Elt generator() const noexcept { return f_ == 1 ? one_ : pow_p_[f_ - 2]; }
  /// A fixed generator of the multiplicative group.
  Elt primitive() const noexcept { return q_ == 2 ? one_ : exp_[1]; }

  Elt add(Elt a, Elt b) const noexcept {
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * q_ + b];
    Elt out = 0;
    for (int i = 0; i < f_; ++i) {
      const std::uint32_t da = (a / pow_p_[i]) % p_, db = (b / pow_p_[i]) % p_;
      out += ((da + db) % p_) * pow_p_[i];
    }
    return out;
  }
  Elt neg(Elt a) const noexcept { return neg_[a]; }
  Elt sub(Elt a, Elt b) const noexcept { return add(a, neg_[b]); }
  Elt mul(Elt a, Elt b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elt inv(Elt a) const {
    if (a == 0) throw DivisionByZero("inverse of zero in GF(" + std::to_string(q_) + ")");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }
  Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
  Elt pow(Elt a, long long e) const {
    if (e == 0) return one_;
    if (a == 0) {
      if (e < 0) throw DivisionByZero("negative power of zero");
      return 0;
    }
    const long long order = q_ - 1;
    long long k = (static_cast<long long>(log_[a]) * (e % order)) % order;
    if (k < 0) k += order;
    return exp_[static_cast<std::size_t>(k)];
  }
  /// x -> x^(p^e)
  Elt frobenius(Elt a, int e = 1) const {
    long long power = 1;
    for (int i = 0; i < ((e % f_) + f_) % f_; ++i) power *= p_;
    return pow(a, power);
  }
  /// Image of the integer n under Z -> GF(q).
  Elt from_int(long long n) const noexcept {
    return static_cast<Elt>(detail::mod(n, p_)) * one_;
  }
  /// Discrete logarithm to base primitive(); a must be nonzero.
  std::uint32_t log(Elt a) const {
    if (a == 0) throw DivisionByZero("logarithm of zero");
    return log_[a];
  }

  Elt from_coeffs(const std::vector<int>& coeffs) const {
    if (static_cast<int>(coeffs.size()) > f_)
      throw DimensionMismatch("too many coefficients for GF(" + std::to_string(q_) + ")");
    Elt out = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      out += static_cast<Elt>(detail::mod(coeffs[i], p_)) * pow_p_[f_ - 1 - i];
    return out;
  }
  std::vector<int> coeffs(Elt a) const {
    std::vector<int> out(f_);
    for (int i = 0; i < f_; ++i) out[i] = static_cast<int>((a / pow_p_[f_ - 1 - i]) % p_);
    return out;
  }

  /// GF(p)-basis 1, x, ..., x^(f-1).
  std::vector<Elt> prime_basis() const {
    std::vector<Elt> out;
    for (int i = 0; i < f_; ++i) out.push_back(pow_p_[f_ - 1 - i]);
    return out;
  }

  std::string to_string(Elt a) const {
    std::ostringstream os;
    const auto c = coeffs(a);
    for (int i = 0; i < f_; ++i) os << (i ? "," : "") << c[i];
    return os.str();
  }
  std::string modulus_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < modulus_.size(); ++i) os << (i ? "," : "") << modulus_[i];
    return os.str();
  }

 private:
  using Digits = std::vector<int>;

  Digits to_digits(Elt a) const { return coeffs(a); }
  Elt from_digits(const Digits& d) const { return from_coeffs(d); }

  Digits mulmod(const Digits& a, const Digits& b) const {
    detail::Poly prod(2 * f_, 0);
    for (int i = 0; i < f_; ++i) {
      if (!a[i]) continue;
      for (int j = 0; j < f_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p_;
    }
    auto r = detail::poly_rem(prod, modulus_, p_);
    r.resize(f_, 0);
    return r;
  }

  Digits slow_pow(Digits base, std::uint64_t e) const {
    Digits result(f_, 0);
    result[0] = 1;
    while (e > 0) {
      if (e & 1) result = mulmod(result, base);
      base = mulmod(base, base);
      e >>= 1;
    }
    return result;
  }

  bool is_primitive_slow(Elt candidate) const {
    if (candidate == 0) return false;
    const Digits one_digits = to_digits(one_);
    const std::uint64_t order = q_ - 1;
    for (auto r : detail::prime_factors(order))
      if (slow_pow(to_digits(candidate), order / r) == one_digits) return false;
    return true;
  }

  void build_tables() {
    neg_.resize(q_);
    for (Elt a = 0; a < q_; ++a) {
      auto d = to_digits(a);
      for (int& c : d) c = detail::mod(-c, p_);
      neg_[a] = from_digits(d);
    }
    if (p_ != 2 && q_ <= 1024) {
      add_table_.resize(static_cast<std::size_t>(q_) * q_);
      for (Elt a = 0; a < q_; ++a) {
        const auto da = to_digits(a);
        for (Elt b = 0; b < q_; ++b) {
          auto db = to_digits(b);
          for (int i = 0; i < f_; ++i) db[i] = (db[i] + da[i]) % p_;
          add_table_[static_cast<std::size_t>(a) * q_ + b] = from_digits(db);
        }
      }
    }
    exp_.assign(2 * static_cast<std::size_t>(q_), 0);
    log_.assign(q_, 0);
    if (q_ == 2) {
      exp_[0] = exp_[1] = exp_[2] = one_;
      return;
    }
    Elt g = 0;
    if (f_ > 1 && is_primitive_slow(generator())) {
      g = generator();
    } else {
      for (Elt c = 1; c < q_; ++c)
        if (is_primitive_slow(c)) {
          g = c;
          break;
        }
    }
    Digits cur = to_digits(one_);
    const Digits gd = to_digits(g);
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
      const Elt e = from_digits(cur);
      exp_[i] = e;
      exp_[i + q_ - 1] = e;
      log_[e] = i;
      cur = mulmod(cur, gd);
    }
  }

  int p_;
  int f_;
  detail::Poly modulus_;
  std::uint32_t q_ = 0;
  Elt one_ = 1;
  std::vector<std::uint32_t> pow_p_;
  std::vector<Elt> neg_;
  std::vector<Elt> add_table_;
  std::vector<Elt> exp_;
  std::vector<std::uint32_t> log_;
};

/// Process-wide registry of fields; returned references stay valid forever.
inline const FieldSpec& galois_field(int p, int f, const std::vector<int>& modulus) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, std::vector<int>>, std::unique_ptr<FieldSpec>> registry;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(p, f, modulus);
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;
  auto field = std::make_unique<FieldSpec>(p, f, modulus);
  const FieldSpec& ref = *field;
  registry.emplace(std::move(key), std::move(field));
  return ref;
}

inline const FieldSpec& galois_field(int p, int f) {
  if (!detail::is_prime(static_cast<std::uint64_t>(p)))
    throw InvalidField("characteristic " + std::to_string(p) + " is not prime");
  if (f < 1) throw InvalidField("extension degree must be at least 1");
  const auto& table = detail::default_moduli();
  auto it = table.find({p, f});
  if (it != table.end()) return galois_field(p, f, it->second);
  // a default for f = 1 outside the table: x - 1 (the modulus is immaterial)
  if (f == 1) return galois_field(p, f, std::vector<int>{p - 1, 1});
  return galois_field(p, f, detail::least_irreducible(p, f));
}

/// GF(q) for a prime power q, with the default modulus.
inline const FieldSpec& galois_field(std::uint64_t q) {
  if (q < 2) throw InvalidField("q must be a prime power");
  const auto factors = detail::prime_factors(q);
  if (factors.size() != 1) throw InvalidField(std::to_string(q) + " is not a prime power");
  const int p = static_cast<int>(factors[0]);
  int f = 0;
  for (std::uint64_t r = q; r > 1; r /= p) ++f;
  return galois_field(p, f);
}

/// A value-semantic field element bound to its field.
class FieldElement {
 public:
  FieldElement(const FieldSpec& field, Elt value) : field_(&field), value_(value) {
    if (value >= field.q())
      throw InvalidField("element index out of range for GF(" + std::to_string(field.q()) + ")");
  }

  const FieldSpec& field() const noexcept { return *field_; }
  Elt value() const noexcept { return value_; }
  std::vector<int> coeffs() const { return field_->coeffs(value_); }
  bool is_zero() const noexcept { return value_ == 0; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {*a.field_, a.field_->add(a.value_, b.value_)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {*a.field_, a.field_->sub(a.value_, b.value_)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {*a.field_, a.field_->mul(a.value_, b.value_)};
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return {*a.field_, a.field_->div(a.value_, b.value_)};
  }
  FieldElement operator-() const { return {*field_, field_->neg(value_)}; }
  FieldElement inverse() const { return {*field_, field_->inv(value_)}; }
  FieldElement pow(long long e) const { return {*field_, field_->pow(value_, e)}; }
  FieldElement frobenius(int e = 1) const { return {*field_, field_->frobenius(value_, e)}; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }
  friend bool operator<(const FieldElement& a, const FieldElement& b) {
    check(a, b);
    return a.value_ < b.value_;
  }

  std::string to_string() const { return field_->to_string(value_); }

 private:
  static void check(const FieldElement& a, const FieldElement& b) {
    if (a.field_ != b.field_)
      throw SpecMismatch("operands belong to different fields (GF(" +
                         std::to_string(a.field_->q()) + ") mod " + a.field_->modulus_string() +
                         " vs GF(" + std::to_string(b.field_->q()) + ") mod " +
                         b.field_->modulus_string() + ")");
  }

  const FieldSpec* field_;
  Elt value_;
};

/// All q elements in canonical (lexicographic coefficient) order.
inline std::vector<FieldElement> enumerate(const FieldSpec& field) {
  std::vector<FieldElement> out;
  out.reserve(field.q());
  for (Elt a = 0; a < field.q(); ++a) out.emplace_back(field, a);
  return out;
}

/// { ab(a - b) : a, b in GF(q) } by exhaustion, sorted. In characteristic 2
/// this is { ab(a + b) }.
inline std::vector<FieldElement> triple_image(const FieldSpec& field) {
  std::vector<char> hit(field.q(), 0);
  for (Elt a = 0; a < field.q(); ++a)
    for (Elt b = 0; b < field.q(); ++b)
      hit[field.mul(field.mul(a, b), field.sub(a, b))] = 1;
  std::vector<FieldElement> out;
  for (Elt v = 0; v < field.q(); ++v)
    if (hit[v]) out.emplace_back(field, v);
  return out;
}

}  // namespace gq
