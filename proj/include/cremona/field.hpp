#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cremona/error.hpp"

namespace cremona {

using Integer = mpz_class;
using Rational = mpq_class;

class Scalar;

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Residues never exceed 2^32, so sums fit comfortably in 64 bits.
inline constexpr u64 kMaxCharacteristic = u64{1} << 32;

inline u64 mul_mod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
inline u64 add_mod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
inline u64 sub_mod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 pow_mod(u64 base, u64 exp, u64 p) {
  u64 result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
    exp >>= 1;
  }
  return result;
}

// p is prime and a != 0 mod p.
inline u64 inv_mod(u64 a, u64 p) { return pow_mod(a, p - 2, p); }

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 d : {2u, 3u, 5u, 7u, 11u, 13u}) {
    if (n % d == 0) return n == d;
  }
  for (u64 d = 17; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

// Dense univariate polynomials over F_p, low-to-high, no trailing zeros.
using DensePoly = std::vector<u64>;

inline void trim(DensePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline DensePoly poly_mod(DensePoly a, const DensePoly& b, u64 p) {
  trim(a);
  const u64 lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const u64 factor = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = sub_mod(a[shift + i], mul_mod(factor, b[i], p), p);
    }
    trim(a);
  }
  return a;
}

inline std::pair<DensePoly, DensePoly> poly_divmod(DensePoly a, const DensePoly& b, u64 p) {
  trim(a);
  DensePoly quotient(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  const u64 lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const u64 factor = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    quotient[shift] = factor;
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = sub_mod(a[shift + i], mul_mod(factor, b[i], p), p);
    }
    trim(a);
  }
  return {quotient, a};
}

inline DensePoly poly_sub_mul(const DensePoly& a, const DensePoly& q, const DensePoly& b, u64 p) {
  // a - q*b
  DensePoly out(std::max(a.size(), q.empty() || b.empty() ? 0 : q.size() + b.size() - 1), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] = sub_mod(out[i + j], mul_mod(q[i], b[j], p), p);
    }
  }
  trim(out);
  return out;
}

struct FieldData {
  u64 p = 0;
  unsigned m = 1;
  u64 order = 0;       // p^m, 0 for QQ
  DensePoly modulus;   // monic, degree m; empty when m == 1 or p == 0
};

// Monic irreducible test by trial division against every monic polynomial
// of degree 1..deg/2.
inline bool is_irreducible(const DensePoly& f, u64 p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t k = 1; 2 * k <= deg; ++k) {
    u64 count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= p;
    for (u64 t = 0; t < count; ++t) {
      DensePoly divisor(k + 1, 0);
      u64 rest = t;
      for (std::size_t i = 0; i < k; ++i) {
        divisor[i] = rest % p;
        rest /= p;
      }
      divisor[k] = 1;
      if (poly_mod(f, divisor, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// A field of coefficients or of point coordinates: QQ, GF(p) or GF(p^m).
///
/// Instances are cheap to copy and immutable. Two fields compare equal when
/// characteristic and degree agree; the modulus of GF(p^m) is chosen
/// deterministically so it is then identical as well.
class Field {
 public:
  Field() : data_(std::make_shared<detail::FieldData>()) {}

  static Field rationals() { return Field(); }

  static Field prime(std::uint64_t p) { return extension(p, 1); }

  /// GF(p^m) with the lexicographically smallest monic irreducible modulus,
  /// coefficients compared from x^{m-1} down to the constant term.
  static Field extension(std::uint64_t p, unsigned m) {
    if (!detail::is_prime_u64(p)) throw NotPrime(std::to_string(p) + " is not prime");
    if (p >= detail::kMaxCharacteristic) throw FieldTooLarge("characteristic must be below 2^32");
    if (m == 0) throw DomainMismatch("extension degree must be positive");
    auto data = std::make_shared<detail::FieldData>();
    data->p = p;
    data->m = m;
    Integer order;
    mpz_ui_pow_ui(order.get_mpz_t(), p, m);
    if (order > Integer("4611686018427387904")) throw FieldTooLarge("p^m must stay below 2^62");
    data->order = order.get_ui();
    if (m > 1) {
      const std::uint64_t tails = data->order;
      for (std::uint64_t t = 0; t < tails; ++t) {
        detail::DensePoly candidate(m + 1, 0);
        std::uint64_t rest = t;
        for (unsigned i = 0; i < m; ++i) {
          candidate[i] = rest % p;
          rest /= p;
        }
        candidate[m] = 1;
        if (candidate[0] != 0 && detail::is_irreducible(candidate, p)) {
          data->modulus = std::move(candidate);
          break;
        }
      }
    }
    Field f;
    f.data_ = std::move(data);
    return f;
  }

  std::uint64_t characteristic() const { return data_->p; }
  unsigned degree() const { return data_->m; }
  bool is_rational() const { return data_->p == 0; }
  bool is_finite() const { return data_->p != 0; }
  bool is_prime_field() const { return data_->p != 0 && data_->m == 1; }

  std::uint64_t order() const {
    if (!is_finite()) throw InfiniteField("QQ has no finite order");
    return data_->order;
  }

  /// Monic modulus, low-to-high coefficients. Empty unless degree() > 1.
  const std::vector<std::uint64_t>& modulus() const { return data_->modulus; }

  std::string tag() const {
    if (is_rational()) return "QQ";
    if (data_->m == 1) return "GF(" + std::to_string(data_->p) + ")";
    return "GF(" + std::to_string(data_->p) + "^" + std::to_string(data_->m) + ")";
  }

  friend bool operator==(const Field& a, const Field& b) {
    return a.data_ == b.data_ || (a.data_->p == b.data_->p && a.data_->m == b.data_->m);
  }
  friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }

  /// True when values over `sub` may be used over this field: the same field,
  /// or the prime field GF(p) inside GF(p^m).
  bool contains(const Field& sub) const {
    return *this == sub || (is_finite() && sub.is_prime_field() && sub.characteristic() == characteristic());
  }

  inline Scalar zero() const;
  inline Scalar one() const;
  inline Scalar from_integer(const Integer& value) const;
  inline Scalar from_rational(const Rational& value) const;
  inline Scalar generator() const;
  inline Scalar element(std::uint64_t index) const;
  inline Scalar embed(const Scalar& value) const;
  inline std::vector<Scalar> elements() const;

 private:
  std::shared_ptr<const detail::FieldData> data_;
};

/// An element of a Field. Rationals are kept in lowest terms with positive
/// denominator; finite-field elements are residues, extension elements are
/// coefficient vectors of length m reduced modulo the field modulus.
class Scalar {
 public:
  using Residues = std::vector<std::uint64_t>;

  Scalar() : value_(Rational(0)) {}

  const Field& field() const { return field_; }

  bool is_zero() const {
    return std::visit(
        [](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Rational>) {
            return sgn(v) == 0;
          } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            return v == 0;
          } else {
            return std::all_of(v.begin(), v.end(), [](std::uint64_t c) { return c == 0; });
          }
        },
        value_);
  }

  bool is_one() const { return *this == field_.one(); }

  const Rational& rational() const {
    if (!field_.is_rational()) throw DomainMismatch("not a rational scalar");
    return std::get<Rational>(value_);
  }

  std::uint64_t residue() const {
    if (!field_.is_prime_field()) throw DomainMismatch("not a prime-field scalar");
    return std::get<std::uint64_t>(value_);
  }

  /// Coefficients of the representative over GF(p), low-to-high, length m.
  Residues coefficients() const {
    if (field_.is_prime_field()) return {std::get<std::uint64_t>(value_)};
    if (field_.is_rational()) throw DomainMismatch("not a finite-field scalar");
    return std::get<Residues>(value_);
  }

  /// Position in the enumeration order of the field: sum of c_k p^k.
  std::uint64_t index() const {
    if (field_.is_rational()) throw InfiniteField("QQ elements have no index");
    if (field_.is_prime_field()) return std::get<std::uint64_t>(value_);
    const auto& c = std::get<Residues>(value_);
    std::uint64_t idx = 0;
    for (std::size_t k = c.size(); k-- > 0;) idx = idx * field_.characteristic() + c[k];
    return idx;
  }

  Scalar operator-() const {
    Scalar out = *this;
    std::visit(
        [&](auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Rational>) {
            v = -v;
          } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            v = detail::sub_mod(0, v, field_.characteristic());
          } else {
            for (auto& c : v) c = detail::sub_mod(0, c, field_.characteristic());
          }
        },
        out.value_);
    return out;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    require_same(a, b);
    Scalar out = a;
    const std::uint64_t p = a.field_.characteristic();
    std::visit(
        [&](auto& v) {
          using T = std::decay_t<decltype(v)>;
          const auto& w = std::get<T>(b.value_);
          if constexpr (std::is_same_v<T, Rational>) {
            v += w;
          } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            v = detail::add_mod(v, w, p);
          } else {
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = detail::add_mod(v[i], w[i], p);
          }
        },
        out.value_);
    return out;
  }

  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    require_same(a, b);
    Scalar out = a;
    const std::uint64_t p = a.field_.characteristic();
    std::visit(
        [&](auto& v) {
          using T = std::decay_t<decltype(v)>;
          const auto& w = std::get<T>(b.value_);
          if constexpr (std::is_same_v<T, Rational>) {
            v *= w;
          } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            v = detail::mul_mod(v, w, p);
          } else {
            v = ext_mul(v, w, a.field_);
          }
        },
        out.value_);
    return out;
  }

  Scalar inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero in " + field_.tag());
    Scalar out = *this;
    const std::uint64_t p = field_.characteristic();
    std::visit(
        [&](auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Rational>) {
            v = 1 / v;
          } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            v = detail::inv_mod(v, p);
          } else {
            v = ext_inv(v, field_);
          }
        },
        out.value_);
    return out;
  }

  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  Scalar pow(std::uint64_t exp) const {
    Scalar result = field_.one();
    Scalar base = *this;
    while (exp > 0) {
      if (exp & 1) result *= base;
      exp >>= 1;
      if (exp > 0) base *= base;
    }
    return result;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Plain text: "3/2", "4", or "w^2 + 2*w + 1" for extension elements
  /// (w a root of the modulus).
  std::string to_string() const {
    if (field_.is_rational()) return std::get<Rational>(value_).get_str();
    if (field_.is_prime_field()) return std::to_string(std::get<std::uint64_t>(value_));
    const auto& c = std::get<Residues>(value_);
    std::string out;
    for (std::size_t k = c.size(); k-- > 0;) {
      if (c[k] == 0) continue;
      if (!out.empty()) out += " + ";
      if (k == 0) {
        out += std::to_string(c[k]);
        continue;
      }
      if (c[k] != 1) out += std::to_string(c[k]) + "*";
      out += k == 1 ? "w" : "w^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
  }

  /// True when the value lies in the prime field (or is rational).
  bool in_prime_field() const {
    if (!field_.is_finite() || field_.is_prime_field()) return true;
    const auto& c = std::get<Residues>(value_);
    return std::all_of(c.begin() + 1, c.end(), [](std::uint64_t v) { return v == 0; });
  }

 private:
  friend class Field;

  using Value = std::variant<Rational, std::uint64_t, Residues>;

  Scalar(Field field, Value value) : field_(std::move(field)), value_(std::move(value)) {}

  static void require_same(const Scalar& a, const Scalar& b) {
    if (a.field_ != b.field_) {
      throw DomainMismatch("scalars over " + a.field_.tag() + " and " + b.field_.tag());
    }
  }

  static Residues ext_mul(const Residues& a, const Residues& b, const Field& field) {
    const std::uint64_t p = field.characteristic();
    detail::DensePoly prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        prod[i + j] = detail::add_mod(prod[i + j], detail::mul_mod(a[i], b[j], p), p);
      }
    }
    auto reduced = detail::poly_mod(std::move(prod), field.modulus(), p);
    reduced.resize(field.degree(), 0);
    return reduced;
  }

  // Extended Euclid in F_p[w] against the modulus.
  static Residues ext_inv(const Residues& a, const Field& field) {
    const std::uint64_t p = field.characteristic();
    detail::DensePoly r0 = field.modulus(), r1 = a;
    detail::trim(r1);
    detail::DensePoly s0, s1{1};
    while (!r1.empty()) {
      auto [q, r] = detail::poly_divmod(r0, r1, p);
      auto s = detail::poly_sub_mul(s0, q, s1, p);
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    // r0 is a nonzero constant since the modulus is irreducible.
    const std::uint64_t scale = detail::inv_mod(r0[0], p);
    for (auto& c : s0) c = detail::mul_mod(c, scale, p);
    s0.resize(field.degree(), 0);
    return s0;
  }

  Field field_;
  Value value_;
};

inline Scalar Field::zero() const { return from_integer(0); }
inline Scalar Field::one() const { return from_integer(1); }

inline Scalar Field::from_integer(const Integer& value) const {
  if (is_rational()) return Scalar(*this, Rational(value));
  Integer r = value % Integer(static_cast<unsigned long>(data_->p));
  if (r < 0) r += static_cast<unsigned long>(data_->p);
  const std::uint64_t residue = r.get_ui();
  if (data_->m == 1) return Scalar(*this, residue);
  Scalar::Residues c(data_->m, 0);
  c[0] = residue;
  return Scalar(*this, std::move(c));
}

inline Scalar Field::from_rational(const Rational& value) const {
  if (is_rational()) {
    Rational canonical = value;
    canonical.canonicalize();
    return Scalar(*this, std::move(canonical));
  }
  return from_integer(value.get_num()) / from_integer(value.get_den());
}

inline Scalar Field::generator() const {
  if (!is_finite() || data_->m == 1) throw DomainMismatch(tag() + " has no extension generator");
  Scalar::Residues c(data_->m, 0);
  c[1] = 1;
  return Scalar(*this, std::move(c));
}

inline Scalar Field::element(std::uint64_t index) const {
  if (index >= order()) throw IndexOutOfRange("element index beyond field order");
  if (data_->m == 1) return Scalar(*this, index);
  Scalar::Residues c(data_->m, 0);
  for (unsigned k = 0; k < data_->m; ++k) {
    c[k] = index % data_->p;
    index /= data_->p;
  }
  return Scalar(*this, std::move(c));
}

inline Scalar Field::embed(const Scalar& value) const {
  if (value.field() == *this) return value;
  if (!contains(value.field())) {
    throw DomainMismatch("cannot embed " + value.field().tag() + " into " + tag());
  }
  return from_integer(static_cast<unsigned long>(value.residue()));
}

inline std::vector<Scalar> Field::elements() const {
  const std::uint64_t q = order();
  std::vector<Scalar> out;
  out.reserve(q);
  for (std::uint64_t i = 0; i < q; ++i) out.push_back(element(i));
  return out;
}

/// GF(p^m) with its deterministic modulus; GF(p) when m == 1.
inline Field build_field(std::uint64_t p, unsigned m) { return Field::extension(p, m); }

/// All p^m elements in enumeration order (constant coefficient fastest).
inline std::vector<Scalar> enumerate_field(const Field& field) { return field.elements(); }

}  // namespace cremona
