#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/field.hpp"

namespace cremona {

using Exponents = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const Exponents& e) {
  std::uint64_t s = 0;
  for (auto v : e) s += v;
  return s;
}

/// Graded lexicographic order, variables in declaration order (t1 > t2 > ...).
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const {
    const auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

struct Term {
  Exponents exponents;
  Scalar coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse multivariate polynomial over a Field. Terms are stored in
/// descending graded-lex order with no zero coefficients.
class Polynomial {
 public:
  Polynomial() : nvars_(1) {}
  Polynomial(Field field, std::size_t nvars) : field_(std::move(field)), nvars_(nvars) {
    if (nvars_ == 0) throw DomainMismatch("polynomials need at least one variable");
  }

  static Polynomial constant(const Field& field, std::size_t nvars, const Scalar& c) {
    Polynomial out(field, nvars);
    if (c.field() != field) throw DomainMismatch("constant over " + c.field().tag() + " in " + field.tag());
    if (!c.is_zero()) out.terms_.push_back({Exponents(nvars, 0), c});
    return out;
  }

  static Polynomial constant(const Field& field, std::size_t nvars, long c) {
    return constant(field, nvars, field.from_integer(c));
  }

  static Polynomial variable(const Field& field, std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw IndexOutOfRange("variable index " + std::to_string(index));
    Polynomial out(field, nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    out.terms_.push_back({std::move(e), field.one()});
    return out;
  }

  /// Sums duplicate exponent vectors, drops zeros and sorts.
  static Polynomial from_terms(const Field& field, std::size_t nvars, std::vector<Term> terms) {
    std::map<Exponents, Scalar, GrlexGreater> acc;
    for (auto& t : terms) {
      if (t.exponents.size() != nvars) throw DomainMismatch("exponent vector length mismatch");
      if (t.coefficient.field() != field) throw DomainMismatch("coefficient field mismatch");
      auto [it, inserted] = acc.try_emplace(std::move(t.exponents), t.coefficient);
      if (!inserted) it->second += t.coefficient;
    }
    Polynomial out(field, nvars);
    out.absorb(acc);
    return out;
  }

  const Field& field() const { return field_; }
  std::size_t variable_count() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.front().exponents) == 0);
  }
  bool is_one() const { return is_constant() && !is_zero() && terms_.front().coefficient.is_one(); }

  std::uint64_t degree() const { return terms_.empty() ? 0 : total_degree(terms_.front().exponents); }

  std::uint32_t degree_in(std::size_t var) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exponents[var]);
    return d;
  }

  /// Coefficient of the grlex-leading term; zero for the zero polynomial.
  Scalar leading_coefficient() const { return terms_.empty() ? field_.zero() : terms_.front().coefficient; }

  Scalar constant_term() const {
    if (!terms_.empty() && total_degree(terms_.back().exponents) == 0) return terms_.back().coefficient;
    return field_.zero();
  }

  Polynomial operator-() const {
    Polynomial out = *this;
    for (auto& t : out.terms_) t.coefficient = -t.coefficient;
    return out;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    require_compatible(a, b);
    Polynomial out(a.field_, a.nvars_);
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    GrlexGreater greater;
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      const auto& ta = a.terms_[i];
      const auto& tb = b.terms_[j];
      if (greater(ta.exponents, tb.exponents)) {
        out.terms_.push_back(ta);
        ++i;
      } else if (greater(tb.exponents, ta.exponents)) {
        out.terms_.push_back(tb);
        ++j;
      } else {
        Scalar c = ta.coefficient + tb.coefficient;
        if (!c.is_zero()) out.terms_.push_back({ta.exponents, std::move(c)});
        ++i;
        ++j;
      }
    }
    for (; i < a.terms_.size(); ++i) out.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) out.terms_.push_back(b.terms_[j]);
    return out;
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    require_compatible(a, b);
    if (a.is_zero() || b.is_zero()) return Polynomial(a.field_, a.nvars_);
    if (b.is_constant()) return a.scaled(b.terms_.front().coefficient);
    if (a.is_constant()) return b.scaled(a.terms_.front().coefficient);
    std::map<Exponents, Scalar, GrlexGreater> acc;
    Exponents e(a.nvars_);
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        for (std::size_t k = 0; k < a.nvars_; ++k) e[k] = ta.exponents[k] + tb.exponents[k];
        Scalar c = ta.coefficient * tb.coefficient;
        auto [it, inserted] = acc.try_emplace(e, c);
        if (!inserted) it->second += c;
      }
    }
    Polynomial out(a.field_, a.nvars_);
    out.absorb(acc);
    return out;
  }

  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }

  Polynomial scaled(const Scalar& c) const {
    if (c.field() != field_) throw DomainMismatch("scalar over " + c.field().tag() + " in " + field_.tag());
    Polynomial out(field_, nvars_);
    if (c.is_zero()) return out;
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) out.terms_.push_back({t.exponents, t.coefficient * c});
    return out;
  }

  Polynomial pow(std::uint64_t exp) const {
    Polynomial result = constant(field_, nvars_, 1);
    Polynomial base = *this;
    while (exp > 0) {
      if (exp & 1) result *= base;
      exp >>= 1;
      if (exp > 0) base *= base;
    }
    return result;
  }

  /// Term-wise evaluation. The point may lie in an extension of the
  /// coefficient field (GF(p) coefficients at GF(p^m) points).
  Scalar evaluate(std::span<const Scalar> point) const {
    if (point.size() != nvars_) {
      throw DomainMismatch("point of length " + std::to_string(point.size()) + " for " +
                           std::to_string(nvars_) + " variables");
    }
    const Field& target = point.empty() ? field_ : point.front().field();
    for (const auto& x : point) {
      if (x.field() != target) throw DomainMismatch("point coordinates over different fields");
    }
    if (!target.contains(field_)) {
      throw DomainMismatch("cannot evaluate " + field_.tag() + " polynomial at " + target.tag() + " point");
    }
    std::vector<std::vector<Scalar>> powers(nvars_);
    for (std::size_t k = 0; k < nvars_; ++k) {
      powers[k].push_back(target.one());
      const std::uint32_t dk = degree_in(k);
      for (std::uint32_t e = 1; e <= dk; ++e) powers[k].push_back(powers[k].back() * point[k]);
    }
    Scalar sum = target.zero();
    for (const auto& t : terms_) {
      Scalar value = target.embed(t.coefficient);
      for (std::size_t k = 0; k < nvars_; ++k) {
        if (t.exponents[k] != 0) value *= powers[k][t.exponents[k]];
      }
      sum += value;
    }
    return sum;
  }

  /// Applies `fn` to every coefficient, producing a polynomial over `target`.
  template <class Fn>
  Polynomial map_coefficients(const Field& target, Fn&& fn) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.exponents, fn(t.coefficient)});
    return from_terms(target, nvars_, std::move(out));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.field_ == b.field_ && a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  static void require_compatible(const Polynomial& a, const Polynomial& b) {
    if (a.field_ != b.field_) throw DomainMismatch("polynomials over " + a.field_.tag() + " and " + b.field_.tag());
    if (a.nvars_ != b.nvars_) {
      throw DomainMismatch("polynomials in " + std::to_string(a.nvars_) + " and " + std::to_string(b.nvars_) +
                           " variables");
    }
  }

  void absorb(std::map<Exponents, Scalar, GrlexGreater>& acc) {
    terms_.clear();
    terms_.reserve(acc.size());
    for (auto& [e, c] : acc) {
      if (!c.is_zero()) terms_.push_back({e, std::move(c)});
    }
  }

  Field field_;
  std::size_t nvars_;
  std::vector<Term> terms_;
};

enum class PolyOp { add, mul, neg };

inline Polynomial poly_arith(PolyOp op, const Polynomial& p, const Polynomial& q) {
  switch (op) {
    case PolyOp::add: return p + q;
    case PolyOp::mul: return p * q;
    case PolyOp::neg: return -p;
  }
  return p;
}

inline Scalar poly_eval(const Polynomial& p, std::span<const Scalar> point) { return p.evaluate(point); }

}  // namespace cremona
