#pragma once

#include <span>
#include <string>
#include <utility>

#include "cremona/error.hpp"
#include "cremona/polynomial.hpp"

namespace cremona {

/// Quotient of two polynomials with a nonzero denominator.
///
/// No polynomial gcd is taken. The only normalization scales numerator and
/// denominator so that the leading (grlex) coefficient of the denominator is
/// 1; a constant denominator therefore becomes exactly 1. Equality of values
/// is decided by frac_eq, not by operator==, which is structural.
class RationalFunction {
 public:
  RationalFunction() = default;

  explicit RationalFunction(Polynomial numerator)
      : numerator_(std::move(numerator)),
        denominator_(Polynomial::constant(numerator_.field(), numerator_.variable_count(), 1)) {}

  RationalFunction(Polynomial numerator, Polynomial denominator)
      : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
    if (numerator_.field() != denominator_.field() ||
        numerator_.variable_count() != denominator_.variable_count()) {
      throw DomainMismatch("numerator and denominator disagree on field or variable count");
    }
    if (denominator_.is_zero()) throw ZeroDenominator("denominator is the zero polynomial");
    normalize();
  }

  static RationalFunction variable(const Field& field, std::size_t nvars, std::size_t index) {
    return RationalFunction(Polynomial::variable(field, nvars, index));
  }

  static RationalFunction constant(const Field& field, std::size_t nvars, const Scalar& c) {
    return RationalFunction(Polynomial::constant(field, nvars, c));
  }

  const Polynomial& numerator() const { return numerator_; }
  const Polynomial& denominator() const { return denominator_; }
  const Field& field() const { return numerator_.field(); }
  std::size_t variable_count() const { return numerator_.variable_count(); }

  bool is_zero() const { return numerator_.is_zero(); }
  bool is_polynomial() const { return denominator_.is_constant(); }

  RationalFunction operator-() const { return RationalFunction(-numerator_, denominator_, Normalized{}); }

  friend RationalFunction operator+(const RationalFunction& f, const RationalFunction& g) {
    if (f.denominator_ == g.denominator_) {
      return RationalFunction(f.numerator_ + g.numerator_, f.denominator_, Normalized{});
    }
    return RationalFunction(f.numerator_ * g.denominator_ + g.numerator_ * f.denominator_,
                            f.denominator_ * g.denominator_);
  }

  friend RationalFunction operator-(const RationalFunction& f, const RationalFunction& g) { return f + (-g); }

  friend RationalFunction operator*(const RationalFunction& f, const RationalFunction& g) {
    return RationalFunction(f.numerator_ * g.numerator_, f.denominator_ * g.denominator_);
  }

  friend RationalFunction operator/(const RationalFunction& f, const RationalFunction& g) {
    if (g.is_zero()) throw DivisionByZero("division by the zero rational function");
    return RationalFunction(f.numerator_ * g.denominator_, f.denominator_ * g.numerator_);
  }

  RationalFunction pow(std::uint64_t exp) const {
    return RationalFunction(numerator_.pow(exp), denominator_.pow(exp));
  }

  /// numerator(point) / denominator(point); throws DenominatorVanishes when
  /// the point is in this coordinate's indeterminacy locus.
  Scalar evaluate(std::span<const Scalar> point) const {
    Scalar den = denominator_.evaluate(point);
    if (den.is_zero()) throw DenominatorVanishes("denominator vanishes at the point");
    return numerator_.evaluate(point) / den;
  }

  /// The polynomial N_f D_g - N_g D_f; zero exactly when f and g agree.
  friend Polynomial cross_difference(const RationalFunction& f, const RationalFunction& g) {
    return f.numerator_ * g.denominator_ - g.numerator_ * f.denominator_;
  }

  friend bool operator==(const RationalFunction& f, const RationalFunction& g) {
    return f.numerator_ == g.numerator_ && f.denominator_ == g.denominator_;
  }

 private:
  struct Normalized {};
  RationalFunction(Polynomial numerator, Polynomial denominator, Normalized)
      : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {}

  void normalize() {
    const Scalar lead = denominator_.leading_coefficient();
    if (lead.is_one()) return;
    const Scalar inv = lead.inverse();
    numerator_ = numerator_.scaled(inv);
    denominator_ = denominator_.scaled(inv);
  }

  Polynomial numerator_;
  Polynomial denominator_ = Polynomial::constant(Field::rationals(), 1, 1);
};

enum class FracOp { add, mul };

inline RationalFunction frac_arith(FracOp op, const RationalFunction& f, const RationalFunction& g) {
  return op == FracOp::add ? f + g : f * g;
}

/// Cross-multiplication equality: N_f D_g - N_g D_f == 0.
inline bool frac_eq(const RationalFunction& f, const RationalFunction& g) {
  if (f == g) return true;
  return cross_difference(f, g).is_zero();
}

inline Scalar frac_eval(const RationalFunction& f, std::span<const Scalar> point) { return f.evaluate(point); }

}  // namespace cremona
