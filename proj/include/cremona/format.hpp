#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "cremona/birational.hpp"
#include "cremona/polynomial.hpp"
#include "cremona/rational_function.hpp"

namespace cremona {

/// x, y, z for dimension up to 3, t1..td beyond.
inline std::vector<std::string> variable_names(std::size_t nvars) {
  if (nvars <= 3) {
    static const char* short_names[] = {"x", "y", "z"};
    return {short_names, short_names + nvars};
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < nvars; ++i) out.push_back("t" + std::to_string(i + 1));
  return out;
}

namespace detail {

inline bool is_negative(const Scalar& c) { return c.field().is_rational() && sgn(c.rational()) < 0; }

// Coefficient text usable as a left factor of `*`. Extension elements that
// are not in the prime field are parenthesized.
inline std::string coefficient_text(const Scalar& c) {
  if (c.in_prime_field()) {
    if (c.field().is_finite() && !c.field().is_prime_field()) return std::to_string(c.coefficients()[0]);
    return c.to_string();
  }
  return "(" + c.to_string() + ")";
}

inline std::string monomial_text(const Exponents& e, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[k];
    if (e[k] > 1) out += "^" + std::to_string(e[k]);
  }
  return out;
}

}  // namespace detail

/// Canonical text: terms in descending grlex order, e.g. `x^2*y - 3/2*x + 1`.
inline std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  const auto names = variable_names(p.variable_count());
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Scalar c = t.coefficient;
    bool negative = detail::is_negative(c);
    if (negative) c = -c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const std::string mono = detail::monomial_text(t.exponents, names);
    if (mono.empty()) {
      out += detail::coefficient_text(c);
    } else if (c.is_one()) {
      out += mono;
    } else {
      out += detail::coefficient_text(c) + "*" + mono;
    }
  }
  return out;
}

/// `num` when the denominator is 1, otherwise `(num)/(den)` with parentheses
/// dropped around a single-term numerator and a bare variable power.
inline std::string to_string(const RationalFunction& f) {
  const Polynomial& num = f.numerator();
  const Polynomial& den = f.denominator();
  if (den.is_one()) return to_string(num);
  std::string n = to_string(num);
  if (num.term_count() > 1) n = "(" + n + ")";
  std::string d = to_string(den);
  bool bare_power = den.term_count() == 1 && den.terms().front().coefficient.is_one();
  if (bare_power) {
    const auto& e = den.terms().front().exponents;
    bare_power = std::count_if(e.begin(), e.end(), [](std::uint32_t v) { return v != 0; }) == 1;
  }
  if (!bare_power) d = "(" + d + ")";
  return n + "/" + d;
}

/// `[expr_1, ..., expr_d] over FIELD`.
inline std::string to_string(const BirationalTuple& f) {
  std::string out = "[";
  for (std::size_t i = 0; i < f.dimension(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(f[i]);
  }
  return out + "] over " + f.field().tag();
}

inline std::string render(const Polynomial& p) { return to_string(p); }
inline std::string render(const RationalFunction& f) { return to_string(f); }
inline std::string render(const BirationalTuple& f) { return to_string(f); }

/// Generator-file block: `name: TUPLE ; inverse: TUPLE`.
inline std::string render(const CremonaElement& e) {
  return (e.name().empty() ? std::string("_") : e.name()) + ": " + to_string(e.forward()) +
         " ; inverse: " + to_string(e.inverse());
}

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << to_string(p); }
inline std::ostream& operator<<(std::ostream& os, const RationalFunction& f) { return os << to_string(f); }
inline std::ostream& operator<<(std::ostream& os, const BirationalTuple& f) { return os << to_string(f); }

/// Total length of the canonical text of both tuples; the formula-size
/// measure used for growth regression.
inline std::size_t formula_size(const CremonaElement& e) {
  return to_string(e.forward()).size() + to_string(e.inverse()).size();
}

}  // namespace cremona
