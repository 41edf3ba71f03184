#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "cremona/birational.hpp"
#include "cremona/format.hpp"
#include "cremona/parse.hpp"

namespace cremona::testing {

inline const Field& QQ() {
  static const Field f = Field::rationals();
  return f;
}

inline Field GF(std::uint64_t p, unsigned m = 1) { return Field::extension(p, m); }

inline Polynomial poly(const std::string& text, const Field& field = QQ(), std::size_t nvars = 2) {
  return parse_polynomial(text, field, nvars);
}

inline RationalFunction frac(const std::string& text, const Field& field = QQ(), std::size_t nvars = 2) {
  return parse_rational_function(text, field, nvars);
}

inline BirationalTuple tuple(const std::string& text) { return parse_map_expr(text); }

inline CremonaElement element(const std::string& forward, const std::string& inverse, const std::string& name = "") {
  return certify_inverse(tuple(forward), tuple(inverse), name);
}

inline Point point(const Field& field, std::initializer_list<long> coords) {
  Point out;
  for (long c : coords) out.push_back(field.from_integer(c));
  return out;
}

/// Random sparse polynomials with small coefficients, for property tests.
class PolyGen {
 public:
  PolyGen(Field field, std::size_t nvars, std::uint64_t seed) : field_(std::move(field)), nvars_(nvars), rng_(seed) {}

  Scalar scalar(bool nonzero = false) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    while (true) {
      Scalar s = field_.is_rational() ? field_.from_rational(Rational(num(rng_), den(rng_)))
                                      : field_.from_integer(num(rng_));
      if (!nonzero || !s.is_zero()) return s;
    }
  }

  Polynomial polynomial(int max_terms = 4, int max_degree = 3) {
    std::uniform_int_distribution<int> terms(0, max_terms), deg(0, max_degree);
    std::vector<Term> out;
    const int count = terms(rng_);
    for (int t = 0; t < count; ++t) {
      Exponents e(nvars_, 0);
      int budget = deg(rng_);
      for (std::size_t k = 0; k < nvars_ && budget > 0; ++k) {
        std::uniform_int_distribution<int> part(0, budget);
        e[k] = part(rng_);
        budget -= static_cast<int>(e[k]);
      }
      out.push_back({e, scalar(true)});
    }
    return Polynomial::from_terms(field_, nvars_, std::move(out));
  }

  Polynomial nonzero_polynomial(int max_terms = 3, int max_degree = 2) {
    while (true) {
      auto p = polynomial(max_terms, max_degree);
      if (!p.is_zero()) return p;
    }
  }

  RationalFunction fraction() { return RationalFunction(polynomial(), nonzero_polynomial()); }

  std::mt19937_64& rng() { return rng_; }

 private:
  Field field_;
  std::size_t nvars_;
  std::mt19937_64 rng_;
};

/// Translations, linear maps, the standard involution, a coordinate swap,
/// triangular and de Jonquières maps in dimension 2.
inline std::vector<CremonaElement> element_pool(const std::string& field_tag) {
  const std::vector<std::array<std::string, 3>> specs = {
      {"t", "[x+1, y+2]", "[x-1, y-2]"},
      {"l", "[x+y, y]", "[x-y, y]"},
      {"s", "[1/x, 1/y]", "[1/x, 1/y]"},
      {"w", "[y, x]", "[y, x]"},
      {"h", "[x+y^2, y]", "[x-y^2, y]"},
      {"m", "[x/(x+1), y]", "[x/(1-x), y]"},
      {"j", "[x, x*y]", "[x, y/x]"},
      {"d", "[2*x, 3*y]", "[x/2, y/3]"},
  };
  std::vector<CremonaElement> out;
  for (const auto& [name, f, g] : specs) {
    out.push_back(element(f + " over " + field_tag, g + " over " + field_tag, name));
  }
  return out;
}

}  // namespace cremona::testing
