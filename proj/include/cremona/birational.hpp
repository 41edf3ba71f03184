#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/rational_function.hpp"

namespace cremona {

using Point = std::vector<Scalar>;

/// A d-tuple of rational functions in d variables over one field.
class BirationalTuple {
 public:
  BirationalTuple() = default;

  BirationalTuple(Field field, std::vector<RationalFunction> coords)
      : field_(std::move(field)), coords_(std::move(coords)) {
    if (coords_.empty()) throw DomainMismatch("a tuple needs at least one coordinate");
    for (const auto& c : coords_) {
      if (c.field() != field_) throw DomainMismatch("coordinate over " + c.field().tag() + " in " + field_.tag());
      if (c.variable_count() != coords_.size()) {
        throw DomainMismatch("coordinate in " + std::to_string(c.variable_count()) + " variables for dimension " +
                             std::to_string(coords_.size()));
      }
    }
  }

  const Field& field() const { return field_; }
  std::size_t dimension() const { return coords_.size(); }
  const std::vector<RationalFunction>& coords() const { return coords_; }
  const RationalFunction& operator[](std::size_t i) const { return coords_[i]; }

  /// Coordinate-wise evaluation; std::nullopt when a denominator vanishes.
  std::optional<Point> try_evaluate(std::span<const Scalar> x) const {
    Point out;
    out.reserve(coords_.size());
    for (const auto& c : coords_) {
      Scalar den = c.denominator().evaluate(x);
      if (den.is_zero()) return std::nullopt;
      out.push_back(c.numerator().evaluate(x) / den);
    }
    return out;
  }

  friend bool operator==(const BirationalTuple&, const BirationalTuple&) = default;

 private:
  Field field_;
  std::vector<RationalFunction> coords_;
};

inline BirationalTuple identity(std::size_t d, const Field& field) {
  if (d == 0) throw DomainMismatch("dimension must be positive");
  std::vector<RationalFunction> coords;
  for (std::size_t i = 0; i < d; ++i) coords.push_back(RationalFunction::variable(field, d, i));
  return BirationalTuple(field, std::move(coords));
}

/// Numerator and denominator of g(f_1, ..., f_d) after clearing, before the
/// leading-coefficient normalization of RationalFunction.
struct ClearedFraction {
  Polynomial numerator;
  Polynomial denominator;
};

namespace detail {

class PowerCache {
 public:
  explicit PowerCache(Polynomial base) {
    powers_.push_back(Polynomial::constant(base.field(), base.variable_count(), 1));
    powers_.push_back(std::move(base));
  }

  const Polynomial& operator()(std::uint64_t e) {
    while (powers_.size() <= e) powers_.push_back(powers_.back() * powers_[1]);
    return powers_[e];
  }

 private:
  std::vector<Polynomial> powers_;
};

}  // namespace detail

/// Substitutes f into g and clears to one fraction. Substituted variables are
/// grouped by identical denominator Y_k; with delta_k the largest degree of
/// any monomial of g in the variables of group k, both numerator and
/// denominator of g are multiplied by prod_k Y_k^{delta_k}.
inline ClearedFraction substitute_cleared(const RationalFunction& g, std::span<const RationalFunction> f) {
  const std::size_t nvars = g.variable_count();
  if (f.size() != nvars) throw DomainMismatch("substitution arity mismatch");
  const Field& field = f.front().field();
  const std::size_t target_vars = f.front().variable_count();

  std::vector<Polynomial> group_dens;
  std::vector<int> group_of(nvars, -1);
  std::vector<detail::PowerCache> num_pow;
  for (std::size_t j = 0; j < nvars; ++j) {
    num_pow.emplace_back(f[j].numerator());
    const Polynomial& den = f[j].denominator();
    if (den.is_one()) continue;
    auto it = std::find(group_dens.begin(), group_dens.end(), den);
    group_of[j] = static_cast<int>(it - group_dens.begin());
    if (it == group_dens.end()) group_dens.push_back(den);
  }
  const std::size_t groups = group_dens.size();
  std::vector<detail::PowerCache> den_pow;
  for (const auto& y : group_dens) den_pow.emplace_back(y);

  auto group_degrees = [&](const Exponents& e) {
    std::vector<std::uint64_t> out(groups, 0);
    for (std::size_t j = 0; j < nvars; ++j) {
      if (group_of[j] >= 0) out[group_of[j]] += e[j];
    }
    return out;
  };

  std::vector<std::uint64_t> delta(groups, 0);
  for (const Polynomial* poly : {&g.numerator(), &g.denominator()}) {
    for (const auto& t : poly->terms()) {
      auto gd = group_degrees(t.exponents);
      for (std::size_t k = 0; k < groups; ++k) delta[k] = std::max(delta[k], gd[k]);
    }
  }

  auto clear = [&](const Polynomial& poly) {
    Polynomial sum(field, target_vars);
    for (const auto& t : poly.terms()) {
      Polynomial value = Polynomial::constant(field, target_vars, t.coefficient);
      for (std::size_t j = 0; j < nvars; ++j) {
        if (t.exponents[j] != 0) value *= num_pow[j](t.exponents[j]);
      }
      auto gd = group_degrees(t.exponents);
      for (std::size_t k = 0; k < groups; ++k) {
        if (delta[k] != gd[k]) value *= den_pow[k](delta[k] - gd[k]);
      }
      sum += value;
    }
    return sum;
  };

  if (g.field() != field) throw DomainMismatch("composition across fields");
  return {clear(g.numerator()), clear(g.denominator())};
}

/// Raw cleared coordinates of g∘f, one per coordinate of g.
inline std::vector<ClearedFraction> compose_cleared(const BirationalTuple& g, const BirationalTuple& f) {
  if (g.dimension() != f.dimension() || g.field() != f.field()) {
    throw DomainMismatch("composition of tuples of different dimension or field");
  }
  std::vector<ClearedFraction> out;
  out.reserve(g.dimension());
  for (const auto& gi : g.coords()) out.push_back(substitute_cleared(gi, f.coords()));
  return out;
}

/// g∘f: substitute the coordinates of f into those of g.
inline BirationalTuple compose(const BirationalTuple& g, const BirationalTuple& f) {
  auto cleared = compose_cleared(g, f);
  std::vector<RationalFunction> coords;
  coords.reserve(cleared.size());
  for (std::size_t i = 0; i < cleared.size(); ++i) {
    if (cleared[i].denominator.is_zero()) {
      throw DegenerateComposition("denominator of coordinate " + std::to_string(i) +
                                  " vanishes identically after substitution");
    }
    coords.emplace_back(std::move(cleared[i].numerator), std::move(cleared[i].denominator));
  }
  return BirationalTuple(f.field(), std::move(coords));
}

inline bool tuple_eq(const BirationalTuple& f, const BirationalTuple& g) {
  if (f.dimension() != g.dimension() || f.field() != g.field()) {
    throw DomainMismatch("comparing tuples of different dimension or field");
  }
  for (std::size_t i = 0; i < f.dimension(); ++i) {
    if (!frac_eq(f[i], g[i])) return false;
  }
  return true;
}

/// Stored nonconstant denominators, in coordinate order.
inline std::vector<Polynomial> indeterminacy_polys(const BirationalTuple& f) {
  std::vector<Polynomial> out;
  for (const auto& c : f.coords()) {
    if (!c.denominator().is_constant()) out.push_back(c.denominator());
  }
  return out;
}

/// Raised by certify_inverse. Carries the first coordinate at which a
/// composite differs from the identity and the nonzero cross product.
class NotInverse : public Error {
 public:
  NotInverse(std::string composite, std::size_t coordinate, Polynomial witness)
      : Error(ErrorCode::not_inverse, composite + " differs from the identity in coordinate " +
                                          std::to_string(coordinate)),
        composite_(std::move(composite)),
        coordinate_(coordinate),
        witness_(std::move(witness)) {}

  const std::string& composite() const { return composite_; }
  std::size_t coordinate() const { return coordinate_; }
  const Polynomial& witness() const { return witness_; }

 private:
  std::string composite_;
  std::size_t coordinate_;
  Polynomial witness_;
};

/// An element of Cr_d(K): a tuple with a symbolically certified inverse.
/// Only certify_inverse (and products of certified elements) create these.
class CremonaElement {
 public:
  const BirationalTuple& forward() const { return forward_; }
  const BirationalTuple& inverse() const { return inverse_; }
  const std::string& name() const { return name_; }
  std::size_t dimension() const { return forward_.dimension(); }
  const Field& field() const { return forward_.field(); }

  CremonaElement inverted() const { return CremonaElement(inverse_, forward_, inverse_name(name_)); }

  CremonaElement renamed(std::string name) const { return CremonaElement(forward_, inverse_, std::move(name)); }

  /// this ∘ other, with inverse other^{-1} ∘ this^{-1}. No re-certification:
  /// products of certified elements are certified.
  CremonaElement then_after(const CremonaElement& other) const {
    return CremonaElement(compose(forward_, other.forward_), compose(other.inverse_, inverse_),
                          name_.empty() || other.name_.empty() ? std::string() : name_ + "*" + other.name_);
  }

  static CremonaElement identity(std::size_t d, const Field& field) {
    auto id = cremona::identity(d, field);
    return CremonaElement(id, id, "id");
  }

 private:
  friend CremonaElement certify_inverse(const BirationalTuple&, const BirationalTuple&, std::string);

  CremonaElement(BirationalTuple forward, BirationalTuple inverse, std::string name)
      : forward_(std::move(forward)), inverse_(std::move(inverse)), name_(std::move(name)) {}

  static std::string inverse_name(const std::string& name) {
    if (name.empty() || name == "id") return name;
    if (name.size() > 3 && name.ends_with("^-1")) return name.substr(0, name.size() - 3);
    return name + "^-1";
  }

  BirationalTuple forward_;
  BirationalTuple inverse_;
  std::string name_;
};

/// Admits (f, g) as a mutually inverse pair when both f∘g and g∘f equal the
/// identity coordinate-wise under cross-multiplication.
inline CremonaElement certify_inverse(const BirationalTuple& f, const BirationalTuple& g, std::string name = {}) {
  if (f.dimension() != g.dimension() || f.field() != g.field()) {
    throw DomainMismatch("inverse candidate has different dimension or field");
  }
  const auto id = identity(f.dimension(), f.field());
  auto check = [&](const BirationalTuple& composite, const char* label) {
    for (std::size_t i = 0; i < composite.dimension(); ++i) {
      Polynomial diff = cross_difference(composite[i], id[i]);
      if (!diff.is_zero()) throw NotInverse(label, i, std::move(diff));
    }
  };
  check(compose(f, g), "f∘g");
  check(compose(g, f), "g∘f");
  return CremonaElement(f, g, std::move(name));
}

/// Point-wise membership in Z_f = X_f ∪ f^{-1}(X_{f'}).
inline bool in_singular_set(const CremonaElement& e, std::span<const Scalar> x) {
  auto image = e.forward().try_evaluate(x);
  if (!image) return true;
  for (const auto& c : e.inverse().coords()) {
    if (c.denominator().evaluate(*image).is_zero()) return true;
  }
  return false;
}

/// f(x), or std::nullopt when x ∈ Z_f.
inline std::optional<Point> try_eval_point(const CremonaElement& e, std::span<const Scalar> x) {
  auto image = e.forward().try_evaluate(x);
  if (!image) return std::nullopt;
  for (const auto& c : e.inverse().coords()) {
    if (c.denominator().evaluate(*image).is_zero()) return std::nullopt;
  }
  return image;
}

inline Point eval_point(const CremonaElement& e, std::span<const Scalar> x) {
  auto image = try_eval_point(e, x);
  if (!image) throw SingularPoint("point lies in the singular set of " + (e.name().empty() ? "the element" : e.name()));
  return *image;
}

}  // namespace cremona
