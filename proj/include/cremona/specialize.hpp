#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "cremona/birational.hpp"
#include "cremona/error.hpp"

namespace cremona {

namespace detail {

inline Integer pollard_rho(const Integer& n) {
  if (n % 2 == 0) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer x = 2, y = 2, d = 1;
    auto step = [&](const Integer& v) -> Integer { return (v * v + c) % n; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      Integer diff = abs(x - y);
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

inline void factor_into(Integer n, std::set<Integer>& primes) {
  n = abs(n);
  if (n <= 1) return;
  for (unsigned long q = 2; q < 1000 && q * q <= n; ++q) {
    if (n % q != 0) continue;
    primes.insert(q);
    while (n % q == 0) n /= q;
  }
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
    primes.insert(n);
    return;
  }
  Integer d = pollard_rho(n);
  factor_into(d, primes);
  factor_into(n / d, primes);
}

inline void factor_rational(const Rational& r, std::set<Integer>& primes) {
  factor_into(r.get_num(), primes);
  factor_into(r.get_den(), primes);
}

inline void collect_denominator_primes(const Polynomial& p, std::set<Integer>& primes) {
  for (const auto& t : p.terms()) factor_into(t.coefficient.rational().get_den(), primes);
}

inline void collect_denominator_primes(const BirationalTuple& f, std::set<Integer>& primes) {
  for (const auto& c : f.coords()) {
    collect_denominator_primes(c.numerator(), primes);
    collect_denominator_primes(c.denominator(), primes);
  }
}

inline Rational coefficient_product(const Polynomial& p) {
  Rational out = 1;
  for (const auto& t : p.terms()) out *= t.coefficient.rational();
  return out;
}

inline std::size_t find_equal(const std::vector<CremonaElement>& set, const BirationalTuple& f) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (tuple_eq(set[i].forward(), f)) return i;
  }
  return set.size();
}

}  // namespace detail

/// Reduction data for a finite symmetric set W of transformations over QQ.
struct SpecializationPlan {
  std::vector<CremonaElement> source;  // W without repetitions, input order
  Rational c1 = 1;
  Rational c2 = 1;
  std::vector<Integer> bad_primes;  // ascending
  std::uint64_t chosen_prime = 0;

  bool is_bad(std::uint64_t p) const {
    return std::binary_search(bad_primes.begin(), bad_primes.end(), Integer(static_cast<unsigned long>(p)));
  }
};

/// Computes c1, c2 and the bad primes of W.
///
/// c1 multiplies the nonzero coefficients of the cleared denominators of
/// every composite u∘v, taken before normalization so that reduction mod a
/// good prime cannot make a cleared denominator vanish. c2 multiplies the
/// nonzero coefficients of num(u_i)den(v_i) - num(v_i)den(u_i) over distinct
/// pairs.
inline SpecializationPlan compute_bad_primes(const std::vector<CremonaElement>& W) {
  if (W.empty()) throw MissingIdentity("the set is empty");
  const Field& field = W.front().field();
  const std::size_t d = W.front().dimension();
  if (!field.is_rational()) throw DomainMismatch("bad primes are computed for sets over QQ");

  SpecializationPlan plan;
  for (const auto& u : W) {
    if (u.field() != field || u.dimension() != d) throw DomainMismatch("elements of W disagree on field or dimension");
    if (detail::find_equal(plan.source, u.forward()) == plan.source.size()) plan.source.push_back(u);
  }
  const auto& set = plan.source;
  if (detail::find_equal(set, identity(d, field)) == set.size()) throw MissingIdentity("W does not contain id");
  for (const auto& u : set) {
    if (detail::find_equal(set, u.inverse()) == set.size()) {
      throw NotSymmetric("the inverse of " + (u.name().empty() ? std::string("an element") : u.name()) +
                         " is not in W");
    }
  }

  std::set<Integer> primes;
  for (const auto& u : set) detail::collect_denominator_primes(u.forward(), primes);
  for (const auto& u : set) {
    for (const auto& v : set) {
      for (const auto& cleared : compose_cleared(u.forward(), v.forward())) {
        detail::collect_denominator_primes(cleared.numerator, primes);
        detail::collect_denominator_primes(cleared.denominator, primes);
        plan.c1 *= detail::coefficient_product(cleared.denominator);
      }
      detail::collect_denominator_primes(compose(u.forward(), v.forward()), primes);
    }
  }
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      for (std::size_t i = 0; i < d; ++i) {
        const auto& f = set[a].forward()[i];
        const auto& g = set[b].forward()[i];
        plan.c2 *= detail::coefficient_product(f.numerator() * g.denominator() - g.numerator() * f.denominator());
      }
    }
  }
  plan.c1.canonicalize();
  plan.c2.canonicalize();
  detail::factor_rational(plan.c1, primes);
  detail::factor_rational(plan.c2, primes);
  plan.bad_primes.assign(primes.begin(), primes.end());
  return plan;
}

/// Smallest prime >= p0 outside `bad_primes`.
inline std::uint64_t choose_prime(const std::vector<Integer>& bad_primes, std::uint64_t p0) {
  std::uint64_t p = std::max<std::uint64_t>(p0, 2);
  while (true) {
    if (detail::is_prime_u64(p) &&
        !std::binary_search(bad_primes.begin(), bad_primes.end(), Integer(static_cast<unsigned long>(p)))) {
      return p;
    }
    ++p;
  }
}

inline SpecializationPlan make_plan(const std::vector<CremonaElement>& W, std::uint64_t p0) {
  auto plan = compute_bad_primes(W);
  plan.chosen_prime = choose_prime(plan.bad_primes, p0);
  return plan;
}

/// Reduces every coefficient of f modulo p.
inline BirationalTuple reduce_mod(const BirationalTuple& f, const Field& target) {
  auto map = [&](const Scalar& c) { return target.from_rational(c.rational()); };
  std::vector<RationalFunction> coords;
  for (const auto& c : f.coords()) {
    coords.emplace_back(c.numerator().map_coefficients(target, map), c.denominator().map_coefficients(target, map));
  }
  return BirationalTuple(target, std::move(coords));
}

/// The image of W in Cr_d(F_p), in the order of `plan.source`. Each inverse
/// is the reduction of the matching element of W, so only coefficients
/// covered by the plan are ever reduced.
inline std::vector<CremonaElement> specialize_chunk(const SpecializationPlan& plan, std::uint64_t p) {
  if (plan.source.empty()) return {};
  const Field& source_field = plan.source.front().field();
  if (source_field.is_finite()) {
    if (source_field.is_prime_field() && source_field.characteristic() == p) return plan.source;
    throw DomainMismatch("cannot specialize " + source_field.tag() + " to GF(" + std::to_string(p) + ")");
  }
  if (plan.is_bad(p)) throw BadPrime(std::to_string(p) + " is a bad prime for this set");
  const Field target = Field::prime(p);
  std::vector<BirationalTuple> reduced;
  for (const auto& u : plan.source) reduced.push_back(reduce_mod(u.forward(), target));
  std::vector<CremonaElement> out;
  for (const auto& u : plan.source) {
    const std::size_t j = detail::find_equal(plan.source, u.inverse());
    const std::size_t i = out.size();
    try {
      out.push_back(certify_inverse(reduced[i], reduced[j], u.name()));
    } catch (const NotInverse& e) {
      throw ReductionFailure("reduction of " + u.name() + " mod " + std::to_string(p) + " lost invertibility: " +
                             e.what());
    }
  }
  return out;
}

}  // namespace cremona
