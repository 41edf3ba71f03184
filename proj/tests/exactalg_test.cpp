#include <gtest/gtest.h>

#include <set>

#include "cremona/field.hpp"
#include "cremona/format.hpp"
#include "cremona/polynomial.hpp"
#include "cremona/rational_function.hpp"
#include "test_support.hpp"

using namespace cremona;
using namespace cremona::testing;

namespace {

// Monic polynomials of degree m over F_p as coefficient vectors (low-to-high),
// listed by tail index so that x^{m-1} is the most significant coefficient.
std::vector<std::vector<std::uint64_t>> monic_polys(std::uint64_t p, unsigned m) {
  std::uint64_t count = 1;
  for (unsigned i = 0; i < m; ++i) count *= p;
  std::vector<std::vector<std::uint64_t>> out;
  for (std::uint64_t t = 0; t < count; ++t) {
    std::vector<std::uint64_t> c(m + 1, 0);
    std::uint64_t rest = t;
    for (unsigned i = 0; i < m; ++i) {
      c[i] = rest % p;
      rest /= p;
    }
    c[m] = 1;
    out.push_back(c);
  }
  return out;
}

// Oracle: the reducible monic polynomials of degree m are exactly the
// products a*b of monic polynomials with deg a + deg b = m, deg a, deg b >= 1.
std::set<std::vector<std::uint64_t>> reducible_monics(std::uint64_t p, unsigned m) {
  std::set<std::vector<std::uint64_t>> out;
  for (unsigned da = 1; da < m; ++da) {
    for (const auto& a : monic_polys(p, da)) {
      for (const auto& b : monic_polys(p, m - da)) {
        std::vector<std::uint64_t> prod(m + 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
          for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
        }
        out.insert(prod);
      }
    }
  }
  return out;
}

std::vector<std::uint64_t> first_irreducible_oracle(std::uint64_t p, unsigned m) {
  const auto reducible = reducible_monics(p, m);
  for (const auto& c : monic_polys(p, m)) {
    if (!reducible.count(c)) return c;
  }
  return {};
}

}  // namespace

TEST(PolyArith, AdditiveInverseIsZero) {
  auto x = poly("x");
  EXPECT_TRUE(poly_arith(PolyOp::add, x, poly_arith(PolyOp::neg, x, x)).is_zero());
  EXPECT_TRUE((x + (-x)).terms().empty());
}

TEST(PolyArith, DifferenceOfSquares) {
  EXPECT_EQ(poly_arith(PolyOp::mul, poly("x+1"), poly("x-1")), poly("x^2-1"));
}

TEST(PolyArith, SquareOverF2) {
  // (x+1)^2 = x^2 + 2x + 1, and 2 = 0 in F_2.
  const Field f2 = GF(2);
  auto sq = poly("x+1", f2) * poly("x+1", f2);
  ASSERT_EQ(sq.term_count(), 2u);
  EXPECT_EQ(sq, poly("x^2+1", f2));
}

TEST(PolyArith, DomainMismatch) {
  EXPECT_THROW(poly("x") + poly("x", GF(5)), DomainMismatch);
  EXPECT_THROW(poly("x", QQ(), 1) * poly("x", QQ(), 2), DomainMismatch);
}

TEST(PolyArith, GrlexOrderAndCanonicalText) {
  auto p = poly("3 + x*y + x^2 - y^3 + 2*x");
  EXPECT_EQ(to_string(p), "-y^3 + x^2 + x*y + 2*x + 3");
  EXPECT_EQ(to_string(poly("x^2*y - 3")), "x^2*y - 3");
}

TEST(PolyEval, DirectArithmetic) {
  EXPECT_EQ(poly_eval(poly("x^2+y"), point(QQ(), {2, 3})), QQ().from_integer(7));
  EXPECT_TRUE(poly_eval(Polynomial(QQ(), 2), point(QQ(), {5, -1})).is_zero());
}

TEST(PolyEval, FermatOverF5) {
  const Field f5 = GF(5);
  auto p = poly("x^5 - x", f5, 1);
  for (long a = 0; a < 5; ++a) EXPECT_TRUE(p.evaluate(point(f5, {a})).is_zero()) << a;
}

TEST(PolyEval, PrimeFieldCoefficientsAtExtensionPoints) {
  const Field f25 = GF(5, 2);
  auto p = poly("x^25 - x", GF(5), 1);
  for (const auto& a : f25.elements()) EXPECT_TRUE(p.evaluate(Point{a}).is_zero());
  EXPECT_THROW(poly("x", QQ(), 1).evaluate(Point{f25.one()}), DomainMismatch);
  EXPECT_THROW(poly("x", QQ(), 2).evaluate(point(QQ(), {1})), DomainMismatch);
}

TEST(FracArith, Examples) {
  auto r = frac_arith(FracOp::mul, frac("1/x"), frac("x"));
  EXPECT_TRUE(frac_eq(r, frac("1")));
  EXPECT_EQ(r.numerator(), poly("x"));
  EXPECT_EQ(r.denominator(), poly("x"));

  auto s = frac_arith(FracOp::add, frac("1/x"), frac("1/y"));
  EXPECT_EQ(s.numerator(), poly("x+y"));
  EXPECT_EQ(s.denominator(), poly("x*y"));

  const Field f3 = GF(3);
  auto t = frac_arith(FracOp::mul, frac("2/x", f3), frac("2/x", f3));
  EXPECT_EQ(t.numerator(), poly("1", f3));
  EXPECT_EQ(t.denominator(), poly("x^2", f3));
}

TEST(FracArith, DenominatorIsNormalized) {
  auto f = RationalFunction(poly("x"), poly("2*x + 4*y"));
  EXPECT_TRUE(f.denominator().leading_coefficient().is_one());
  EXPECT_EQ(f.numerator(), poly("1/2*x"));
  EXPECT_THROW(RationalFunction(poly("x"), Polynomial(QQ(), 2)), ZeroDenominator);
}

TEST(FracEq, Examples) {
  EXPECT_TRUE(frac_eq(frac("1/x"), frac("x/x^2")));
  EXPECT_FALSE(frac_eq(frac("x"), frac("y")));
  EXPECT_TRUE(frac_eq(frac("(x^2-1)/(x-1)"), frac("x+1")));
  EXPECT_THROW(frac_eq(frac("x"), frac("x", GF(7))), DomainMismatch);
}

TEST(FracEval, Examples) {
  EXPECT_EQ(frac_eval(frac("1/x", QQ(), 1), point(QQ(), {2})), QQ().from_rational(Rational(1, 2)));
  EXPECT_THROW(frac_eval(frac("1/x", QQ(), 1), point(QQ(), {0})), DenominatorVanishes);
  EXPECT_EQ(frac_eval(frac("(x+y)/(x-y)"), point(QQ(), {3, 1})), QQ().from_integer(2));
}

TEST(BuildField, PrimeFieldHasNoModulus) {
  auto f = build_field(5, 1);
  EXPECT_EQ(f.order(), 5u);
  EXPECT_TRUE(f.modulus().empty());
  EXPECT_EQ(f.tag(), "GF(5)");
}

TEST(BuildField, ModulusMatchesOracle) {
  EXPECT_EQ(build_field(2, 2).modulus(), (std::vector<std::uint64_t>{1, 1, 1}));
  EXPECT_EQ(build_field(3, 2).modulus(), (std::vector<std::uint64_t>{1, 0, 1}));
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}, {5, 3}, {7, 2}, {2, 6}}) {
    EXPECT_EQ(build_field(p, m).modulus(), first_irreducible_oracle(p, m)) << p << "^" << m;
  }
}

TEST(BuildField, RejectsComposite) {
  EXPECT_THROW(build_field(4, 1), NotPrime);
  EXPECT_THROW(build_field(1, 2), NotPrime);
  EXPECT_THROW(build_field(15, 1), NotPrime);
}

TEST(EnumerateField, Examples) {
  auto f2 = enumerate_field(GF(2));
  ASSERT_EQ(f2.size(), 2u);
  EXPECT_TRUE(f2[0].is_zero());
  EXPECT_TRUE(f2[1].is_one());

  auto f4 = enumerate_field(GF(2, 2));
  ASSERT_EQ(f4.size(), 4u);
  EXPECT_TRUE(f4[0].is_zero());
  EXPECT_TRUE(f4[1].is_one());
  EXPECT_EQ(f4[2], GF(2, 2).generator());

  EXPECT_EQ(enumerate_field(GF(3, 2)).size(), 9u);
  EXPECT_THROW(enumerate_field(QQ()), InfiniteField);
}

TEST(EnumerateField, TablesCloseForSmallFields) {
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {2, 2}, {2, 3}, {3, 2}}) {
    const Field f = build_field(p, m);
    const auto elems = enumerate_field(f);
    ASSERT_EQ(elems.size(), f.order());
    std::set<std::uint64_t> indices;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      EXPECT_EQ(elems[i].index(), i);
      indices.insert(elems[i].index());
    }
    EXPECT_EQ(indices.size(), elems.size());
    for (const auto& a : elems) {
      if (!a.is_zero()) {
        EXPECT_TRUE((a * a.inverse()).is_one());
      }
      for (const auto& b : elems) {
        EXPECT_LT((a + b).index(), f.order());
        EXPECT_LT((a * b).index(), f.order());
        EXPECT_EQ(a * b, b * a);
        for (const auto& c : elems) {
          EXPECT_EQ((a * b) * c, a * (b * c));
          EXPECT_EQ(a * (b + c), a * b + a * c);
        }
      }
    }
    // The multiplicative group has order q - 1.
    for (const auto& a : elems) {
      if (!a.is_zero()) {
        EXPECT_TRUE(a.pow(f.order() - 1).is_one());
      }
    }
  }
}

TEST(Properties, RingAxioms) {
  for (const Field& field : {QQ(), GF(7)}) {
    PolyGen gen(field, 2, 17);
    for (int i = 0; i < 500; ++i) {
      auto a = gen.polynomial(), b = gen.polynomial(), c = gen.polynomial();
      ASSERT_EQ((a + b) + c, a + (b + c));
      ASSERT_EQ((a * b) * c, a * (b * c));
      ASSERT_EQ(a + b, b + a);
      ASSERT_EQ(a * b, b * a);
      ASSERT_EQ(a * (b + c), a * b + a * c);
    }
  }
}

TEST(Properties, FracEqIsAnEquivalence) {
  PolyGen gen(QQ(), 2, 99);
  std::uniform_int_distribution<int> coin(0, 2);
  int equal_pairs = 0;
  for (int i = 0; i < 500; ++i) {
    auto f = gen.fraction();
    // Mix genuinely equal representatives (common factors) with unrelated ones.
    auto r1 = gen.nonzero_polynomial(), r2 = gen.nonzero_polynomial();
    RationalFunction g = coin(gen.rng()) ? RationalFunction(f.numerator() * r1, f.denominator() * r1) : gen.fraction();
    RationalFunction h = coin(gen.rng()) ? RationalFunction(g.numerator() * r2, g.denominator() * r2) : gen.fraction();
    ASSERT_TRUE(frac_eq(f, f));
    ASSERT_EQ(frac_eq(f, g), frac_eq(g, f));
    if (frac_eq(f, g) && frac_eq(g, h)) {
      ASSERT_TRUE(frac_eq(f, h));
      ++equal_pairs;
    }
  }
  EXPECT_GT(equal_pairs, 50);
}

TEST(Properties, EvaluationIsMultiplicative) {
  PolyGen gen(QQ(), 2, 5);
  std::uniform_int_distribution<int> coord(-6, 6);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    auto f = gen.fraction(), g = gen.fraction();
    auto x = point(QQ(), {coord(gen.rng()), coord(gen.rng())});
    if (f.denominator().evaluate(x).is_zero() || g.denominator().evaluate(x).is_zero()) continue;
    ASSERT_EQ(frac_eval(f * g, x), frac_eval(f, x) * frac_eval(g, x));
    ASSERT_EQ(frac_eval(f + g, x), frac_eval(f, x) + frac_eval(g, x));
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(Scalar, ExtensionInverseAndFromRational) {
  const Field f9 = GF(3, 2);
  for (const auto& a : f9.elements()) {
    if (a.is_zero()) {
      EXPECT_THROW(a.inverse(), DivisionByZero);
    } else {
      EXPECT_TRUE((a * a.inverse()).is_one());
    }
  }
  EXPECT_EQ(GF(3).from_rational(Rational(1, 2)), GF(3).from_integer(2));
  EXPECT_THROW(GF(3).from_rational(Rational(1, 3)), DivisionByZero);
  EXPECT_EQ(GF(5).from_integer(-1), GF(5).from_integer(4));
}
