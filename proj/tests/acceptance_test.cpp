// Runs the acceptance checks and prints one PASS/FAIL line for each.
// Exit status is nonzero if any check fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "cremona/cremona.hpp"
#include "test_support.hpp"

using namespace cremona;
using namespace cremona::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed checks; the first few are kept for the report.
struct Checker {
  std::vector<std::string> failures;
  std::size_t checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures.size() < 5) {
      failures.push_back(what);
    } else {
      overflow = true;
    }
  }
  Outcome outcome(std::string detail) const {
    if (failures.empty()) return {true, std::move(detail)};
    std::string out = detail + "; failed:";
    for (const auto& f : failures) out += " [" + f + "]";
    if (overflow) out += " ...";
    return {false, out};
  }
  bool overflow = false;
};

std::string text(const Rational& q) { return q.get_str(); }

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(CREMONA_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Point> all_points(const Field& field, std::size_t d) {
  const auto elems = field.elements();
  std::vector<Point> out{{}};
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<Point> next;
    for (const auto& prefix : out) {
      for (const auto& e : elems) {
        auto p = prefix;
        p.push_back(e);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Möbius maps as integer matrices: a word is trivial iff its matrix is scalar.
struct Mat2 {
  Integer a, b, c, d;
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  bool is_scalar() const { return b == 0 && c == 0 && a == d; }
};

Outcome word_problem() {
  Checker c;
  GeneratorSystem trans(certify_generators(parse_generator_file(read_data("translations.txt"))));
  c.expect(is_identity_word(trans, parse_word("[a,b]", trans.names())), "[a,b] is not the identity");

  GeneratorSystem pair({element("[x+2] over QQ", "[x-2] over QQ", "a"),
                        element("[x/(2*x+1)] over QQ", "[x/(1-2*x)] over QQ", "b")});
  const Mat2 gens[2] = {{1, 2, 0, 1}, {1, 0, 2, 1}}, invs[2] = {{1, -2, 0, 1}, {1, 0, -2, 1}};
  std::mt19937_64 rng(20261015);
  std::uniform_int_distribution<std::size_t> len(1, 8), gen(0, 1);
  std::bernoulli_distribution inv(0.5);
  std::size_t agree = 0, trivial = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Letter> letters;
    const std::size_t target = len(rng);
    while (letters.size() < target) {
      Letter l{gen(rng), inv(rng)};
      if (!letters.empty() && letters.back() == l.inverted()) continue;
      letters.push_back(l);
    }
    const GroupWord w(letters);
    Mat2 m{1, 0, 0, 1};
    for (const auto& l : w.letters()) m = m * (l.inverse ? invs[l.generator] : gens[l.generator]);
    const bool decided = is_identity_word(pair, w);
    trivial += decided ? 1 : 0;
    agree += decided == m.is_scalar() ? 1 : 0;
  }
  c.expect(trivial == 0, std::to_string(trivial) + " words decided trivial");
  c.expect(agree == 200, "matrix oracle agreement " + std::to_string(agree) + "/200");
  return c.outcome("200 free-pair words nontrivial, oracle agreement " + std::to_string(agree) + "/200");
}

Outcome involution() {
  Checker c;
  for (const std::string tag : {"QQ", "GF(5)"}) {
    const auto s = tuple("[1/x, 1/y] over " + tag);
    bool ok = true;
    try {
      certify_inverse(s, s, "s");
    } catch (const NotInverse&) {
      ok = false;
    }
    c.expect(ok, "not self-inverse over " + tag);
    const auto ss = compose(s, s);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& f = ss.coords()[i];
      const auto x = Polynomial::variable(ss.field(), 2, i);
      c.expect((f.numerator() - x * f.denominator()).is_zero(), "cross product nonzero over " + tag);
    }
  }
  return c.outcome("σ∘σ = id over QQ and GF(5)");
}

Outcome specialization() {
  Checker c;
  const auto a = element("[x + 1/2] over QQ", "[x - 1/2] over QQ", "a");
  const std::vector<CremonaElement> W{CremonaElement::identity(1, QQ()).renamed("id"), a, a.inverted()};
  const auto plan = compute_bad_primes(W);
  const bool two_bad = std::find(plan.bad_primes.begin(), plan.bad_primes.end(), Integer(2)) != plan.bad_primes.end();
  c.expect(two_bad, "2 is not a bad prime");
  const auto p = choose_prime(plan.bad_primes, 2);
  c.expect(p == 3, "chose " + std::to_string(p));
  const auto reduced = specialize_chunk(make_plan(W, 2), p);
  const Field f3 = GF(3);
  const auto points = all_points(f3, 1);
  auto values = [&](const CremonaElement& e) {
    std::vector<std::uint64_t> out;
    for (const auto& x : points) out.push_back(eval_point(e, x)[0].index());
    return out;
  };
  for (std::size_t i = 0; i < W.size(); ++i) {
    for (std::size_t j = 0; j < W.size(); ++j) {
      if (i != j) c.expect(values(reduced[i]) != values(reduced[j]), "reduced elements coincide");
      const auto uv = compose(W[i].forward(), W[j].forward());
      for (std::size_t k = 0; k < W.size(); ++k) {
        if (!tuple_eq(uv, W[k].forward())) continue;
        for (const auto& x : points) {
          const auto lhs = eval_point(reduced[i], eval_point(reduced[j], x));
          c.expect(lhs == eval_point(reduced[k], x), "product not preserved");
        }
      }
    }
  }
  return c.outcome("badPrimes ∋ 2, choose_prime(2) = 3, F_3 chunk injective and product-preserving");
}

std::vector<CremonaElement> sigma_generators() { return certify_generators(parse_generator_file(read_data("sigma.txt"))); }

Outcome singular_counts() {
  Checker c;
  const auto s = sigma_generators().at(0);
  Rational worst = 0;
  std::string counts;
  for (unsigned m = 1; m <= 3; ++m) {
    const PointTable table(GF(5, m), 2);
    const std::size_t q = static_cast<std::size_t>(std::pow(5, m));
    const std::size_t z = singular_count(s, table);
    c.expect(z == 2 * q - 1, "m=" + std::to_string(m) + " count " + std::to_string(z));
    worst = std::max(worst, Rational(static_cast<unsigned long>(z), static_cast<unsigned long>(q)));
    counts += (m > 1 ? ", " : "") + std::to_string(z);
  }
  c.expect(worst < 2, "C = " + text(worst));
  return c.outcome("counts " + counts + ", C = " + text(worst));
}

// Criteria 5 to 7 share the profile of the Klein chunk.
struct KleinRun {
  Closure closure;
  Profile profile;
  double seconds = 0;
};

const KleinRun& klein_run() {
  static const KleinRun run = [] {
    KleinRun out;
    const auto start = std::chrono::steady_clock::now();
    out.closure = close_under_products(sigma_generators(), 64);
    out.profile = profile_points(out.closure.elements, {1, 2, 3});
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }();
  return run;
}

Rational five_pow(unsigned m) {
  Integer v;
  mpz_ui_pow_ui(v.get_mpz_t(), 5, m);
  return Rational(v);
}

Outcome defect_decay() {
  Checker c;
  const auto& run = klein_run();
  c.expect(run.closure.closed && run.closure.elements.size() == 4, "closure is not {id, σ, τ, στ}");
  std::string eps;
  for (const auto& r : run.profile.reports) {
    c.expect(r.n <= 15625, "n = " + std::to_string(r.n));
    c.expect(r.epsilon <= Rational(12 / five_pow(r.m)), "m=" + std::to_string(r.m) + " ε = " + text(r.epsilon));
    c.expect(r.checks_hold(), "analytic checks fail at m=" + std::to_string(r.m));
    eps += (r.m > 1 ? ", " : "") + text(r.epsilon);
  }
  for (std::size_t i = 1; i < run.profile.reports.size(); ++i) {
    c.expect(run.profile.reports[i].epsilon < run.profile.reports[i - 1].epsilon, "ε not decreasing");
  }
  c.expect(run.seconds < 60, "runtime " + std::to_string(run.seconds) + " s");
  return c.outcome("ε = " + eps);
}

Outcome separation() {
  Checker c;
  Rational worst = 1;
  for (const auto& r : klein_run().profile.reports) {
    for (const auto& s : r.separations) {
      c.expect(s.distance >= Rational(1 - 10 / five_pow(r.m)), "m=" + std::to_string(r.m) + " " + r.labels[s.a] + "/" + r.labels[s.b]);
      worst = std::min(worst, s.distance);
    }
  }
  return c.outcome("smallest separation " + text(worst));
}

Outcome profile_slope() {
  Checker c;
  const auto& prof = klein_run().profile;
  std::vector<double> xs, ys;
  for (const auto& pt : prof.points) {
    c.expect(pt.r.has_value(), "no certificate at m=" + std::to_string(pt.m));
    if (!pt.r) continue;
    xs.push_back(log_rational(*pt.r));
    ys.push_back(std::log(static_cast<double>(pt.n)));
  }
  const auto fitted = least_squares_slope(xs, ys);
  c.expect(fitted && prof.fitted_slope && std::abs(*fitted - *prof.fitted_slope) < 1e-12, "slope mismatch");
  c.expect(fitted && *fitted >= 1.6 && *fitted <= 2.4, "slope out of [1.6, 2.4]");
  std::ostringstream out;
  out << "fitted slope " << (fitted ? *fitted : NAN);
  return c.outcome(out.str());
}

Outcome chunk_engine() {
  Checker c;
  const auto z3 = parse_chunk_text(read_data("z3.chunk"));
  const auto s = sigma_upper(z3, 3, 5);
  c.expect(s && *s == 3, "sigma_upper(Z/3, 3) = " + (s ? std::to_string(*s) : std::string("none")));
  const auto rep = injective_rep_search(z3, 5);
  c.expect(rep && rep->n == 3, "no injective representation in Sym_3");
  std::size_t files = 0, maps = 0;
  for (const auto& entry : std::filesystem::directory_iterator(CREMONA_DATA_DIR)) {
    if (entry.path().extension() != ".chunk") continue;
    ++files;
    const auto chunk = parse_chunk_text(read_data(entry.path().filename().string()));
    const std::size_t n_max = chunk.size() <= 3 ? 5 : 4;
    for (const Rational& r : {Rational(3, 2), Rational(2), Rational(3), Rational(5), Rational(100)}) {
      const auto f = sofic_search(chunk, r, n_max);
      if (!f) continue;
      ++maps;
      const std::string where = entry.path().filename().string() + " r=" + text(r);
      c.expect(dichotomy_consistent(*f, chunk, r), where);
      if (Rational(static_cast<unsigned long>(f->n)) < r) {
        c.expect(is_eps_morphism(*f, chunk, 0) && min_separation(*f, chunk) > 0, "inexact n < r at " + where);
      }
    }
  }
  c.expect(files >= 1, "no chunk files");
  return c.outcome("Z/3: σ = 3, Sym_3 representation; dichotomy on " + std::to_string(maps) + " maps over " +
                   std::to_string(files) + " chunk files");
}

Outcome folner() {
  Checker c;
  const Rational r(21);
  const auto w = lattice_box_witness(1, 64, lattice_cross(1));
  c.expect(w.E.size() == 64 && w.E.front() == LatticePoint{0} && w.E.back() == LatticePoint{63}, "E is not [0, 64)");
  const auto res = folner_to_sofic(w, r);
  const std::size_t n = res.map.n;
  Rational min_agree = 1;
  for (std::size_t k = 0; k < res.chunk.elements.size(); ++k) {
    const long s = res.chunk.elements[k][0];
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const long target = static_cast<long>(i) + s;
      agree += (target >= 0 && target < 64 && res.map.images[k](i) == static_cast<std::uint32_t>(target)) ? 1 : 0;
    }
    min_agree = std::min(min_agree, Rational(static_cast<unsigned long>(agree), static_cast<unsigned long>(n)));
  }
  const Rational sep = min_separation(res.map, res.chunk.chunk);
  const Rational defect = max_defect(res.map, res.chunk.chunk);
  c.expect(min_agree > Rational(1 - 1 / r), "agreement " + text(min_agree));
  c.expect(sep > Rational(1 - 2 / r), "separation " + text(sep));
  c.expect(defect < Rational(3 / r), "defect " + text(defect));
  c.expect(res.record.ok(), "record disagrees");
  return c.outcome("agreement " + text(min_agree) + ", separation " + text(sep) + ", defect " + text(defect));
}

Outcome property_suites() {
  Checker c;
  constexpr int kCases = 500;

  {  // frac_eq is an equivalence relation.
    PolyGen gen(QQ(), 2, 101);
    std::bernoulli_distribution coin(0.6);
    for (int i = 0; i < kCases; ++i) {
      const auto f = gen.fraction();
      const auto r1 = gen.nonzero_polynomial(), r2 = gen.nonzero_polynomial();
      const RationalFunction g = coin(gen.rng()) ? RationalFunction(f.numerator() * r1, f.denominator() * r1) : gen.fraction();
      const RationalFunction h = coin(gen.rng()) ? RationalFunction(g.numerator() * r2, g.denominator() * r2) : gen.fraction();
      c.expect(frac_eq(f, f), "frac_eq reflexivity");
      c.expect(frac_eq(f, g) == frac_eq(g, f), "frac_eq symmetry");
      c.expect(!(frac_eq(f, g) && frac_eq(g, h)) || frac_eq(f, h), "frac_eq transitivity");
    }
  }
  for (const Field& field : {QQ(), GF(7), GF(5, 2)}) {  // ring axioms
    PolyGen gen(field, 2, 202);
    for (int i = 0; i < kCases; ++i) {
      const auto a = gen.polynomial(), b = gen.polynomial(), d = gen.polynomial();
      c.expect((a + b) + d == a + (b + d) && a + b == b + a, "additive axioms over " + field.tag());
      c.expect((a * b) * d == a * (b * d) && a * b == b * a, "multiplicative axioms over " + field.tag());
      c.expect(a * (b + d) == a * b + a * d, "distributivity over " + field.tag());
    }
  }
  {  // composition associativity
    const auto pool = element_pool("QQ");
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < kCases; ++i) {
      const auto& f = pool[pick(rng)].forward();
      const auto& g = pool[pick(rng)].forward();
      const auto& h = pool[pick(rng)].forward();
      c.expect(tuple_eq(compose(compose(h, g), f), compose(h, compose(g, f))), "associativity");
    }
  }
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{5, 1}, {3, 2}, {7, 2}}) {
    // Evaluation/composition compatibility, exhaustive on L^2 with |L|^2 <= 10^4.
    const Field L = GF(p, m);
    const auto points = all_points(L, 2);
    const auto pool = p == 3 ? std::vector{element("[x/(x+1), y] over GF(3)", "[x/(1-x), y] over GF(3)", "m"),
                                           element("[x, x*y] over GF(3)", "[x, y/x] over GF(3)", "j"),
                                           element("[1/x, 1/y] over GF(3)", "[1/x, 1/y] over GF(3)", "s")}
                             : element_pool(GF(p).tag());
    for (const auto& f : pool) {
      for (const auto& g : pool) {
        const auto gf = g.then_after(f);
        for (const auto& x : points) {
          const auto fx = try_eval_point(f, x);
          if (!fx) continue;
          const auto gfx = try_eval_point(g, *fx);
          if (!gfx) continue;
          const auto direct = try_eval_point(gf, x);
          c.expect(!direct || *direct == *gfx, g.name() + "∘" + f.name() + " over " + L.tag());
        }
      }
    }
  }
  {  // permutation bijectivity: random permutations and every induced û
    std::mt19937_64 rng(404);
    for (int i = 0; i < kCases; ++i) {
      const std::size_t n = 1 + rng() % 16;
      std::vector<std::uint32_t> images(n);
      std::iota(images.begin(), images.end(), 0u);
      std::shuffle(images.begin(), images.end(), rng);
      const Permutation u(images);
      c.expect((u * u.inverse()).is_identity() && (u.inverse() * u).is_identity(), "inverse");
      std::set<std::uint32_t> seen(u.images().begin(), u.images().end());
      c.expect(seen.size() == n && *seen.rbegin() == n - 1, "not a bijection");
    }
    for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{5, 1}, {5, 2}, {7, 1}}) {
      const PointTable table(GF(p, m), 2);
      for (const auto& e : element_pool(GF(p).tag())) {
        const auto rep = build_perm(e, table);
        std::set<std::uint32_t> seen(rep.perm.images().begin(), rep.perm.images().end());
        c.expect(seen.size() == table.size(), e.name() + " over " + table.field().tag());
      }
    }
  }
  for (const Field& field : {QQ(), GF(11), GF(5, 2)}) {  // parser round trip
    PolyGen gen(field, 2, 505);
    for (int i = 0; i < kCases; ++i) {
      const BirationalTuple t(field, {gen.fraction(), gen.fraction()});
      const std::string s = render(t);
      const auto back = parse_map_expr(s);
      c.expect(back == t && render(back) == s, "round trip of " + s);
    }
  }
  return c.outcome(std::to_string(c.checks) + " checks, " + std::to_string(kCases) + " cases per randomized suite");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> suite = {
      {"word problem", word_problem},
      {"involution certification", involution},
      {"specialization", specialization},
      {"singular counts", singular_counts},
      {"defect decay", defect_decay},
      {"separation", separation},
      {"profile certificates", profile_slope},
      {"chunk engine", chunk_engine},
      {"Følner construction", folner},
      {"property suites", property_suites},
  };
  const double limits[] = {10, 0, 0, 0, 60, 0, 0, 0, 0, 0};
  int failed = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = suite[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limits[i] > 0 && seconds >= limits[i]) {
      out.pass = false;
      out.detail += "; exceeded " + std::to_string(static_cast<int>(limits[i])) + " s";
    }
    failed += out.pass ? 0 : 1;
    std::cout << (out.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << suite[i].first << ": " << out.detail << " ("
              << static_cast<long>(seconds * 1000) << " ms)" << std::endl;
  }
  std::cout << (suite.size() - failed) << "/" << suite.size() << " checks passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
