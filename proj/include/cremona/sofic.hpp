#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cremona/birational.hpp"
#include "cremona/chunk.hpp"
#include "cremona/permutation.hpp"

namespace cremona {

/// All points of L^d for a finite field L, indexed by
/// sum_i idx(x_i) q^(d-1-i), i.e. lexicographically in field enumeration order.
class PointTable {
 public:
  static constexpr std::uint64_t kDefaultCap = 1000000;

  PointTable(Field field, std::size_t d, std::uint64_t cap = kDefaultCap) : field_(std::move(field)), d_(d) {
    if (d == 0) throw DomainMismatch("dimension must be positive");
    q_ = field_.order();
    Integer n;
    mpz_ui_pow_ui(n.get_mpz_t(), q_, d);
    if (n > Integer(static_cast<unsigned long>(cap))) {
      throw PointCapExceeded(field_.tag() + "^" + std::to_string(d) + " has " + n.get_str() +
                             " points, above the cap of " + std::to_string(cap));
    }
    n_ = n.get_ui();
    elements_ = field_.elements();
  }

  const Field& field() const { return field_; }
  std::size_t dimension() const { return d_; }
  std::uint64_t size() const { return n_; }

  Point point(std::uint64_t index) const {
    Point out(d_);
    for (std::size_t i = d_; i-- > 0;) {
      out[i] = elements_[index % q_];
      index /= q_;
    }
    return out;
  }

  std::uint64_t index(std::span<const Scalar> x) const {
    if (x.size() != d_) throw SizeMismatch("point of the wrong dimension");
    std::uint64_t out = 0;
    for (const auto& c : x) out = out * q_ + field_.embed(c).index();
    return out;
  }

 private:
  Field field_;
  std::size_t d_;
  std::uint64_t q_ = 0;
  std::uint64_t n_ = 0;
  std::vector<Scalar> elements_;
};

/// How the points of Z_u are matched to the leftover images.
struct Extension {
  enum class Mode { ascending, random };
  Mode mode = Mode::ascending;
  std::uint64_t seed = 0;
};

struct PermutationRep {
  std::string label;
  Permutation perm;
  std::size_t moved_from_regular = 0;  // points filled in by the extension
  std::vector<bool> singular;          // membership in Z_u, by index
};

/// û on L^d: eval_point off Z_u, and the leftover points matched by `ext`.
inline PermutationRep build_perm(const CremonaElement& e, const PointTable& table, Extension ext = {}) {
  if (!table.field().contains(e.field()) || e.dimension() != table.dimension()) {
    throw DomainMismatch("cannot evaluate " + e.field().tag() + " maps on points of " + table.field().tag());
  }
  const std::uint64_t n = table.size();
  PermutationRep rep;
  rep.label = e.name();
  rep.singular.assign(n, false);
  std::vector<std::uint32_t> images(n, 0);
  std::vector<bool> hit(n, false);
  std::vector<std::uint32_t> domain_left;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto y = try_eval_point(e, table.point(i));
    if (!y) {
      rep.singular[i] = true;
      domain_left.push_back(static_cast<std::uint32_t>(i));
      continue;
    }
    const std::uint64_t j = table.index(*y);
    if (hit[j]) throw NotBijection(e.name() + " is not injective off its singular set");
    hit[j] = true;
    images[i] = static_cast<std::uint32_t>(j);
  }
  std::vector<std::uint32_t> codomain_left;
  for (std::uint64_t j = 0; j < n; ++j) {
    if (!hit[j]) codomain_left.push_back(static_cast<std::uint32_t>(j));
  }
  if (codomain_left.size() != domain_left.size()) throw NotBijection("leftover point counts differ");
  if (ext.mode == Extension::Mode::random) {
    std::mt19937_64 rng(ext.seed);
    std::shuffle(codomain_left.begin(), codomain_left.end(), rng);
  }
  for (std::size_t k = 0; k < domain_left.size(); ++k) images[domain_left[k]] = codomain_left[k];
  rep.moved_from_regular = domain_left.size();
  rep.perm = Permutation(std::move(images));
  return rep;
}

inline std::size_t singular_count(const CremonaElement& e, const PointTable& table) {
  std::size_t count = 0;
  for (std::uint64_t i = 0; i < table.size(); ++i) count += in_singular_set(e, table.point(i)) ? 1 : 0;
  return count;
}

/// The chunk of a set of transformations: xy = z whenever x∘y tuple_eq z.
inline ElementChunk<CremonaElement> cremona_chunk(const std::vector<CremonaElement>& elems) {
  if (elems.empty()) throw InvalidChunk("the element set is empty");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    labels.push_back(elems[i].name().empty() ? "e" + std::to_string(i) : elems[i].name());
  }
  try {
    return chunk_of_elements(
        elems, labels,
        [](const CremonaElement& a) { return tuple_eq(a.forward(), identity(a.dimension(), a.field())); },
        [](const CremonaElement& a, const CremonaElement& b) { return tuple_eq(a.forward(), b.forward()); },
        [](const CremonaElement& a, const CremonaElement& b) { return std::optional(a.then_after(b)); });
  } catch (const MissingIdentity& e) {
    throw InvalidChunk(std::string("not a chunk: ") + e.what());
  }
}

struct Closure {
  std::vector<CremonaElement> elements;
  bool closed = false;  // false when `limit` stopped the search
};

/// id, the seeds and their inverses, then products x∘y of elements found so
/// far, breadth first, until no new element appears or `limit` is reached.
/// A product is named `x*y`.
inline Closure close_under_products(const std::vector<CremonaElement>& seeds, std::size_t limit) {
  if (seeds.empty()) throw InvalidChunk("no generators");
  Closure out;
  auto& L = out.elements;
  auto add = [&](const CremonaElement& e) {
    for (const auto& f : L) {
      if (tuple_eq(f.forward(), e.forward())) return true;
    }
    if (L.size() >= limit) return false;
    L.push_back(e);
    return true;
  };
  bool room = add(CremonaElement::identity(seeds.front().dimension(), seeds.front().field()).renamed("id"));
  for (const auto& s : seeds) room = room && add(s);
  for (const auto& s : seeds) room = room && add(s.inverted());
  std::size_t done = 0;
  while (room && done < L.size()) {
    const std::size_t end = L.size();
    for (std::size_t i = 0; i < end && room; ++i) {
      for (std::size_t j = 0; j < end && room; ++j) {
        if (std::max(i, j) < done) continue;
        room = add(L[i].then_after(L[j]).renamed(L[i].name() + "*" + L[j].name()));
      }
    }
    done = end;
  }
  out.closed = room;
  return out;
}

struct ProductDefect {
  Triple triple;              // (g, h, gh) by chunk index
  std::size_t disagreements;  // #{x : ĝĥ(x) != gh-hat(x)}
  Rational defect;
};

struct Separation {
  std::size_t a, b;
  std::size_t disagreements;
  Rational distance;
};

struct ReportOptions {
  std::uint64_t cap = PointTable::kDefaultCap;
  Extension extension;
};

struct DefectReport {
  std::uint64_t p = 0;
  unsigned m = 0;
  std::size_t d = 0;
  std::uint64_t n = 0;
  std::vector<std::string> labels;
  std::vector<std::size_t> singular_counts;
  std::vector<std::size_t> moved_from_regular;
  std::vector<ProductDefect> product_defects;
  std::vector<Separation> separations;
  Rational epsilon;
  std::optional<Rational> certificate_r;  // 1/epsilon when 0 < epsilon < 1
  Rational measured_c;                    // max |Z_u| / q^(m(d-1))

  // Exhaustive checks of the analytic bounds; all must hold.
  bool locality_holds = true;          // mismatches lie in Z_h ∪ h^-1(Z_g) ∪ Z_gh
  bool envelope_holds = true;          // defect <= 2(max |Z| + max moved)/n
  bool agreement_locus_holds = true;   // u(x) = v(x) off Z forces num(u - v)(x) = 0
  bool separation_bound_holds = true;  // 1 - d(û, v̂) <= (#agree + |Z_u| + |Z_v|)/n

  ElementChunk<CremonaElement> chunk;
  FiniteMap map;

  bool exact() const { return epsilon == 0; }
  bool checks_hold() const {
    return locality_holds && envelope_holds && agreement_locus_holds && separation_bound_holds;
  }
};

/// Sofic approximation of a chunk of Cr_d(F_p) on the points of
/// GF(p^m)^d, with every product defect and pairwise separation.
inline DefectReport defect_report(const std::vector<CremonaElement>& W, unsigned m, const ReportOptions& opts = {}) {
  DefectReport r;
  r.chunk = cremona_chunk(W);
  const auto& elems = r.chunk.elements;
  const Field& base = elems.front().field();
  if (!base.is_finite()) throw DomainMismatch("sofic approximations need elements over a finite field");
  for (const auto& e : elems) {
    if (e.field() != base || e.dimension() != elems.front().dimension()) {
      throw DomainMismatch("chunk elements disagree on field or dimension");
    }
  }
  const Field L = Field::extension(base.characteristic(), m * base.degree());
  const PointTable table(L, elems.front().dimension(), opts.cap);
  r.p = base.characteristic();
  r.m = m * base.degree();
  r.d = table.dimension();
  r.n = table.size();
  r.labels = r.chunk.chunk.labels();

  std::vector<PermutationRep> reps;
  for (const auto& e : elems) {
    reps.push_back(build_perm(e, table, opts.extension));
    const auto& rep = reps.back();
    r.singular_counts.push_back(static_cast<std::size_t>(std::count(rep.singular.begin(), rep.singular.end(), true)));
    r.moved_from_regular.push_back(rep.moved_from_regular);
    r.map.images.push_back(rep.perm);
  }
  r.map.n = r.n;
  const Rational nn(static_cast<unsigned long>(r.n));
  const std::size_t max_z = *std::max_element(r.singular_counts.begin(), r.singular_counts.end());
  const std::size_t max_moved = *std::max_element(r.moved_from_regular.begin(), r.moved_from_regular.end());
  const Rational envelope = Rational(2 * static_cast<unsigned long>(max_z + max_moved)) / nn;

  for (const auto& t : r.chunk.chunk.triples()) {
    const auto& g = reps[t.x];
    const auto& h = reps[t.y];
    const auto& gh = reps[t.z];
    const Permutation product = g.perm * h.perm;
    std::size_t count = 0;
    for (std::uint64_t x = 0; x < r.n; ++x) {
      if (product(x) == gh.perm(x)) continue;
      ++count;
      if (!(h.singular[x] || g.singular[h.perm(x)] || gh.singular[x])) r.locality_holds = false;
    }
    Rational defect = Rational(static_cast<unsigned long>(count)) / nn;
    if (defect > envelope) r.envelope_holds = false;
    r.product_defects.push_back({t, count, defect});
  }

  for (std::size_t a = 0; a < elems.size(); ++a) {
    for (std::size_t b = a + 1; b < elems.size(); ++b) {
      const std::size_t count = disagreements(reps[a].perm, reps[b].perm);
      r.separations.push_back({a, b, count, Rational(static_cast<unsigned long>(count)) / nn});
      std::vector<Polynomial> numerators;
      for (std::size_t i = 0; i < r.d; ++i) {
        const auto& f = elems[a].forward()[i];
        const auto& g = elems[b].forward()[i];
        numerators.push_back(f.numerator() * g.denominator() - g.numerator() * f.denominator());
      }
      std::size_t agree = 0;
      for (std::uint64_t x = 0; x < r.n; ++x) {
        if (reps[a].singular[x] || reps[b].singular[x] || reps[a].perm(x) != reps[b].perm(x)) continue;
        ++agree;
        const Point pt = table.point(x);
        for (const auto& num : numerators) {
          if (!num.evaluate(pt).is_zero()) r.agreement_locus_holds = false;
        }
      }
      const std::size_t bound = agree + r.singular_counts[a] + r.singular_counts[b];
      if (r.n - count > bound) r.separation_bound_holds = false;
    }
  }

  r.epsilon = 0;
  for (const auto& pd : r.product_defects) r.epsilon = std::max(r.epsilon, pd.defect);
  for (const auto& s : r.separations) r.epsilon = std::max<Rational>(r.epsilon, 1 - s.distance);
  if (r.epsilon > 0 && r.epsilon < 1) r.certificate_r = Rational(1 / r.epsilon);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), L.order(), r.d - 1);
  r.measured_c = Rational(Integer(static_cast<unsigned long>(max_z)), scale);
  r.measured_c.canonicalize();
  return r;
}

struct ProfilePoint {
  unsigned m = 0;
  std::uint64_t n = 0;
  Rational epsilon;
  std::optional<Rational> r;   // absent when epsilon is 0 (exact) or >= 1
  std::optional<double> slope;  // log n / log r, when r > 1
};

struct Profile {
  std::vector<DefectReport> reports;
  std::vector<ProfilePoint> points;
  std::optional<double> fitted_slope;  // least squares of log n against log r
};

inline double log_rational(const Rational& q) {
  long exp_num = 0, exp_den = 0;
  const double num = mpz_get_d_2exp(&exp_num, q.get_num_mpz_t());
  const double den = mpz_get_d_2exp(&exp_den, q.get_den_mpz_t());
  return std::log(num) - std::log(den) + static_cast<double>(exp_num - exp_den) * std::log(2.0);
}

/// Least-squares slope of ys against xs; absent below two distinct xs.
inline std::optional<double> least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

/// One defect report per m and the (r, n) certificates σ_W(r) <= n.
inline Profile profile_points(const std::vector<CremonaElement>& W, const std::vector<unsigned>& ms,
                              const ReportOptions& opts = {}) {
  if (ms.empty()) throw DomainMismatch("the m range is empty");
  if (!std::is_sorted(ms.begin(), ms.end()) || std::adjacent_find(ms.begin(), ms.end()) != ms.end()) {
    throw DomainMismatch("the m range must be strictly ascending");
  }
  Profile out;
  std::vector<double> xs, ys;
  for (unsigned m : ms) {
    out.reports.push_back(defect_report(W, m, opts));
    const auto& rep = out.reports.back();
    ProfilePoint pt{m, rep.n, rep.epsilon, rep.certificate_r, std::nullopt};
    if (pt.r && *pt.r > 1) {
      const double lr = log_rational(*pt.r), ln = std::log(static_cast<double>(rep.n));
      pt.slope = ln / lr;
      xs.push_back(lr);
      ys.push_back(ln);
    }
    out.points.push_back(pt);
  }
  out.fitted_slope = least_squares_slope(xs, ys);
  return out;
}

}  // namespace cremona
