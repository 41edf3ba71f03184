#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/permutation.hpp"

namespace cremona {

/// xy = z in a chunk, by element index.
struct Triple {
  std::size_t x = 0, y = 0, z = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
};

class NotFunctional : public Error {
 public:
  NotFunctional(Triple first, Triple second, const std::string& what)
      : Error(ErrorCode::not_functional, what), first_(first), second_(second) {}

  const Triple& first() const { return first_; }
  const Triple& second() const { return second_; }

 private:
  Triple first_, second_;
};

/// A finite pointed set with a functional partial multiplication.
class Chunk {
 public:
  Chunk() = default;

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::size_t basepoint() const { return basepoint_; }

  std::optional<std::size_t> product(std::size_t x, std::size_t y) const { return law_.at(x * size() + y); }

  /// The law D in ascending (x, y) order.
  std::vector<Triple> triples() const {
    std::vector<Triple> out;
    for (std::size_t x = 0; x < size(); ++x) {
      for (std::size_t y = 0; y < size(); ++y) {
        if (auto z = product(x, y)) out.push_back({x, y, *z});
      }
    }
    return out;
  }

  std::optional<std::size_t> find(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

 private:
  friend Chunk validate_chunk(std::vector<std::string> labels, std::size_t basepoint, const std::vector<Triple>& law);

  std::vector<std::string> labels_;
  std::size_t basepoint_ = 0;
  std::vector<std::optional<std::size_t>> law_;
};

inline Chunk validate_chunk(std::vector<std::string> labels, std::size_t basepoint, const std::vector<Triple>& law) {
  const std::size_t k = labels.size();
  if (basepoint >= k) throw MissingBasepoint("the basepoint is not an element of the chunk");
  if (std::set<std::string>(labels.begin(), labels.end()).size() != k) {
    throw InvalidChunk("element labels must be distinct");
  }
  Chunk out;
  out.labels_ = std::move(labels);
  out.basepoint_ = basepoint;
  out.law_.assign(k * k, std::nullopt);
  std::vector<Triple> first(k * k);
  for (const auto& t : law) {
    if (t.x >= k || t.y >= k || t.z >= k) throw InvalidChunk("law mentions an element outside the chunk");
    auto& slot = out.law_[t.x * k + t.y];
    if (slot && *slot != t.z) {
      const auto& l = out.labels_;
      throw NotFunctional(first[t.x * k + t.y], t,
                          "(" + l[t.x] + ", " + l[t.y] + ") has products " + l[*slot] + " and " + l[t.z]);
    }
    slot = t.z;
    first[t.x * k + t.y] = t;
  }
  return out;
}

/// Label-based form: `law` lists (x, y, z) triples by label.
inline Chunk validate_chunk(const std::vector<std::string>& labels, const std::string& basepoint,
                            const std::vector<std::array<std::string, 3>>& law) {
  auto index = [&](const std::string& s) {
    auto it = std::find(labels.begin(), labels.end(), s);
    if (it == labels.end()) throw InvalidChunk("unknown element '" + s + "'");
    return static_cast<std::size_t>(it - labels.begin());
  };
  auto base = std::find(labels.begin(), labels.end(), basepoint);
  if (base == labels.end()) throw MissingBasepoint("basepoint '" + basepoint + "' is not an element");
  std::vector<Triple> triples;
  for (const auto& [x, y, z] : law) triples.push_back({index(x), index(y), index(z)});
  return validate_chunk(labels, static_cast<std::size_t>(base - labels.begin()), triples);
}

/// Chunk file: `elements:` labels, `basepoint:` label, then `law:` followed
/// by one `x y z` triple per line. `#` starts a comment.
inline Chunk parse_chunk_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> labels;
  std::optional<std::string> basepoint;
  std::vector<std::array<std::string, 3>> law;
  bool in_law = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (tokens.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (tokens[0] == "elements:") {
      labels.assign(tokens.begin() + 1, tokens.end());
      in_law = false;
    } else if (tokens[0] == "basepoint:") {
      if (tokens.size() != 2) throw InvalidChunk(where + "expected one basepoint label");
      basepoint = tokens[1];
      in_law = false;
    } else if (tokens[0] == "law:") {
      in_law = true;
      if (tokens.size() != 1) throw InvalidChunk(where + "triples start on the next line");
    } else if (in_law && tokens.size() == 3) {
      law.push_back({tokens[0], tokens[1], tokens[2]});
    } else {
      throw InvalidChunk(where + "unexpected '" + tokens[0] + "'");
    }
  }
  if (labels.empty()) throw InvalidChunk("no elements: line");
  if (!basepoint) throw MissingBasepoint("no basepoint: line");
  return validate_chunk(labels, *basepoint, law);
}

inline std::string to_text(const Chunk& c) {
  std::string out = "elements:";
  for (const auto& l : c.labels()) out += " " + l;
  out += "\nbasepoint: " + c.label(c.basepoint()) + "\nlaw:\n";
  for (const auto& t : c.triples()) out += c.label(t.x) + " " + c.label(t.y) + " " + c.label(t.z) + "\n";
  return out;
}

template <class T>
struct ElementChunk {
  Chunk chunk;
  std::vector<T> elements;  // chunk index -> element
};

/// The chunk of a subset of a group: xy = z whenever that holds in the
/// group. Elements equal under `eq` are merged (first occurrence kept).
/// `mul` returns an optional product; an absent product contributes nothing.
template <class T, class IsIdentity, class Eq, class Mul>
ElementChunk<T> chunk_of_elements(const std::vector<T>& elems, const std::vector<std::string>& labels,
                                  IsIdentity is_identity, Eq eq, Mul mul) {
  if (labels.size() != elems.size()) throw SizeMismatch("one label per element is required");
  ElementChunk<T> out;
  std::vector<std::string> kept_labels;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    bool seen = false;
    for (const auto& e : out.elements) seen = seen || eq(e, elems[i]);
    if (seen) continue;
    out.elements.push_back(elems[i]);
    kept_labels.push_back(labels[i]);
  }
  std::optional<std::size_t> base;
  for (std::size_t i = 0; i < out.elements.size() && !base; ++i) {
    if (is_identity(out.elements[i])) base = i;
  }
  if (!base) throw MissingIdentity("the element set does not contain the identity");
  std::vector<Triple> law;
  const std::size_t k = out.elements.size();
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y) {
      auto p = mul(out.elements[x], out.elements[y]);
      if (!p) continue;
      for (std::size_t z = 0; z < k; ++z) {
        if (eq(*p, out.elements[z])) {
          law.push_back({x, y, z});
          break;
        }
      }
    }
  }
  out.chunk = validate_chunk(std::move(kept_labels), *base, law);
  return out;
}

/// An assignment of one permutation of [0, n) to every chunk element.
struct FiniteMap {
  std::size_t n = 0;
  std::vector<Permutation> images;

  const Permutation& operator[](std::size_t i) const { return images.at(i); }
};

namespace detail {

inline void check_map(const FiniteMap& f, const Chunk& E) {
  if (f.images.size() != E.size()) throw SizeMismatch("the map must assign a permutation to every element");
  for (const auto& p : f.images) {
    if (p.size() != f.n) throw SizeMismatch("permutation size differs from n");
  }
}

}  // namespace detail

/// Largest d(f(z), f(x)f(y)) over the law, or 0 on an empty law.
inline Rational max_defect(const FiniteMap& f, const Chunk& E) {
  detail::check_map(f, E);
  Rational worst = 0;
  for (const auto& t : E.triples()) worst = std::max(worst, hamming(f[t.z], f[t.x] * f[t.y]));
  return worst;
}

/// Smallest distance between images of distinct elements; 1 when |E| < 2.
inline Rational min_separation(const FiniteMap& f, const Chunk& E) {
  detail::check_map(f, E);
  Rational best = 1;
  for (std::size_t a = 0; a < E.size(); ++a) {
    for (std::size_t b = a + 1; b < E.size(); ++b) best = std::min(best, hamming(f[a], f[b]));
  }
  return best;
}

inline bool is_eps_morphism(const FiniteMap& f, const Chunk& E, const Rational& eps) {
  detail::check_map(f, E);
  return f[E.basepoint()].is_identity() && max_defect(f, E) <= eps;
}

inline bool is_expansive(const FiniteMap& f, const Chunk& E, const Rational& level) {
  return min_separation(f, E) >= level;
}

namespace detail {

inline Integer factorial(std::size_t n) {
  Integer out = 1;
  for (std::size_t i = 2; i <= n; ++i) out *= static_cast<unsigned long>(i);
  return out;
}

inline std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<std::uint32_t> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<std::uint32_t>(i);
  std::vector<Permutation> out;
  do {
    out.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

// Backtracking over per-element permutations of [0, n). The basepoint is
// fixed to the identity and the rest are visited by decreasing number of
// law triples they occur in. Predicates receive disagreement counts.
class MapSearch {
 public:
  MapSearch(const Chunk& E, std::size_t n, std::function<bool(std::size_t)> defect_ok,
            std::function<bool(std::size_t)> separation_ok)
      : E_(E), n_(n), perms_(all_permutations(n)), defect_ok_(std::move(defect_ok)),
        separation_ok_(std::move(separation_ok)), choice_(E.size()) {
    const auto triples = E.triples();
    std::vector<std::size_t> degree(E.size(), 0);
    involved_.resize(E.size());
    for (const auto& t : triples) {
      for (std::size_t e : std::set<std::size_t>{t.x, t.y, t.z}) {
        ++degree[e];
        involved_[e].push_back(t);
      }
    }
    for (std::size_t e = 0; e < E.size(); ++e) {
      if (e != E.basepoint()) order_.push_back(e);
    }
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
    order_.insert(order_.begin(), E.basepoint());
  }

  std::optional<FiniteMap> run() {
    if (!visit(0)) return std::nullopt;
    FiniteMap out{n_, {}};
    for (auto c : choice_) out.images.push_back(perms_[*c]);
    return out;
  }

 private:
  bool visit(std::size_t pos) {
    if (pos == order_.size()) return true;
    const std::size_t e = order_[pos];
    const std::size_t candidates = pos == 0 ? 1 : perms_.size();  // perms_[0] is the identity
    for (std::size_t c = 0; c < candidates; ++c) {
      choice_[e] = c;
      if (consistent(e) && visit(pos + 1)) return true;
    }
    choice_[e].reset();
    return false;
  }

  bool consistent(std::size_t e) const {
    for (std::size_t o = 0; o < E_.size(); ++o) {
      if (o == e || !choice_[o]) continue;
      if (!separation_ok_(disagreements(perms_[*choice_[e]], perms_[*choice_[o]]))) return false;
    }
    for (const auto& t : involved_[e]) {
      if (!choice_[t.x] || !choice_[t.y] || !choice_[t.z]) continue;
      const auto product = perms_[*choice_[t.x]] * perms_[*choice_[t.y]];
      if (!defect_ok_(disagreements(perms_[*choice_[t.z]], product))) return false;
    }
    return true;
  }

  const Chunk& E_;
  std::size_t n_;
  std::vector<Permutation> perms_;
  std::function<bool(std::size_t)> defect_ok_, separation_ok_;
  std::vector<std::vector<Triple>> involved_;
  std::vector<std::size_t> order_;
  std::vector<std::optional<std::size_t>> choice_;
};

inline void check_search_space(const Chunk& E, std::size_t n, const Integer& cap) {
  Integer space = 1;
  const Integer f = factorial(n);
  for (std::size_t i = 1; i < E.size(); ++i) space *= f;
  if (space > cap) {
    throw SearchSpaceExceeded("(" + std::to_string(n) + "!)^" + std::to_string(E.size() - 1) + " = " +
                              space.get_str() + " exceeds the cap " + cap.get_str());
  }
}

}  // namespace detail

inline const Integer& default_search_cap() {
  static const Integer cap = 100000000;
  return cap;
}

/// Least n <= n_max with a (1 - 1/r)-expansive 1/r-morphism E -> Sym_n,
/// together with the map found.
inline std::optional<FiniteMap> sofic_search(const Chunk& E, const Rational& r, std::size_t n_max,
                                             const Integer& cap = default_search_cap()) {
  if (r <= 1) throw DomainMismatch("r must exceed 1");
  const Integer a = r.get_num(), b = r.get_den();
  for (std::size_t n = 1; n <= n_max; ++n) {
    detail::check_search_space(E, n, cap);
    const Integer nn = static_cast<unsigned long>(n);
    // count/n <= 1/r  and  count/n >= 1 - 1/r, cleared of denominators.
    auto defect_ok = [&](std::size_t count) { return Integer(static_cast<unsigned long>(count)) * a <= nn * b; };
    auto separation_ok = [&](std::size_t count) {
      return Integer(static_cast<unsigned long>(count)) * a >= nn * (a - b);
    };
    if (auto f = detail::MapSearch(E, n, defect_ok, separation_ok).run()) return f;
  }
  return std::nullopt;
}

inline std::optional<std::size_t> sigma_upper(const Chunk& E, const Rational& r, std::size_t n_max,
                                              const Integer& cap = default_search_cap()) {
  auto f = sofic_search(E, r, n_max, cap);
  if (!f) return std::nullopt;
  return f->n;
}

/// An injective 0-morphism into the smallest possible Sym_n, n <= n_max.
inline std::optional<FiniteMap> injective_rep_search(const Chunk& E, std::size_t n_max,
                                                     const Integer& cap = default_search_cap()) {
  for (std::size_t n = 1; n <= n_max; ++n) {
    detail::check_search_space(E, n, cap);
    auto defect_ok = [](std::size_t count) { return count == 0; };
    auto separation_ok = [](std::size_t count) { return count > 0; };
    if (auto f = detail::MapSearch(E, n, defect_ok, separation_ok).run()) return f;
  }
  return std::nullopt;
}

/// The finite group generated by permutations of one size, sorted.
inline std::vector<Permutation> generated_group(const std::vector<Permutation>& gens, std::size_t n) {
  std::set<Permutation> group{Permutation::identity(n)};
  std::vector<Permutation> frontier{Permutation::identity(n)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& g : frontier) {
      for (const auto& s : gens) {
        auto h = s * g;
        if (group.insert(h).second) next.push_back(std::move(h));
      }
    }
    frontier = std::move(next);
  }
  return {group.begin(), group.end()};
}

/// Given an injective representation f of E into Sym_n, the composite of f
/// with the left regular representation of the group G it generates. The
/// result is an exact, fully separated map into Sym_|G|.
inline FiniteMap regular_extension(const FiniteMap& f) {
  const auto group = generated_group(f.images, f.n);
  std::map<Permutation, std::uint32_t> index;
  for (std::size_t i = 0; i < group.size(); ++i) index[group[i]] = static_cast<std::uint32_t>(i);
  FiniteMap out{group.size(), {}};
  for (const auto& g : f.images) {
    std::vector<std::uint32_t> images(group.size());
    for (std::size_t i = 0; i < group.size(); ++i) images[i] = index.at(g * group[i]);
    out.images.emplace_back(std::move(images));
  }
  return out;
}

/// Testable half of the dichotomy: a qualifying map into Sym_n with n < r
/// must be an exact injective representation, since distances are
/// multiples of 1/n and 1/r < 1/n.
inline bool dichotomy_consistent(const FiniteMap& f, const Chunk& E, const Rational& r) {
  if (Rational(static_cast<unsigned long>(f.n)) >= r) return true;
  return is_eps_morphism(f, E, 0) && is_expansive(f, E, 1);
}

/// A finite set E of a group with a multiplication oracle, and generators S.
template <class G>
struct FolnerWitness {
  std::function<G(const G&, const G&)> mul;
  G identity;
  std::vector<G> E;
  std::vector<G> S;
  std::function<std::string(const G&)> label;  // optional
};

/// ∂_S E = SE − E, sorted.
template <class G>
std::vector<G> folner_boundary(const FolnerWitness<G>& w) {
  const std::set<G> inside(w.E.begin(), w.E.end());
  std::set<G> out;
  for (const auto& s : w.S) {
    for (const auto& x : w.E) {
      G y = w.mul(s, x);
      if (!inside.count(y)) out.insert(std::move(y));
    }
  }
  return {out.begin(), out.end()};
}

struct FolnerRecord {
  std::size_t n = 0;
  std::size_t boundary = 0;
  Rational r;
  std::vector<std::size_t> agreements;  // per generator, #{x : φ(s)x = sx}
  Rational min_agreement;
  Rational min_separation;
  Rational max_defect;
  bool agreement_ok = false;   // min_agreement > 1 - 1/r
  bool separation_ok = false;  // min_separation > 1 - 2/r
  bool defect_ok = false;      // max_defect < 3/r

  bool ok() const { return agreement_ok && separation_ok && defect_ok; }
};

template <class G>
struct FolnerResult {
  ElementChunk<G> chunk;  // chunk of {1} ∪ S
  FiniteMap map;          // on chunk elements, permutations of indices of E
  FolnerRecord record;
};

/// Left multiplication by each s, restricted to E where it stays inside and
/// completed to a bijection by matching the leftover points in ascending
/// index order.
template <class G>
FolnerResult<G> folner_to_sofic(const FolnerWitness<G>& w, const Rational& r) {
  if (r <= 0) throw DomainMismatch("r must be positive");
  const std::size_t n = w.E.size();
  const std::size_t boundary = folner_boundary(w).size();
  if (Rational(static_cast<unsigned long>(boundary)) * r >= Rational(static_cast<unsigned long>(n))) {
    throw WitnessTooSmall("|∂E| = " + std::to_string(boundary) + " is not below |E|/r with |E| = " +
                          std::to_string(n) + ", r = " + r.get_str());
  }
  std::map<G, std::uint32_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(w.E[i], static_cast<std::uint32_t>(i));
  if (index.size() != n) throw InvalidChunk("E has repeated elements");

  std::vector<G> elems{w.identity};
  elems.insert(elems.end(), w.S.begin(), w.S.end());
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    labels.push_back(w.label ? w.label(elems[i]) : (i == 0 ? std::string("1") : "s" + std::to_string(i - 1)));
  }
  FolnerResult<G> out;
  out.chunk = chunk_of_elements(
      elems, labels, [&](const G& g) { return g == w.identity; }, [](const G& a, const G& b) { return a == b; },
      [&](const G& a, const G& b) { return std::optional<G>(w.mul(a, b)); });

  out.map.n = n;
  FolnerRecord& rec = out.record;
  rec.n = n;
  rec.boundary = boundary;
  rec.r = r;
  for (const auto& s : out.chunk.elements) {
    std::vector<std::optional<std::uint32_t>> image(n);
    std::vector<bool> hit(n, false);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
      auto it = index.find(w.mul(s, w.E[i]));
      if (it == index.end()) continue;
      image[i] = it->second;
      hit[it->second] = true;
      ++agree;
    }
    std::size_t free_target = 0;
    std::vector<std::uint32_t> images(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!image[i]) {
        while (hit[free_target]) ++free_target;
        image[i] = static_cast<std::uint32_t>(free_target++);
      }
      images[i] = *image[i];
    }
    out.map.images.emplace_back(std::move(images));
    rec.agreements.push_back(agree);
  }
  const Rational nn(static_cast<unsigned long>(n));
  rec.min_agreement = 1;
  for (auto a : rec.agreements) {
    rec.min_agreement = std::min<Rational>(rec.min_agreement, Rational(static_cast<unsigned long>(a)) / nn);
  }
  rec.min_separation = min_separation(out.map, out.chunk.chunk);
  rec.max_defect = max_defect(out.map, out.chunk.chunk);
  rec.agreement_ok = rec.min_agreement > Rational(1 - 1 / r);
  rec.separation_ok = rec.min_separation > Rational(1 - 2 / r);
  rec.defect_ok = rec.max_defect < Rational(3 / r);
  return out;
}

using LatticePoint = std::vector<long>;

/// {0} ∪ {±e_i}: 2d + 1 elements of Z^d.
inline std::vector<LatticePoint> lattice_cross(std::size_t dim) {
  std::vector<LatticePoint> out{LatticePoint(dim, 0)};
  for (std::size_t i = 0; i < dim; ++i) {
    for (long sign : {-1L, 1L}) {
      LatticePoint e(dim, 0);
      e[i] = sign;
      out.push_back(e);
    }
  }
  return out;
}

/// The box [0, side)^dim in Z^dim with the additive oracle.
inline FolnerWitness<LatticePoint> lattice_box_witness(std::size_t dim, long side, std::vector<LatticePoint> S) {
  if (dim == 0 || side < 1) throw DomainMismatch("the box needs dim >= 1 and side >= 1");
  FolnerWitness<LatticePoint> w;
  w.mul = [](const LatticePoint& a, const LatticePoint& b) {
    if (a.size() != b.size()) throw SizeMismatch("lattice points of different dimension");
    LatticePoint out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
  };
  w.identity = LatticePoint(dim, 0);
  w.label = [](const LatticePoint& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) out += (i ? "," : "") + std::to_string(p[i]);
    return p.size() == 1 ? out : "(" + out + ")";
  };
  LatticePoint x(dim, 0);
  while (true) {
    w.E.push_back(x);
    std::size_t i = dim;
    while (i > 0 && ++x[i - 1] == side) x[--i] = 0;
    if (i == 0) break;
  }
  for (const auto& s : S) {
    if (s.size() != dim) throw SizeMismatch("generator of the wrong dimension");
  }
  w.S = std::move(S);
  return w;
}

}  // namespace cremona
