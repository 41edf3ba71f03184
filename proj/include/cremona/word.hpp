#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cremona/birational.hpp"
#include "cremona/error.hpp"

namespace cremona {

struct Letter {
  std::size_t generator = 0;
  bool inverse = false;

  Letter inverted() const { return {generator, !inverse}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A freely reduced word in the generators and their inverses.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(const std::vector<Letter>& letters) {
    for (const auto& l : letters) push(l);
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  GroupWord inverse() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverted());
    return GroupWord(out);
  }

  /// Rotation by k letters: a conjugate of this word.
  GroupWord rotated(std::size_t k) const {
    if (letters_.empty()) return *this;
    k %= letters_.size();
    std::vector<Letter> out(letters_.begin() + k, letters_.end());
    out.insert(out.end(), letters_.begin(), letters_.begin() + k);
    return GroupWord(out);
  }

  friend GroupWord operator*(const GroupWord& a, const GroupWord& b) {
    GroupWord out = a;
    for (const auto& l : b.letters_) out.push(l);
    return out;
  }

  friend bool operator==(const GroupWord&, const GroupWord&) = default;

 private:
  void push(const Letter& l) {
    if (!letters_.empty() && letters_.back() == l.inverted()) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }

  std::vector<Letter> letters_;
};

/// Named certified generators sharing dimension and field.
class GeneratorSystem {
 public:
  GeneratorSystem(std::vector<CremonaElement> generators, std::size_t dimension, Field field)
      : generators_(std::move(generators)), dimension_(dimension), field_(std::move(field)) {
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      const auto& g = generators_[i];
      if (g.dimension() != dimension_ || g.field() != field_) {
        throw DomainMismatch("generator '" + g.name() + "' has a different dimension or field");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (generators_[j].name() == g.name()) throw DomainMismatch("duplicate generator name '" + g.name() + "'");
      }
    }
  }

  explicit GeneratorSystem(std::vector<CremonaElement> generators)
      : GeneratorSystem(generators, require_nonempty(generators).dimension(), generators.front().field()) {}

  const std::vector<CremonaElement>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }
  std::size_t dimension() const { return dimension_; }
  const Field& field() const { return field_; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& g : generators_) out.push_back(g.name());
    return out;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      if (generators_[i].name() == name) return i;
    }
    return std::nullopt;
  }

  CremonaElement letter(const Letter& l) const {
    if (l.generator >= generators_.size()) {
      throw IndexOutOfRange("generator index " + std::to_string(l.generator) + " with " +
                            std::to_string(generators_.size()) + " generators");
    }
    const auto& g = generators_[l.generator];
    return l.inverse ? g.inverted() : g;
  }

 private:
  static const CremonaElement& require_nonempty(const std::vector<CremonaElement>& gens) {
    if (gens.empty()) throw DomainMismatch("a generator system needs at least one generator");
    return gens.front();
  }

  std::vector<CremonaElement> generators_;
  std::size_t dimension_;
  Field field_;
};

namespace detail {

// Product of elements[lo, hi) folded as a balanced binary tree.
inline CremonaElement fold_product(const std::vector<CremonaElement>& elements, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return elements[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return fold_product(elements, lo, mid).then_after(fold_product(elements, mid, hi));
}

}  // namespace detail

/// The element w(g_1, ..., g_k); the word `ab` is a∘b (b acts first).
inline CremonaElement evaluate_word(const GeneratorSystem& sys, const GroupWord& w) {
  if (w.empty()) return CremonaElement::identity(sys.dimension(), sys.field());
  std::vector<CremonaElement> letters;
  letters.reserve(w.size());
  for (const auto& l : w.letters()) letters.push_back(sys.letter(l));
  return detail::fold_product(letters, 0, letters.size());
}

inline bool is_identity_word(const GeneratorSystem& sys, const GroupWord& w) {
  const auto value = evaluate_word(sys, w);
  return tuple_eq(value.forward(), identity(sys.dimension(), sys.field()));
}

/// Word problem in the sub-semigroup generated by raw (uncertified) tuples.
/// Words are sequences of generator indices; the empty word is the identity.
inline BirationalTuple evaluate_semigroup_word(std::span<const BirationalTuple> sys,
                                               std::span<const std::size_t> word) {
  if (sys.empty()) throw DomainMismatch("a semigroup needs at least one generator");
  auto at = [&](std::size_t i) -> const BirationalTuple& {
    if (i >= sys.size()) throw IndexOutOfRange("generator index " + std::to_string(i));
    return sys[i];
  };
  if (word.empty()) return identity(sys.front().dimension(), sys.front().field());
  BirationalTuple value = at(word.back());
  for (std::size_t k = word.size() - 1; k-- > 0;) value = compose(at(word[k]), value);
  return value;
}

inline bool semigroup_words_equal(std::span<const BirationalTuple> sys, std::span<const std::size_t> w,
                                  std::span<const std::size_t> w2) {
  return tuple_eq(evaluate_semigroup_word(sys, w), evaluate_semigroup_word(sys, w2));
}

}  // namespace cremona
