#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/field.hpp"

namespace cremona {

/// A bijection of {0, ..., n-1}, stored as its image array.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (auto v : images_) {
      if (v >= images_.size() || seen[v]) throw NotBijection("image array is not a permutation of [0, n)");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.images_.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.images_[i] = static_cast<std::uint32_t>(i);
    return p;
  }

  std::size_t size() const { return images_.size(); }
  std::uint32_t operator()(std::size_t i) const { return images_[i]; }
  const std::vector<std::uint32_t>& images() const { return images_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i] != i) return false;
    }
    return true;
  }

  /// this∘other: `other` acts first.
  Permutation compose(const Permutation& other) const {
    if (other.size() != size()) throw SizeMismatch("composing permutations of different sizes");
    Permutation out;
    out.images_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) out.images_[i] = images_[other.images_[i]];
    return out;
  }

  Permutation inverse() const {
    Permutation out;
    out.images_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) out.images_[images_[i]] = static_cast<std::uint32_t>(i);
    return out;
  }

  friend Permutation operator*(const Permutation& a, const Permutation& b) { return a.compose(b); }
  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

/// Number of points where u and v disagree.
inline std::size_t disagreements(const Permutation& u, const Permutation& v) {
  if (u.size() != v.size()) {
    throw SizeMismatch("permutations of sizes " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < u.size(); ++i) count += u(i) != v(i) ? 1 : 0;
  return count;
}

/// Normalized Hamming distance #{i : u(i) != v(i)} / n, exact.
inline Rational hamming(const Permutation& u, const Permutation& v) {
  const std::size_t count = disagreements(u, v);
  if (u.size() == 0) return 0;
  Rational out(static_cast<unsigned long>(count), static_cast<unsigned long>(u.size()));
  out.canonicalize();
  return out;
}

}  // namespace cremona
