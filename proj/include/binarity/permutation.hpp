#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binarity/common.hpp"

namespace binarity {

/// A bijection of {0, ..., degree-1} stored as its image table.
///
/// Groups act on the right: `p[x]` is x^p, and `g * h` applies g first and
/// then h, so that x^(gh) = (x^g)^h.
class Permutation {
 public:
  Permutation() = default;

  /// Identity of the given degree.
  explicit Permutation(std::size_t degree) : images_(degree) {
    std::iota(images_.begin(), images_.end(), Point{0});
  }

  /// Takes ownership of an image table; throws unless it is a bijection.
  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Point x : images_) {
      if (x >= images_.size() || seen[x]) {
        throw InvalidInput("image table is not a bijection");
      }
      seen[x] = true;
    }
  }

  static Permutation identity(std::size_t degree) { return Permutation(degree); }

  /// Builds a permutation from disjoint cycles without validation beyond
  /// range and repetition checks.
  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<Point>>& cycles) {
    Permutation p(degree);
    std::vector<bool> used(degree, false);
    for (const auto& cycle : cycles) {
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        Point a = cycle[i];
        if (a >= degree) {
          throw InvalidInput("point " + std::to_string(a) + " >= degree " +
                             std::to_string(degree));
        }
        if (used[a]) {
          throw InvalidInput("point " + std::to_string(a) + " repeated in cycles");
        }
        used[a] = true;
        p.images_[a] = cycle[(i + 1) % cycle.size()];
      }
    }
    return p;
  }

  std::size_t degree() const { return images_.size(); }

  Point operator[](Point x) const { return images_[x]; }

  /// Checked image of a point.
  Point act(Point x) const {
    if (x >= images_.size()) {
      throw InvalidInput("point " + std::to_string(x) + " out of range for degree " +
                         std::to_string(images_.size()));
    }
    return images_[x];
  }

  std::span<const Point> images() const { return images_; }

  /// Left-to-right product: apply *this, then h.
  Permutation operator*(const Permutation& h) const {
    if (h.degree() != degree()) {
      throw InvalidInput("degree mismatch in composition: " + std::to_string(degree()) +
                         " vs " + std::to_string(h.degree()));
    }
    Permutation r;
    r.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) r.images_[i] = h.images_[images_[i]];
    return r;
  }

  Permutation& operator*=(const Permutation& h) { return *this = *this * h; }

  Permutation inverse() const {
    Permutation r;
    r.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) r.images_[images_[i]] = static_cast<Point>(i);
    return r;
  }

  /// g^x = x^-1 g x.
  Permutation conjugate_by(const Permutation& x) const { return x.inverse() * *this * x; }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i] != i) return false;
    }
    return true;
  }

  std::size_t fixed_point_count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < images_.size(); ++i) c += images_[i] == i;
    return c;
  }

  /// Smallest moved point, or degree() for the identity.
  std::size_t first_moved() const {
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i] != i) return i;
    }
    return images_.size();
  }

  /// Nontrivial cycles, each starting at its least point, ordered by that point.
  std::vector<std::vector<Point>> cycles() const {
    std::vector<std::vector<Point>> out;
    std::vector<bool> seen(images_.size(), false);
    for (Point i = 0; i < images_.size(); ++i) {
      if (seen[i] || images_[i] == i) continue;
      std::vector<Point> c;
      for (Point x = i; !seen[x]; x = images_[x]) {
        seen[x] = true;
        c.push_back(x);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  /// Cycle lengths including fixed points, sorted ascending.
  std::vector<std::size_t> cycle_type() const {
    std::vector<std::size_t> t;
    std::vector<bool> seen(images_.size(), false);
    for (Point i = 0; i < images_.size(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (Point x = i; !seen[x]; x = images_[x]) {
        seen[x] = true;
        ++len;
      }
      t.push_back(len);
    }
    std::sort(t.begin(), t.end());
    return t;
  }

  BigInt order() const {
    BigInt r = 1;
    for (std::size_t len : cycle_type()) r = boost::multiprecision::lcm(r, BigInt(len));
    return r;
  }

  Permutation power(long long e) const {
    Permutation base = e < 0 ? inverse() : *this;
    unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Permutation r(degree());
    while (k) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.images_ <=> b.images_;
  }

 private:
  std::vector<Point> images_;
};

inline Permutation compose(const Permutation& g, const Permutation& h) { return g * h; }

inline Point act(Point omega, const Permutation& g) { return g.act(omega); }

/// Applies g to every entry of a tuple.
inline std::vector<Point> act_tuple(std::span<const Point> tuple, const Permutation& g) {
  std::vector<Point> out;
  out.reserve(tuple.size());
  for (Point x : tuple) out.push_back(g.act(x));
  return out;
}

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Point x : p.images()) {
      h ^= x;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

/// Canonical text: disjoint cycles, least point first, "()" for the identity.
inline std::string to_cycle_string(const Permutation& p) {
  auto cs = p.cycles();
  if (cs.empty()) return "()";
  std::string s;
  for (const auto& c : cs) {
    s += '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(c[i]);
    }
    s += ')';
  }
  return s;
}

inline std::string to_image_list(const Permutation& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.degree(); ++i) {
    if (i) s += ',';
    s += std::to_string(p[static_cast<Point>(i)]);
  }
  return s + "]";
}

namespace detail {

inline void skip_separators(std::string_view t, std::size_t& i) {
  while (i < t.size() && (std::isspace(static_cast<unsigned char>(t[i])) || t[i] == ',')) ++i;
}

inline Point read_point(std::string_view t, std::size_t& i, bool one_based) {
  std::size_t start = i;
  unsigned long long v = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
    v = v * 10 + static_cast<unsigned long long>(t[i] - '0');
    if (v > 0xffffffffULL) throw InvalidInput("point value too large");
    ++i;
  }
  if (i == start) {
    throw InvalidInput("expected a point at offset " + std::to_string(start) + " in \"" +
                       std::string(t) + "\"");
  }
  if (one_based) {
    if (v == 0) throw InvalidInput("point 0 in one-based notation");
    --v;
  }
  return static_cast<Point>(v);
}

}  // namespace detail

/// Parses "(0 1 2)(3 4)" or an image list "[1,2,0,4,3]".
///
/// Points not mentioned are fixed. With `one_based`, every point is read
/// as 1-based and shifted down on ingest.
inline Permutation parse_permutation(std::string_view text, std::size_t degree,
                                     bool one_based = false) {
  if (degree == 0) throw InvalidInput("degree must be positive");
  std::size_t i = 0;
  detail::skip_separators(text, i);
  if (i < text.size() && text[i] == '[') {
    ++i;
    std::vector<Point> images;
    detail::skip_separators(text, i);
    while (i < text.size() && text[i] != ']') {
      images.push_back(detail::read_point(text, i, one_based));
      detail::skip_separators(text, i);
    }
    if (i >= text.size()) throw InvalidInput("unterminated image list");
    ++i;
    detail::skip_separators(text, i);
    if (i != text.size()) throw InvalidInput("trailing characters after image list");
    if (images.size() > degree) {
      throw InvalidInput("image list longer than degree " + std::to_string(degree));
    }
    for (Point x : images) {
      if (x >= degree) {
        throw InvalidInput("point " + std::to_string(x) + " >= degree " + std::to_string(degree));
      }
    }
    for (std::size_t k = images.size(); k < degree; ++k) images.push_back(static_cast<Point>(k));
    return Permutation(std::move(images));
  }

  std::vector<std::vector<Point>> cycles;
  while (i < text.size()) {
    if (text[i] != '(') {
      throw InvalidInput("expected '(' at offset " + std::to_string(i) + " in \"" +
                         std::string(text) + "\"");
    }
    ++i;
    std::vector<Point> cycle;
    detail::skip_separators(text, i);
    while (i < text.size() && text[i] != ')') {
      cycle.push_back(detail::read_point(text, i, one_based));
      detail::skip_separators(text, i);
    }
    if (i >= text.size()) throw InvalidInput("unterminated cycle");
    ++i;
    if (!cycle.empty()) cycles.push_back(std::move(cycle));
    detail::skip_separators(text, i);
  }
  return Permutation::from_cycles(degree, cycles);
}

}  // namespace binarity
