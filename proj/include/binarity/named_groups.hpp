#pragma once

#include <array>
#include <map>

#include "binarity/actions.hpp"
#include "binarity/perm_group.hpp"

// Concrete permutation groups used by the corpus, the fixtures and the tests.

namespace binarity::groups {

inline Permutation cycle_perm(std::size_t degree, std::vector<Point> cycle) {
  return Permutation::from_cycles(degree, {std::move(cycle)});
}

inline PermGroup cyclic(std::size_t n) {
  if (n == 1) return PermGroup(1, {}, "C1");
  std::vector<Point> c(n);
  std::iota(c.begin(), c.end(), Point{0});
  return PermGroup(n, {cycle_perm(n, c)}, "C" + std::to_string(n));
}

/// Dihedral group of order 2n on the n vertices of a polygon.
inline PermGroup dihedral(std::size_t n) {
  std::vector<Point> refl(n);
  for (std::size_t i = 0; i < n; ++i) refl[i] = static_cast<Point>((n - i) % n);
  auto g = cyclic(n);
  auto gens = g.generators();
  gens.emplace_back(refl);
  return PermGroup(n, std::move(gens), "D" + std::to_string(2 * n));
}

inline PermGroup symmetric(std::size_t n) {
  if (n == 1) return PermGroup(1, {}, "Sym(1)");
  std::vector<Point> c(n);
  std::iota(c.begin(), c.end(), Point{0});
  return PermGroup(n, {cycle_perm(n, {0, 1}), cycle_perm(n, c)}, "Sym(" + std::to_string(n) + ")");
}

inline PermGroup alternating(std::size_t n) {
  std::string name = "Alt(" + std::to_string(n) + ")";
  if (n < 3) return PermGroup(n, {}, name);
  std::vector<Point> c;
  for (Point i = (n % 2 == 1 ? 0 : 1); i < n; ++i) c.push_back(i);
  return PermGroup(n, {cycle_perm(n, {0, 1, 2}), cycle_perm(n, c)}, name);
}

/// Direct product acting on the disjoint union (a's points first).
inline PermGroup direct_product(const PermGroup& a, const PermGroup& b) {
  const std::size_t n = a.degree() + b.degree();
  std::vector<Permutation> gens;
  for (const auto& g : a.generators()) {
    std::vector<Point> img(n);
    std::iota(img.begin(), img.end(), Point{0});
    for (Point i = 0; i < a.degree(); ++i) img[i] = g[i];
    gens.emplace_back(img);
  }
  for (const auto& g : b.generators()) {
    std::vector<Point> img(n);
    std::iota(img.begin(), img.end(), Point{0});
    for (Point i = 0; i < b.degree(); ++i) {
      img[a.degree() + i] = static_cast<Point>(a.degree() + g[i]);
    }
    gens.emplace_back(img);
  }
  return PermGroup(n, std::move(gens), a.name() + "x" + b.name());
}

/// Embeds a permutation of degree k into degree n >= k acting on `points`.
inline Permutation embed(const Permutation& g, std::size_t n, std::size_t offset) {
  std::vector<Point> img(n);
  std::iota(img.begin(), img.end(), Point{0});
  for (Point i = 0; i < g.degree(); ++i) img[offset + i] = static_cast<Point>(offset + g[i]);
  return Permutation(std::move(img));
}

/// PGL(2,p) on the projective line {0..p-1, inf = p}, p prime.
inline PermGroup pgl2(std::uint32_t p) {
  if (!is_prime(p)) throw InvalidInput("pgl2 needs a prime field size");
  const std::size_t n = p + 1;
  const Point inf = p;
  std::uint32_t prim = 2;
  for (;; ++prim) {
    std::uint32_t x = 1, ord = 0;
    do {
      x = x * prim % p;
      ++ord;
    } while (x != 1);
    if (ord == p - 1) break;
  }
  auto inv = [p](std::uint32_t a) {
    std::uint32_t r = 1, e = p - 2, b = a;
    while (e) {
      if (e & 1) r = static_cast<std::uint32_t>(std::uint64_t(r) * b % p);
      b = static_cast<std::uint32_t>(std::uint64_t(b) * b % p);
      e >>= 1;
    }
    return r;
  };
  std::vector<Point> t(n), m(n), s(n);
  for (Point x = 0; x < p; ++x) {
    t[x] = (x + 1) % p;
    m[x] = static_cast<Point>(std::uint64_t(x) * prim % p);
    s[x] = x == 0 ? inf : static_cast<Point>((p - inv(x)) % p);
  }
  t[inf] = inf;
  m[inf] = inf;
  s[inf] = 0;
  return PermGroup(n, {Permutation(t), Permutation(m), Permutation(s)},
                   "PGL(2," + std::to_string(p) + ")");
}

/// The Frobenius group 2^5:31 of affine maps x -> a x + b over GF(32).
inline PermGroup frobenius_32_31() {
  constexpr std::uint32_t poly = 0b100101;  // x^5 + x^2 + 1
  auto mul_x = [](std::uint32_t v) {
    v <<= 1;
    if (v & 32) v ^= poly;
    return v;
  };
  std::vector<Point> tr(32), mu(32);
  for (Point v = 0; v < 32; ++v) {
    tr[v] = v ^ 1u;
    mu[v] = mul_x(v);
  }
  return PermGroup(32, {Permutation(tr), Permutation(mu)}, "2^5:31");
}

/// Extraspecial group of order p^3 and exponent p (p odd) acting on
/// F_p^2 by (a,b) -> (a+1,b) and (a,b) -> (a,b+a).
inline PermGroup heisenberg(std::uint32_t p) {
  const std::size_t n = std::size_t(p) * p;
  std::vector<Point> x(n), y(n);
  for (Point a = 0; a < p; ++a) {
    for (Point b = 0; b < p; ++b) {
      x[a * p + b] = ((a + 1) % p) * p + b;
      y[a * p + b] = a * p + (b + a) % p;
    }
  }
  return PermGroup(n, {Permutation(x), Permutation(y)}, std::to_string(p) + "^(1+2)");
}

/// SL(3,3) = L3(3) acting on the 13 points of PG(2,3).
inline PermGroup psl3_3_on_points() {
  std::vector<std::array<int, 3>> pts;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        std::array<int, 3> v{a, b, c};
        int lead = a ? a : (b ? b : c);
        if (lead == 1) pts.push_back(v);
      }
    }
  }
  auto index_of = [&](std::array<int, 3> v) {
    int lead = v[0] ? v[0] : (v[1] ? v[1] : v[2]);
    if (lead == 2) {
      for (int& e : v) e = (2 * e) % 3;
    }
    return static_cast<Point>(std::find(pts.begin(), pts.end(), v) - pts.begin());
  };
  // Row vector times the transvection I + E_ij.
  auto transvection = [&](int i, int j) {
    std::vector<Point> img(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      auto v = pts[k];
      v[j] = (v[j] + v[i]) % 3;
      img[k] = index_of(v);
    }
    return Permutation(img);
  };
  return PermGroup(13, {transvection(0, 1), transvection(1, 2), transvection(2, 0)}, "L3(3)");
}

/// M11 on 11 points (0-based form of the standard generators).
inline PermGroup m11() {
  return PermGroup(11,
                   {parse_permutation("(1 2 3 4 5 6 7 8 9 10 11)", 11, true),
                    parse_permutation("(3 7 11 8)(4 10 5 6)", 11, true)},
                   "M11");
}

/// A subgroup of M11 of index 12 (isomorphic to L2(11)), generated by the
/// 11-cycle and the first element found that gives order 660.
inline PermGroup m11_index12_subgroup() {
  const auto M = m11();
  const auto a = M.generators()[0];
  std::optional<PermGroup> found;
  M.for_each_element([&](const Permutation& y) {
    if (!found) {
      PermGroup H(11, {a, y});
      if (H.order() == 660) found = std::move(H);
    }
  });
  if (!found) throw std::logic_error("no index-12 subgroup found in M11");
  found->set_name("L2(11)");
  return *found;
}

/// M11 acting 3-transitively on 12 points.
inline PermGroup m11_on_12() {
  auto g = coset_action(m11(), m11_index12_subgroup()).group();
  g.set_name("M11 on 12");
  return g;
}

/// A4 x Sym(5) on 4 + 5 points.
inline PermGroup a4_x_s5() {
  auto g = direct_product(alternating(4), symmetric(5));
  g.set_name("A4xS5");
  return g;
}

/// The Sylow 2-subgroup V4 x D8 of A4 x Sym(5) (shape 2x2xD4).
inline PermGroup a4_x_s5_sylow2() {
  const std::size_t n = 9;
  return PermGroup(n,
                   {parse_permutation("(0 1)(2 3)", n), parse_permutation("(0 2)(1 3)", n),
                    parse_permutation("(4 5 6 7)", n), parse_permutation("(4 6)", n)},
                   "2x2xD4");
}

}  // namespace binarity::groups
