#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "binarity/actions.hpp"

namespace binarity {

/// Colouring of Ω×Ω by the orbitals of a group.
///
/// Colours are numbered in order of first appearance when pairs are scanned
/// lexicographically, so the numbering is a function of the group alone.
struct OrbitalPartition {
  std::size_t degree = 0;
  std::uint32_t num_colors = 0;
  std::uint32_t diagonal_colors = 0;
  std::vector<std::uint32_t> color;  // row-major, degree * degree

  std::uint32_t at(Point u, Point v) const { return color[std::size_t(u) * degree + v]; }
  std::uint32_t off_diagonal_colors() const { return num_colors - diagonal_colors; }
};

inline OrbitalPartition orbital_partition(const PermGroup& G, const Limits& limits = {}) {
  const std::size_t n = G.degree();
  if (n > limits.closure_degree_cap) {
    throw BudgetExceeded("orbital colouring of degree " + std::to_string(n) + " exceeds cap " +
                         std::to_string(limits.closure_degree_cap));
  }
  constexpr auto none = static_cast<std::uint32_t>(-1);
  OrbitalPartition op;
  op.degree = n;
  op.color.assign(n * n, none);
  std::vector<std::pair<Point, Point>> stack;
  for (Point u = 0; u < n; ++u) {
    for (Point v = 0; v < n; ++v) {
      if (op.color[std::size_t(u) * n + v] != none) continue;
      const std::uint32_t c = op.num_colors++;
      if (u == v) ++op.diagonal_colors;
      op.color[std::size_t(u) * n + v] = c;
      stack.assign(1, {u, v});
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        for (const auto& g : G.generators()) {
          Point x = g[a], y = g[b];
          auto& slot = op.color[std::size_t(x) * n + y];
          if (slot == none) {
            slot = c;
            stack.emplace_back(x, y);
          }
        }
      }
    }
  }
  return op;
}

inline OrbitalPartition orbital_partition(const ActionSpace& A, const Limits& limits = {}) {
  return orbital_partition(A.group(), limits);
}

/// True iff sigma maps every orbital colour class onto itself.
inline bool preserves_orbitals(const OrbitalPartition& op, const Permutation& sigma) {
  const std::size_t n = op.degree;
  for (Point u = 0; u < n; ++u) {
    const Point su = sigma[u];
    for (Point v = 0; v < n; ++v) {
      if (op.at(u, v) != op.at(su, sigma[v])) return false;
    }
  }
  return true;
}

struct ClosureResult {
  /// Set when the closure is the full symmetric group and was not searched.
  bool symbolic_full = false;
  /// Generators of the closure (absent when symbolic_full).
  std::optional<PermGroup> closure;
  BigInt order = 1;
  bool is_two_closed = true;
  /// Some element of the closure outside G.
  std::optional<Permutation> witness;
  std::uint64_t nodes = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Ordered partition of the points; cells are numbered 0..ncells-1 in an
/// order that depends only on invariant data.
struct CellPartition {
  std::vector<std::uint32_t> cell;
  std::uint32_t ncells = 0;

  bool discrete() const { return ncells == cell.size(); }
};

/// Colour refinement on the orbital-coloured complete digraph.
class Refiner {
 public:
  explicit Refiner(const OrbitalPartition& op) : op_(op), n_(op.degree) {}

  CellPartition initial() const {
    CellPartition p;
    p.cell.resize(n_);
    std::vector<std::uint64_t> key(n_);
    for (Point v = 0; v < n_; ++v) key[v] = op_.at(v, v);
    renumber(p, key);
    return p;
  }

  CellPartition individualize(const CellPartition& p, Point v) const {
    CellPartition q;
    q.cell.resize(n_);
    std::vector<std::uint64_t> key(n_);
    for (Point x = 0; x < n_; ++x) key[x] = std::uint64_t(p.cell[x]) * 2 + (x == v ? 0 : 1);
    renumber(q, key);
    return q;
  }

  /// Refines to a stable partition; returns a hash of the refinement steps.
  std::uint64_t refine(CellPartition& p) const {
    std::uint64_t trace = mix64(p.ncells);
    std::vector<std::uint64_t> h(n_);
    while (!p.discrete()) {
      for (Point v = 0; v < n_; ++v) {
        std::uint64_t s = 0;
        const std::uint32_t* row = &op_.color[std::size_t(v) * n_];
        for (Point w = 0; w < n_; ++w) {
          s += mix64((std::uint64_t(row[w]) << 32) | p.cell[w]);
        }
        h[v] = s;
      }
      // Order new cells by (old cell, signature); signatures are compared by
      // value so the order is invariant.
      std::vector<Point> idx(n_);
      std::iota(idx.begin(), idx.end(), Point{0});
      std::sort(idx.begin(), idx.end(), [&](Point a, Point b) {
        if (p.cell[a] != p.cell[b]) return p.cell[a] < p.cell[b];
        return h[a] < h[b];
      });
      CellPartition q;
      q.cell.resize(n_);
      std::uint32_t id = 0;
      for (std::size_t k = 0; k < n_; ++k) {
        if (k > 0 && (p.cell[idx[k]] != p.cell[idx[k - 1]] || h[idx[k]] != h[idx[k - 1]])) {
          trace = mix64(trace ^ (std::uint64_t(id) << 40) ^ h[idx[k - 1]] ^ k);
          ++id;
        }
        q.cell[idx[k]] = id;
      }
      q.ncells = id + 1;
      trace = mix64(trace ^ h[idx[n_ - 1]] ^ (std::uint64_t(q.ncells) << 20));
      if (q.ncells == p.ncells) break;
      p = std::move(q);
    }
    return trace;
  }

 private:
  void renumber(CellPartition& p, const std::vector<std::uint64_t>& key) const {
    std::vector<std::uint64_t> keys(key);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (Point x = 0; x < n_; ++x) {
      p.cell[x] = static_cast<std::uint32_t>(std::lower_bound(keys.begin(), keys.end(), key[x]) - keys.begin());
    }
    p.ncells = static_cast<std::uint32_t>(keys.size());
  }

  const OrbitalPartition& op_;
  std::size_t n_;
};

inline std::vector<Point> orbit_under(std::size_t n, Point start, const std::vector<Permutation>& gens) {
  std::vector<Point> orb{start};
  std::vector<bool> seen(n, false);
  seen[start] = true;
  for (std::size_t k = 0; k < orb.size(); ++k) {
    for (const auto& g : gens) {
      Point y = g[orb[k]];
      if (!seen[y]) {
        seen[y] = true;
        orb.push_back(y);
      }
    }
  }
  return orb;
}

}  // namespace detail

/// Automorphism group of the orbital-coloured complete digraph of G.
///
/// Individualization and refinement along a first path fixes a base; each
/// level is then completed by searching for automorphisms that map the base
/// point to every candidate not yet in its orbit. Known elements of G prune
/// the candidates, so every automorphism the search finds lies outside G.
inline ClosureResult two_closure(const PermGroup& G, const Limits& limits = {}) {
  const std::size_t n = G.degree();
  ClosureResult res;
  res.order = G.order();

  if (n > 1 && G.is_transitive() && G.point_stabilizer(0).orbit(1).size() == n - 1) {
    res.symbolic_full = true;
    res.order = factorial(n);
    res.is_two_closed = res.order == G.order();
    if (!res.is_two_closed) {
      for (Point a = 0; a < n && !res.witness; ++a) {
        for (Point b = a + 1; b < n; ++b) {
          auto t = Permutation::from_cycles(n, {{a, b}});
          if (!G.contains(t)) {
            res.witness = t;
            break;
          }
        }
      }
    }
    return res;
  }

  const auto op = orbital_partition(G, limits);
  detail::Refiner refiner(op);
  NodeCounter nodes(limits.search_nodes, "2-closure search");

  struct PathLevel {
    detail::CellPartition before;  // partition before individualizing base
    Point base;
    std::uint32_t target;
    std::uint64_t trace;  // after individualizing and refining
  };
  std::vector<PathLevel> path;
  detail::CellPartition part = refiner.initial();
  refiner.refine(part);
  while (!part.discrete()) {
    std::vector<std::uint32_t> size(part.ncells, 0);
    for (auto c : part.cell) ++size[c];
    std::uint32_t target = 0;
    while (size[target] < 2) ++target;
    Point b = 0;
    while (part.cell[b] != target) ++b;
    PathLevel lv{part, b, target, 0};
    part = refiner.individualize(part, b);
    lv.trace = refiner.refine(part);
    path.push_back(std::move(lv));
  }
  auto leaf_map = [&](const detail::CellPartition& leaf) {
    std::vector<Point> vertex_of(n);
    for (Point x = 0; x < n; ++x) vertex_of[leaf.cell[x]] = x;
    std::vector<Point> img(n);
    for (Point x = 0; x < n; ++x) img[x] = vertex_of[part.cell[x]];
    return Permutation(std::move(img));
  };

  // Depth-first search for an automorphism below a node at depth `d` whose
  // partition matches the first path's partition at that depth.
  std::function<std::optional<Permutation>(std::size_t, const detail::CellPartition&)> dive =
      [&](std::size_t d, const detail::CellPartition& p) -> std::optional<Permutation> {
    nodes.tick();
    if (d == path.size()) {
      if (!p.discrete()) return std::nullopt;
      auto sigma = leaf_map(p);
      if (preserves_orbitals(op, sigma)) return sigma;
      return std::nullopt;
    }
    const auto& lv = path[d];
    for (Point z = 0; z < n; ++z) {
      if (p.cell[z] != lv.target) continue;
      auto q = refiner.individualize(p, z);
      if (refiner.refine(q) != lv.trace || q.ncells != (d + 1 < path.size() ? path[d + 1].before.ncells : n)) {
        continue;
      }
      auto r = dive(d + 1, q);
      if (r) return r;
    }
    return std::nullopt;
  };

  std::vector<Permutation> found;
  std::vector<Point> prefix;
  for (const auto& lv : path) prefix.push_back(lv.base);
  BigInt order = 1;
  for (std::size_t i = path.size(); i-- > 0;) {
    const auto& lv = path[i];
    std::vector<Point> fixed(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(i));
    std::vector<Permutation> known = G.pointwise_stabilizer(fixed).generators();
    for (const auto& f : found) {
      bool fixes = true;
      for (Point b : fixed) fixes = fixes && f[b] == b;
      if (fixes) known.push_back(f);
    }
    auto orb = detail::orbit_under(n, lv.base, known);
    std::vector<bool> in_orb(n, false);
    for (Point x : orb) in_orb[x] = true;
    for (Point z = 0; z < n; ++z) {
      if (lv.before.cell[z] != lv.target || in_orb[z]) continue;
      auto q = refiner.individualize(lv.before, z);
      if (refiner.refine(q) != lv.trace) continue;
      auto sigma = dive(i + 1, q);
      if (!sigma) continue;
      if (G.contains(*sigma)) throw std::logic_error("2-closure search produced an element of G");
      if (!res.witness) res.witness = *sigma;
      found.push_back(*sigma);
      known.push_back(*sigma);
      orb = detail::orbit_under(n, lv.base, known);
      for (Point x : orb) in_orb[x] = true;
    }
    order *= orb.size();
  }
  res.nodes = nodes.used();
  res.order = order;
  auto gens = G.generators();
  for (const auto& f : found) gens.push_back(f);
  res.closure = PermGroup(n, std::move(gens));
  res.is_two_closed = found.empty();
  return res;
}

inline ClosureResult two_closure(const ActionSpace& A, const Limits& limits = {}) {
  return two_closure(A.group(), limits);
}

}  // namespace binarity
