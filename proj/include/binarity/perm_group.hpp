#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "binarity/stabilizer_chain.hpp"

namespace binarity {

/// A permutation group given by generators, with a stabilizer chain built
/// on first use. Copies share the chain; a built group is immutable.
class PermGroup {
 public:
  PermGroup() : PermGroup(1, {}) {}

  PermGroup(std::size_t degree, std::vector<Permutation> generators, std::string name = {})
      : degree_(degree), name_(std::move(name)), cache_(std::make_shared<Cache>()) {
    if (degree == 0) throw InvalidInput("degree must be positive");
    for (auto& g : generators) {
      if (g.degree() != degree) {
        throw InvalidInput("generator of degree " + std::to_string(g.degree()) +
                           " in group of degree " + std::to_string(degree));
      }
      if (!g.is_identity() && std::find(gens_.begin(), gens_.end(), g) == gens_.end()) {
        gens_.push_back(std::move(g));
      }
    }
  }

  static PermGroup trivial(std::size_t degree) { return PermGroup(degree, {}); }

  std::size_t degree() const { return degree_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  /// Nonidentity generators (may be empty for the trivial group).
  const std::vector<Permutation>& generators() const { return gens_; }

  /// Generators as given, with the identity standing in for an empty list.
  std::vector<Permutation> generators_or_identity() const {
    if (gens_.empty()) return {Permutation(degree_)};
    return gens_;
  }

  const StabilizerChain& chain() const {
    std::call_once(cache_->once, [this] {
      cache_->chain = StabilizerChain::build(degree_, gens_);
    });
    return cache_->chain;
  }

  /// A chain whose base starts with `prefix`, built from this group's strong
  /// generators and known order.
  StabilizerChain chain_with_prefix(const std::vector<Point>& prefix) const {
    for (Point p : prefix) check_point(p);
    const auto& c = chain();
    auto base = c.base();
    if (base.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), base.begin())) {
      return c;
    }
    return StabilizerChain::build(degree_, c.strong_generators(), prefix, c.order());
  }

  BigInt order() const { return chain().order(); }

  bool is_trivial() const { return gens_.empty(); }

  bool contains(const Permutation& p) const {
    if (p.degree() != degree_) {
      throw InvalidInput("degree mismatch: element of degree " + std::to_string(p.degree()) +
                         " tested against group of degree " + std::to_string(degree_));
    }
    return chain().contains(p);
  }

  /// Orbit of omega in BFS order (generators applied in the given order).
  std::vector<Point> orbit(Point omega) const {
    check_point(omega);
    std::vector<Point> out{omega};
    std::vector<bool> seen(degree_, false);
    seen[omega] = true;
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (const auto& g : gens_) {
        Point y = g[out[k]];
        if (!seen[y]) {
          seen[y] = true;
          out.push_back(y);
        }
      }
    }
    return out;
  }

  /// Orbit label per point; labels are numbered by least point.
  std::vector<std::size_t> orbit_ids() const {
    constexpr auto none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> id(degree_, none);
    std::size_t next = 0;
    for (Point p = 0; p < degree_; ++p) {
      if (id[p] != none) continue;
      for (Point q : orbit(p)) id[q] = next;
      ++next;
    }
    return id;
  }

  /// Orbits, each sorted, ordered by least point.
  std::vector<std::vector<Point>> orbits() const {
    auto id = orbit_ids();
    std::vector<std::vector<Point>> out;
    for (Point p = 0; p < degree_; ++p) {
      if (id[p] >= out.size()) out.resize(id[p] + 1);
      out[id[p]].push_back(p);
    }
    return out;
  }

  bool is_transitive() const { return orbit(0).size() == degree_; }

  PermGroup point_stabilizer(Point omega) const {
    check_point(omega);
    auto c = chain_with_prefix({omega});
    return from_chain_level(c, 1);
  }

  /// G_(L): elements fixing every point of `points`.
  PermGroup pointwise_stabilizer(std::vector<Point> points) const {
    for (Point p : points) check_point(p);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.empty()) return *this;
    auto c = chain_with_prefix(points);
    return from_chain_level(c, points.size());
  }

  /// Visits all elements; throws BudgetExceeded if the order exceeds `cap`.
  template <class F>
  void for_each_element(F&& f, std::uint64_t cap = Limits{}.enumeration_cap) const {
    if (order() > cap) {
      throw BudgetExceeded("group of order " + order().str() + " exceeds enumeration cap " +
                           std::to_string(cap));
    }
    chain().for_each_element([&](const Permutation& g) {
      f(g);
      return true;
    });
  }

  std::vector<Permutation> elements(std::uint64_t cap = Limits{}.enumeration_cap) const {
    std::vector<Permutation> out;
    for_each_element([&](const Permutation& g) { out.push_back(g); }, cap);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// True iff every generator of `h` lies in this group.
  bool contains_group(const PermGroup& h) const {
    if (h.degree() != degree_) return false;
    for (const auto& g : h.generators()) {
      if (!contains(g)) return false;
    }
    return true;
  }

  friend bool same_group(const PermGroup& a, const PermGroup& b) {
    return a.degree() == b.degree() && a.order() == b.order() && a.contains_group(b);
  }

  void check_point(Point p) const {
    if (p >= degree_) {
      throw InvalidInput("point " + std::to_string(p) + " out of range for degree " +
                         std::to_string(degree_));
    }
  }

  static PermGroup from_chain_level(const StabilizerChain& c, std::size_t level) {
    return PermGroup(c.degree(), c.stabilizer_generators(level));
  }

 private:
  struct Cache {
    std::once_flag once;
    StabilizerChain chain;
  };

  std::size_t degree_;
  std::vector<Permutation> gens_;
  std::string name_;
  std::shared_ptr<Cache> cache_;
};

/// Restricts a permutation to an invariant set, relabelling `points` (in the
/// given order) as 0..k-1.
inline Permutation restrict_to(const Permutation& g, const std::vector<Point>& points) {
  std::vector<std::int64_t> local(g.degree(), -1);
  for (std::size_t i = 0; i < points.size(); ++i) local[points[i]] = static_cast<std::int64_t>(i);
  std::vector<Point> img(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto y = local[g[points[i]]];
    if (y < 0) throw InvalidInput("set is not invariant under the permutation");
    img[i] = static_cast<Point>(y);
  }
  return Permutation(std::move(img));
}

/// Some g in G with I^g = J, or nullopt.
///
/// Tuples may repeat entries; the equality patterns of I and J must agree
/// and the search then runs on the deduplicated tuples. The returned element
/// is checked by direct application.
inline std::optional<Permutation> transporter(const PermGroup& G, const std::vector<Point>& I,
                                              const std::vector<Point>& J) {
  if (I.size() != J.size()) throw InvalidInput("tuple length mismatch in transporter");
  for (Point x : I) G.check_point(x);
  for (Point x : J) G.check_point(x);
  std::vector<Point> di, dj;
  for (std::size_t a = 0; a < I.size(); ++a) {
    for (std::size_t b = a + 1; b < I.size(); ++b) {
      if ((I[a] == I[b]) != (J[a] == J[b])) return std::nullopt;
    }
    if (std::find(di.begin(), di.end(), I[a]) == di.end()) {
      di.push_back(I[a]);
      dj.push_back(J[a]);
    }
  }
  auto c = G.chain_with_prefix(di);
  Permutation s(G.degree());
  Permutation s_inv(G.degree());
  for (std::size_t i = 0; i < di.size(); ++i) {
    const auto& lv = c.level(i);
    Point y = s_inv[dj[i]];
    if (!lv.in_orbit(y)) return std::nullopt;
    s = lv.rep(y) * s;
    s_inv = s_inv * lv.inv_rep(y);
  }
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (s[I[i]] != J[i]) throw std::logic_error("transporter verification failed");
  }
  return s;
}

/// Transporters for pairs (u,v) -> (u',v') with a fixed first point u,
/// reusing one chain and one set of Schreier trees for G_u.
class PairTransporter {
 public:
  PairTransporter(const PermGroup& G, Point u) : u_(u), chain_(G.chain_with_prefix({u})) {
    stab_gens_ = chain_.stabilizer_generators(1);
    const std::size_t n = G.degree();
    root_.assign(n, 0);
    to_point_.assign(n, Permutation());
    std::vector<bool> seen(n, false);
    for (Point r = 0; r < n; ++r) {
      if (seen[r]) continue;
      seen[r] = true;
      root_[r] = r;
      to_point_[r] = Permutation(n);
      std::vector<Point> queue{r};
      for (std::size_t k = 0; k < queue.size(); ++k) {
        Point x = queue[k];
        for (const auto& s : stab_gens_) {
          Point y = s[x];
          if (seen[y]) continue;
          seen[y] = true;
          root_[y] = r;
          to_point_[y] = to_point_[x] * s;
          queue.push_back(y);
        }
      }
    }
  }

  std::optional<Permutation> transport(Point v, Point u2, Point v2) const {
    if ((u_ == v) != (u2 == v2)) return std::nullopt;
    const auto& lv = chain_.level(0);
    if (!lv.in_orbit(u2)) return std::nullopt;
    const Permutation& x = lv.rep(u2);
    if (u_ == v) return x;
    // g = w x with w in G_u and v^w = v2^(x^-1).
    Point target = lv.inv_rep(u2)[v2];
    if (root_[v] != root_[target]) return std::nullopt;
    Permutation w = to_point_[v].inverse() * to_point_[target];
    Permutation g = w * x;
    if (g[u_] != u2 || g[v] != v2) throw std::logic_error("pair transporter verification failed");
    return g;
  }

 private:
  Point u_;
  StabilizerChain chain_;
  std::vector<Permutation> stab_gens_;
  std::vector<Point> root_;
  std::vector<Permutation> to_point_;
};

/// Generators of {g in G : prop(g)} for a subgroup property, by backtrack
/// over a chain whose first `depth` base points are branched on.
///
/// `allowed(level, base_point, image)` prunes partial images; `accept(g)`
/// is the full test at a leaf. Every element of the pointwise stabilizer of
/// the first `depth` base points must satisfy the property. Candidate images
/// are tried in ascending order, so the result is deterministic.
template <class Allowed, class Accept>
std::vector<Permutation> subgroup_search(const StabilizerChain& chain, std::size_t depth,
                                         Allowed&& allowed, Accept&& accept, NodeCounter& nodes) {
  const std::size_t n = chain.degree();
  std::vector<Permutation> found = chain.stabilizer_generators(depth);

  // Depth-first search below level l for an accepted element of the coset
  // G^(m+1) * s.
  std::function<std::optional<Permutation>(std::size_t, const Permutation&)> dive =
      [&](std::size_t m, const Permutation& s) -> std::optional<Permutation> {
    nodes.tick();
    if (m == depth) {
      if (accept(s)) return s;
      return std::nullopt;
    }
    const auto& lv = chain.level(m);
    std::vector<std::pair<Point, Point>> cand;  // (image, orbit point)
    for (Point y : lv.orbit) cand.emplace_back(s[y], y);
    std::sort(cand.begin(), cand.end());
    for (auto [z, y] : cand) {
      if (!allowed(m, lv.base, z)) continue;
      auto r = dive(m + 1, lv.rep(y) * s);
      if (r) return r;
    }
    return std::nullopt;
  };

  for (std::size_t l = depth; l-- > 0;) {
    const auto& lv = chain.level(l);
    std::vector<bool> in_k(n, false);
    auto grow = [&] {
      std::fill(in_k.begin(), in_k.end(), false);
      std::vector<Point> q{lv.base};
      in_k[lv.base] = true;
      for (std::size_t k = 0; k < q.size(); ++k) {
        for (const auto& g : found) {
          Point y = g[q[k]];
          if (!in_k[y]) {
            in_k[y] = true;
            q.push_back(y);
          }
        }
      }
    };
    grow();
    std::vector<Point> cand(lv.orbit.begin(), lv.orbit.end());
    std::sort(cand.begin(), cand.end());
    for (Point y : cand) {
      if (in_k[y]) continue;
      if (!allowed(l, lv.base, y)) continue;
      auto g = dive(l + 1, lv.rep(y));
      if (g) {
        found.push_back(*g);
        grow();
      }
    }
  }
  return found;
}

/// G_L = {g in G : L^g = L}.
inline PermGroup setwise_stabilizer(const PermGroup& G, std::vector<Point> points,
                                    const Limits& limits = {}) {
  for (Point p : points) G.check_point(p);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<bool> member(G.degree(), false);
  for (Point p : points) member[p] = true;
  bool invariant = true;
  for (const auto& g : G.generators()) {
    for (Point p : points) invariant = invariant && member[g[p]];
  }
  if (invariant) return G;
  if (points.empty() || points.size() == G.degree()) return G;
  // Branch on the smaller of the set and its complement.
  std::vector<Point> branch = points;
  if (points.size() * 2 > G.degree()) {
    branch.clear();
    for (Point p = 0; p < G.degree(); ++p) {
      if (!member[p]) branch.push_back(p);
    }
  }
  const bool want = member[branch.front()];
  auto chain = G.chain_with_prefix(branch);
  NodeCounter nodes(limits.search_nodes, "setwise stabilizer");
  auto gens = subgroup_search(
      chain, branch.size(),
      [&](std::size_t, Point, Point image) { return member[image] == want; },
      [&](const Permutation&) { return true; }, nodes);
  return PermGroup(G.degree(), std::move(gens));
}

/// Group generated by `a` and `extra` (same degree).
inline PermGroup join(const PermGroup& a, const std::vector<Permutation>& extra) {
  auto gens = a.generators();
  for (const auto& g : extra) gens.push_back(g);
  return PermGroup(a.degree(), std::move(gens));
}

}  // namespace binarity
