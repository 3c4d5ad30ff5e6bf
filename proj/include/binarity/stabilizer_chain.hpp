#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "binarity/permutation.hpp"

namespace binarity {

/// One level of a stabilizer chain: the basic orbit of `base` under the
/// strong generators fixing all earlier base points, with an explicit
/// transversal (`rep(x)` maps `base` to x).
struct ChainLevel {
  Point base = 0;
  std::vector<Permutation> generators;
  std::vector<Point> orbit;
  std::vector<std::int32_t> slot;  // point -> index into reps, -1 if outside the orbit
  std::vector<Permutation> reps;
  std::vector<Permutation> inv_reps;

  bool in_orbit(Point x) const { return slot[x] >= 0; }
  const Permutation& rep(Point x) const { return reps[static_cast<std::size_t>(slot[x])]; }
  const Permutation& inv_rep(Point x) const { return inv_reps[static_cast<std::size_t>(slot[x])]; }
};

/// Base and strong generating set built by deterministic Schreier-Sims.
///
/// Base points are the requested prefix followed by the least point moved by
/// each new sifted residue. The i-th level's generators generate the
/// pointwise stabilizer of the first i base points.
class StabilizerChain {
 public:
  StabilizerChain() = default;

  /// Builds a chain for <generators>. `prefix` points become the first base
  /// points in order (levels with trivial orbits are kept). When
  /// `known_order` is given the build stops as soon as the product of the
  /// basic orbit lengths reaches it.
  static StabilizerChain build(std::size_t degree, const std::vector<Permutation>& generators,
                               const std::vector<Point>& prefix = {},
                               const std::optional<BigInt>& known_order = std::nullopt) {
    StabilizerChain c;
    c.degree_ = degree;
    std::vector<Point> base;
    std::vector<bool> in_base(degree, false);
    for (Point b : prefix) {
      if (b >= degree) throw InvalidInput("base point out of range");
      if (in_base[b]) continue;
      in_base[b] = true;
      base.push_back(b);
    }
    std::vector<Permutation> gens;
    for (const auto& g : generators) {
      if (g.degree() != degree) throw InvalidInput("generator degree mismatch");
      if (g.is_identity()) continue;
      if (std::find(gens.begin(), gens.end(), g) != gens.end()) continue;
      gens.push_back(g);
    }
    for (const auto& g : gens) {
      bool moves_base = false;
      for (Point b : base) moves_base = moves_base || g[b] != b;
      if (!moves_base) {
        Point m = static_cast<Point>(g.first_moved());
        base.push_back(m);
        in_base[m] = true;
      }
    }
    for (Point b : base) {
      ChainLevel lv;
      lv.base = b;
      c.levels_.push_back(std::move(lv));
    }
    for (const auto& g : gens) {
      for (std::size_t i = 0; i < c.levels_.size(); ++i) {
        c.levels_[i].generators.push_back(g);
        if (g[c.levels_[i].base] != c.levels_[i].base) break;
      }
    }
    for (auto& lv : c.levels_) c.recompute_orbit(lv);
    c.run(known_order);
    c.collect_strong_generators();
    return c;
  }

  std::size_t degree() const { return degree_; }
  std::size_t length() const { return levels_.size(); }
  const ChainLevel& level(std::size_t i) const { return levels_[i]; }
  const std::vector<ChainLevel>& levels() const { return levels_; }

  std::vector<Point> base() const {
    std::vector<Point> b;
    for (const auto& lv : levels_) b.push_back(lv.base);
    return b;
  }

  const std::vector<Permutation>& strong_generators() const { return strong_; }

  /// Generators of the pointwise stabilizer of the first k base points.
  std::vector<Permutation> stabilizer_generators(std::size_t k) const {
    if (k < levels_.size()) return levels_[k].generators;
    return {};
  }

  BigInt order() const {
    BigInt r = 1;
    for (const auto& lv : levels_) r *= lv.orbit.size();
    return r;
  }

  /// Sifts g starting at level `from`; returns the residue and the level at
  /// which sifting stopped (length() if it went all the way through).
  std::pair<Permutation, std::size_t> sift(Permutation g, std::size_t from = 0) const {
    for (std::size_t i = from; i < levels_.size(); ++i) {
      const auto& lv = levels_[i];
      Point x = g[lv.base];
      if (!lv.in_orbit(x)) return {std::move(g), i};
      if (x != lv.base) g = g * lv.inv_rep(x);
    }
    return {std::move(g), levels_.size()};
  }

  bool contains(const Permutation& g) const {
    if (g.degree() != degree_) throw InvalidInput("degree mismatch in membership test");
    auto [r, lvl] = sift(g);
    return lvl == levels_.size() && r.is_identity();
  }

  /// Visits every group element once (as the product of one transversal
  /// element per level). The callback returns false to stop early.
  template <class F>
  void for_each_element(F&& f) const {
    Permutation id(degree_);
    if (levels_.empty()) {
      f(id);
      return;
    }
    bool go = true;
    enumerate(levels_.size() - 1, id, f, go);
  }

 private:
  template <class F>
  void enumerate(std::size_t i, const Permutation& prefix, F& f, bool& go) const {
    const auto& lv = levels_[i];
    for (Point x : lv.orbit) {
      if (!go) return;
      Permutation next = prefix * lv.rep(x);
      if (i == 0) {
        go = f(next);
      } else {
        enumerate(i - 1, next, f, go);
      }
    }
  }

  void recompute_orbit(ChainLevel& lv) const {
    lv.slot.assign(degree_, -1);
    lv.orbit.clear();
    lv.reps.clear();
    lv.inv_reps.clear();
    lv.orbit.push_back(lv.base);
    lv.slot[lv.base] = 0;
    lv.reps.emplace_back(degree_);
    lv.inv_reps.emplace_back(degree_);
    extend_orbit(lv, 0);
  }

  // BFS from orbit position `start` onwards using all level generators.
  void extend_orbit(ChainLevel& lv, std::size_t start) const {
    for (std::size_t k = start; k < lv.orbit.size(); ++k) {
      Point x = lv.orbit[k];
      for (const auto& s : lv.generators) {
        Point y = s[x];
        if (lv.slot[y] >= 0) continue;
        lv.slot[y] = static_cast<std::int32_t>(lv.reps.size());
        Permutation r = lv.reps[static_cast<std::size_t>(lv.slot[x])] * s;
        lv.inv_reps.push_back(r.inverse());
        lv.reps.push_back(std::move(r));
        lv.orbit.push_back(y);
      }
    }
  }

  void add_generator(ChainLevel& lv, const Permutation& g) const {
    lv.generators.push_back(g);
    // Existing orbit points may now reach new points.
    std::size_t before = lv.orbit.size();
    for (std::size_t k = 0; k < before; ++k) {
      Point x = lv.orbit[k];
      Point y = g[x];
      if (lv.slot[y] >= 0) continue;
      lv.slot[y] = static_cast<std::int32_t>(lv.reps.size());
      Permutation r = lv.reps[static_cast<std::size_t>(lv.slot[x])] * g;
      lv.inv_reps.push_back(r.inverse());
      lv.reps.push_back(std::move(r));
      lv.orbit.push_back(y);
    }
    extend_orbit(lv, before);
  }

  void run(const std::optional<BigInt>& known_order) {
    if (known_order && order() == *known_order) return;
    std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels_.size()) - 1;
    while (i >= 0) {
      const auto li = static_cast<std::size_t>(i);
      bool restarted = false;
      for (std::size_t k = 0; !restarted && k < levels_[li].orbit.size(); ++k) {
        for (std::size_t s = 0; s < levels_[li].generators.size(); ++s) {
          const auto& cur = levels_[li];
          Point x = cur.orbit[k];
          Point y = cur.generators[s][x];
          Permutation sch = cur.rep(x) * cur.generators[s] * cur.inv_rep(y);
          if (sch.is_identity()) continue;
          auto [h, j] = sift(std::move(sch), li + 1);
          if (j == levels_.size() && h.is_identity()) continue;
          if (j == levels_.size()) {
            ChainLevel nl;
            nl.base = static_cast<Point>(h.first_moved());
            levels_.push_back(std::move(nl));
            recompute_orbit(levels_.back());
          }
          for (std::size_t l = li + 1; l <= j; ++l) add_generator(levels_[l], h);
          if (known_order && order() == *known_order) return;
          i = static_cast<std::ptrdiff_t>(j);
          restarted = true;
          break;
        }
      }
      if (!restarted) --i;
    }
  }

  void collect_strong_generators() {
    strong_.clear();
    for (const auto& lv : levels_) {
      for (const auto& g : lv.generators) {
        if (std::find(strong_.begin(), strong_.end(), g) == strong_.end()) strong_.push_back(g);
      }
    }
  }

  std::size_t degree_ = 0;
  std::vector<ChainLevel> levels_;
  std::vector<Permutation> strong_;
};

}  // namespace binarity
