#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "binarity/perm_group.hpp"

namespace binarity {

namespace detail {

struct TupleHash {
  std::size_t operator()(const std::vector<Point>& v) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (Point x : v) h = (h ^ x) * 0x100000001b3ULL;
    return h;
  }
};

/// Canonical key of the right coset H r: the lexicographically least tuple
/// among base^(h r), h in H. `hchain` must have the parent's base as prefix,
/// so distinct cosets have distinct keys.
inline std::vector<Point> coset_key(const StabilizerChain& hchain, std::size_t parent_base_len,
                                    Permutation r) {
  std::vector<Point> key;
  key.reserve(parent_base_len);
  for (std::size_t i = 0; i < parent_base_len; ++i) {
    const auto& lv = hchain.level(i);
    Point best_y = lv.base;
    Point best = r[lv.base];
    for (Point y : lv.orbit) {
      if (r[y] < best) {
        best = r[y];
        best_y = y;
      }
    }
    key.push_back(best);
    if (best_y != lv.base) r = lv.rep(best_y) * r;
  }
  return key;
}

}  // namespace detail

/// A permutation action realized on {0, ..., degree-1}.
///
/// Explicit actions wrap a permutation group directly. Coset actions record
/// the parent group G, the subgroup H, and a transversal: point i is the
/// right coset H * transversal[i], point 0 is H itself, and numbering
/// follows a breadth-first closure from H using G's generators in order.
/// Induced actions record which original points the local points stand for.
class ActionSpace {
 public:
  enum class Kind { Explicit, Cosets };

  static ActionSpace explicit_action(PermGroup g) {
    ActionSpace a;
    a.kind_ = Kind::Explicit;
    a.realized_ = std::move(g);
    return a;
  }

  /// The action of G on the right cosets of H.
  static ActionSpace cosets(const PermGroup& G, const PermGroup& H, const Limits& limits = {}) {
    if (G.degree() != H.degree()) throw InvalidInput("subgroup degree differs from group degree");
    for (const auto& h : H.generators()) {
      if (!G.contains(h)) throw InvalidInput("subgroup generator " + to_cycle_string(h) + " not in group");
    }
    BigInt index = G.order() / H.order();
    if (index > limits.degree_cap) {
      throw BudgetExceeded("coset action of index " + index.str() + " exceeds degree cap " +
                           std::to_string(limits.degree_cap));
    }
    ActionSpace a;
    a.kind_ = Kind::Cosets;
    a.parent_ = G;
    a.subgroup_ = H;
    a.index_ = index;
    const auto gbase = G.chain().base();
    a.hchain_ = std::make_shared<StabilizerChain>(H.chain_with_prefix(gbase));
    a.parent_base_len_ = gbase.size();

    std::unordered_map<std::vector<Point>, Point, detail::TupleHash> lookup;
    const auto idx = static_cast<std::size_t>(index);
    a.transversal_.reserve(idx);
    a.transversal_.emplace_back(G.degree());
    lookup.emplace(detail::coset_key(*a.hchain_, a.parent_base_len_, a.transversal_[0]), 0);
    std::vector<std::vector<Point>> images(G.generators().size());
    for (std::size_t i = 0; i < a.transversal_.size(); ++i) {
      for (std::size_t s = 0; s < G.generators().size(); ++s) {
        Permutation r = a.transversal_[i] * G.generators()[s];
        auto key = detail::coset_key(*a.hchain_, a.parent_base_len_, r);
        auto it = lookup.find(key);
        Point target;
        if (it == lookup.end()) {
          target = static_cast<Point>(a.transversal_.size());
          lookup.emplace(std::move(key), target);
          a.transversal_.push_back(std::move(r));
        } else {
          target = it->second;
        }
        images[s].push_back(target);
      }
    }
    if (a.transversal_.size() != idx) throw std::logic_error("coset enumeration size mismatch");
    a.lookup_ = std::make_shared<decltype(lookup)>(std::move(lookup));
    std::vector<Permutation> gens;
    for (auto& img : images) gens.emplace_back(std::move(img));
    a.realized_ = PermGroup(idx, std::move(gens));
    return a;
  }

  /// G^L: the group induced on L by its setwise stabilizer, with L relabelled
  /// ascending as 0..|L|-1.
  static ActionSpace induced(const PermGroup& G, std::vector<Point> points, const Limits& limits = {}) {
    if (points.empty()) throw InvalidInput("induced action needs a nonempty set");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    auto stab = setwise_stabilizer(G, points, limits);
    std::vector<Permutation> gens;
    for (const auto& g : stab.generators()) gens.push_back(restrict_to(g, points));
    ActionSpace a;
    a.kind_ = Kind::Explicit;
    a.realized_ = PermGroup(points.size(), std::move(gens));
    a.support_ = std::move(points);
    a.setwise_ = std::move(stab);
    return a;
  }

  Kind kind() const { return kind_; }
  const PermGroup& group() const { return realized_; }
  std::size_t degree() const { return realized_.degree(); }

  const std::optional<PermGroup>& parent() const { return parent_; }
  const std::optional<PermGroup>& subgroup() const { return subgroup_; }
  const std::vector<Permutation>& transversal() const { return transversal_; }
  BigInt index() const { return kind_ == Kind::Cosets ? index_ : BigInt(degree()); }

  /// Original points for an induced action (empty otherwise).
  const std::vector<Point>& support() const { return support_; }
  /// The setwise stabilizer an induced action was built from.
  const std::optional<PermGroup>& setwise_stabilizer_group() const { return setwise_; }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < degree(); ++i) {
      if (kind_ == Kind::Cosets) {
        out.push_back("H*" + to_cycle_string(transversal_[i]));
      } else if (!support_.empty()) {
        out.push_back(std::to_string(support_[i]));
      } else {
        out.push_back(std::to_string(i));
      }
    }
    return out;
  }

  /// Index of the coset H r.
  Point coset_of(const Permutation& r) const {
    if (kind_ != Kind::Cosets) throw InvalidInput("not a coset action");
    auto key = detail::coset_key(*hchain_, parent_base_len_, r);
    auto it = lookup_->find(key);
    if (it == lookup_->end()) throw std::logic_error("coset lookup failed");
    return it->second;
  }

  /// Image of a parent element in the realized action. For explicit actions
  /// the element must already have the realized degree.
  Permutation realize(const Permutation& x) const {
    if (kind_ == Kind::Explicit) {
      if (x.degree() != degree()) throw InvalidInput("element degree does not match the action");
      return x;
    }
    if (x.degree() != parent_->degree()) throw InvalidInput("element degree does not match the parent group");
    if (!parent_->contains(x)) throw InvalidInput("element " + to_cycle_string(x) + " is not in the parent group");
    std::vector<Point> img(degree());
    for (std::size_t i = 0; i < degree(); ++i) img[i] = coset_of(transversal_[i] * x);
    return Permutation(std::move(img));
  }

  /// Accepts either a realized permutation or (for coset actions) a parent
  /// element, and returns the realized permutation. When both degrees agree
  /// the argument is read as a parent element.
  Permutation to_realized(const Permutation& x) const {
    if (kind_ == Kind::Cosets && x.degree() == parent_->degree()) return realize(x);
    if (x.degree() == degree()) return x;
    return realize(x);
  }

 private:
  Kind kind_ = Kind::Explicit;
  PermGroup realized_;
  std::optional<PermGroup> parent_;
  std::optional<PermGroup> subgroup_;
  std::optional<PermGroup> setwise_;
  std::vector<Permutation> transversal_;
  std::vector<Point> support_;
  BigInt index_ = 1;
  std::shared_ptr<StabilizerChain> hchain_;
  std::size_t parent_base_len_ = 0;
  std::shared_ptr<std::unordered_map<std::vector<Point>, Point, detail::TupleHash>> lookup_;
};

inline ActionSpace coset_action(const PermGroup& G, const PermGroup& H, const Limits& limits = {}) {
  return ActionSpace::cosets(G, H, limits);
}

inline ActionSpace induced_action(const PermGroup& G, const std::vector<Point>& points,
                                  const Limits& limits = {}) {
  return ActionSpace::induced(G, points, limits);
}

}  // namespace binarity
