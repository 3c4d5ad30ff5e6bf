#pragma once

#include <bit>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "binarity/closure.hpp"

namespace binarity {

// ---------------------------------------------------------------------------
// Orbit counts on injective tuples

enum class CountMethod { CharacterSum, DirectOrbit };

inline const char* to_string(CountMethod m) {
  return m == CountMethod::CharacterSum ? "character-sum" : "direct-orbit";
}

struct OrbitCount {
  std::size_t ell = 0;
  BigInt value = 0;
  CountMethod method = CountMethod::CharacterSum;
};

/// Histogram of fixed-point counts over all group elements.
inline std::vector<std::uint64_t> fix_histogram(const PermGroup& G, const Limits& limits = {}) {
  std::vector<std::uint64_t> hist(G.degree() + 1, 0);
  G.for_each_element([&](const Permutation& g) { ++hist[g.fixed_point_count()]; },
                     limits.enumeration_cap);
  return hist;
}

/// r_ell from a fixed-point histogram: (1/|G|) sum_g f(f-1)...(f-ell+1).
inline BigInt r_ell_from_histogram(const std::vector<std::uint64_t>& hist, const BigInt& order,
                                   std::size_t ell) {
  BigInt total = 0;
  for (std::size_t f = 0; f < hist.size(); ++f) {
    if (hist[f] == 0 || f < ell) continue;
    BigInt falling = 1;
    for (std::size_t i = 0; i < ell; ++i) falling *= (f - i);
    total += falling * hist[f];
  }
  if (total % order != 0) throw std::logic_error("orbit count is not an integer");
  return total / order;
}

namespace detail {

inline BigInt count_tuple_orbits(const PermGroup& H, std::vector<Point>& fixed, std::size_t remaining,
                                 NodeCounter& nodes) {
  if (remaining == 0) return 1;
  nodes.tick();
  const std::size_t free_points = H.degree() - fixed.size();
  if (free_points < remaining) return 0;
  if (H.is_trivial()) {
    BigInt r = 1;
    for (std::size_t i = 0; i < remaining; ++i) r *= (free_points - i);
    return r;
  }
  std::vector<bool> excluded(H.degree(), false);
  for (Point x : fixed) excluded[x] = true;
  BigInt total = 0;
  for (const auto& orb : H.orbits()) {
    if (excluded[orb.front()]) continue;
    Point rep = orb.front();
    fixed.push_back(rep);
    total += count_tuple_orbits(H.point_stabilizer(rep), fixed, remaining - 1, nodes);
    fixed.pop_back();
  }
  return total;
}

}  // namespace detail

/// Number of orbits of G on ell-tuples with distinct entries.
inline OrbitCount r_ell(const PermGroup& G, std::size_t ell, CountMethod method, const Limits& limits = {}) {
  if (ell == 0) throw InvalidInput("ell must be at least 1");
  OrbitCount oc{ell, 0, method};
  if (ell > G.degree()) return oc;
  if (method == CountMethod::CharacterSum) {
    oc.value = r_ell_from_histogram(fix_histogram(G, limits), G.order(), ell);
  } else {
    NodeCounter nodes(limits.tuple_budget, "orbit count on tuples");
    std::vector<Point> fixed;
    oc.value = detail::count_tuple_orbits(G, fixed, ell, nodes);
  }
  return oc;
}

inline OrbitCount r_ell(const ActionSpace& A, std::size_t ell, CountMethod method, const Limits& limits = {}) {
  return r_ell(A.group(), ell, method, limits);
}

/// CharacterSum when the group can be enumerated, DirectOrbit otherwise.
inline CountMethod preferred_method(const PermGroup& G, const Limits& limits) {
  return G.order() <= limits.enumeration_cap ? CountMethod::CharacterSum : CountMethod::DirectOrbit;
}

// ---------------------------------------------------------------------------
// Test outcomes and certificates

enum class WitnessKind { Plain, Strong };

/// A non-binary witness (I, J) with a transporter for every index pair.
struct WitnessCertificate {
  PermGroup group;
  std::vector<Point> I;
  std::vector<Point> J;
  std::map<std::pair<std::size_t, std::size_t>, Permutation> pair_transporters;
  WitnessKind kind = WitnessKind::Plain;
  std::string provenance;
};

struct VerifyResult {
  bool ok = false;
  std::string reason;
};

/// Re-checks a certificate from scratch: each stored pair transporter is a
/// group element with the claimed effect, no element maps I to J, and a
/// strong certificate lists every point exactly once.
inline VerifyResult verify_witness(const WitnessCertificate& c) {
  const auto& G = c.group;
  const std::size_t n = G.degree();
  auto reject = [](std::string why) { return VerifyResult{false, std::move(why)}; };
  if (c.I.size() != c.J.size()) return reject("tuple lengths differ");
  if (c.I.size() < 2) return reject("tuples shorter than 2");
  for (std::size_t k = 0; k < c.I.size(); ++k) {
    if (c.I[k] >= n || c.J[k] >= n) return reject("point out of range at index " + std::to_string(k));
  }
  for (std::size_t u = 0; u < c.I.size(); ++u) {
    for (std::size_t v = u + 1; v < c.I.size(); ++v) {
      auto it = c.pair_transporters.find({u, v});
      const std::string tag = "pair (" + std::to_string(u) + "," + std::to_string(v) + ")";
      if (it == c.pair_transporters.end()) return reject(tag + " unproven");
      const auto& g = it->second;
      if (g.degree() != n) return reject(tag + " transporter has wrong degree");
      if (g[c.I[u]] != c.J[u] || g[c.I[v]] != c.J[v]) return reject(tag + " transporter has wrong images");
      if (!G.contains(g)) return reject(tag + " transporter is not in the group");
    }
  }
  if (c.kind == WitnessKind::Strong) {
    if (c.I.size() != n) return reject("strong certificate does not list every point");
    std::vector<bool> seen(n, false);
    for (Point x : c.I) {
      if (seen[x]) return reject("strong certificate repeats a point");
      seen[x] = true;
    }
  }
  if (transporter(G, c.I, c.J)) return reject("global transporter exists");
  return {true, {}};
}

/// Fills pair transporters for (I, J) by search; returns false if some pair
/// has none.
inline bool fill_pair_transporters(WitnessCertificate& c) {
  c.pair_transporters.clear();
  const auto& G = c.group;
  std::map<Point, PairTransporter> by_first;
  for (std::size_t u = 0; u < c.I.size(); ++u) {
    auto it = by_first.find(c.I[u]);
    if (it == by_first.end()) it = by_first.emplace(c.I[u], PairTransporter(G, c.I[u])).first;
    for (std::size_t v = u + 1; v < c.I.size(); ++v) {
      auto g = it->second.transport(c.I[v], c.J[u], c.J[v]);
      if (!g) return false;
      c.pair_transporters.emplace(std::make_pair(u, v), std::move(*g));
    }
  }
  return true;
}

/// Evidence from the orbit-count bound: r_ell > r_2^(ell(ell-1)/2).
struct CountEvidence {
  std::size_t ell = 0;
  BigInt r_ell = 0;
  BigInt r_2 = 0;
  BigInt bound = 0;
  CountMethod method = CountMethod::CharacterSum;
};

enum class Status { NonBinary, Inconclusive, Skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::NonBinary: return "NonBinary";
    case Status::Inconclusive: return "Inconclusive";
    case Status::Skipped: return "Skipped";
  }
  return "?";
}

struct TestOutcome {
  int test = 0;
  Status status = Status::Inconclusive;
  std::string detail;
  std::optional<WitnessCertificate> certificate;
  std::optional<CountEvidence> evidence;
  bool budget_hit = false;
  /// Test 3 only: every 2-subtuple complete pair of triples was conjugate.
  bool pairs_determine_triples = false;
  std::vector<OrbitCount> counts;
};

// ---------------------------------------------------------------------------
// Test 1

inline TestOutcome test1_character_bound(const PermGroup& G, std::size_t ell_max, const Limits& limits = {}) {
  TestOutcome out;
  out.test = 1;
  if (!G.is_transitive()) {
    out.status = Status::Skipped;
    out.detail = "group is intransitive";
    return out;
  }
  try {
    const CountMethod method = preferred_method(G, limits);
    std::vector<std::uint64_t> hist;
    if (method == CountMethod::CharacterSum) hist = fix_histogram(G, limits);
    auto count = [&](std::size_t ell) {
      if (method == CountMethod::CharacterSum) {
        OrbitCount oc{ell, ell > G.degree() ? BigInt(0) : r_ell_from_histogram(hist, G.order(), ell), method};
        return oc;
      }
      return r_ell(G, ell, method, limits);
    };
    const auto r2 = count(2);
    out.counts.push_back(r2);
    for (std::size_t ell = 3; ell <= ell_max && ell <= G.degree(); ++ell) {
      auto rl = count(ell);
      out.counts.push_back(rl);
      BigInt bound = boost::multiprecision::pow(r2.value, static_cast<unsigned>(ell * (ell - 1) / 2));
      if (rl.value > bound) {
        out.status = Status::NonBinary;
        out.evidence = CountEvidence{ell, rl.value, r2.value, bound, method};
        out.detail = "r_" + std::to_string(ell) + " = " + rl.value.str() + " > " + bound.str() +
                     " = r_2^" + std::to_string(ell * (ell - 1) / 2);
        return out;
      }
    }
    out.status = Status::Inconclusive;
    out.detail = "r_ell within bound for ell <= " + std::to_string(std::min(ell_max, G.degree()));
  } catch (const BudgetExceeded& e) {
    out.status = Status::Skipped;
    out.budget_hit = true;
    out.detail = e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subtuple completeness

struct SubtupleCheck {
  bool complete = false;
  std::map<std::vector<std::size_t>, Permutation> transporters;
  std::vector<std::size_t> failing;  // index subset with no transporter
};

inline SubtupleCheck is_subtuple_complete(const PermGroup& G, const std::vector<Point>& I,
                                          const std::vector<Point>& J, std::size_t r) {
  if (I.size() != J.size()) throw InvalidInput("tuple length mismatch");
  if (r == 0 || r > I.size()) throw InvalidInput("need 1 <= r <= tuple length");
  SubtupleCheck res;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    std::vector<Point> si, sj;
    for (auto k : idx) {
      si.push_back(I[k]);
      sj.push_back(J[k]);
    }
    auto g = transporter(G, si, sj);
    if (!g) {
      res.failing = idx;
      return res;
    }
    res.transporters.emplace(idx, std::move(*g));
    // Next r-subset in lexicographic order.
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == I.size() - r + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t k = i; k < r; ++k) idx[k] = idx[k - 1] + 1;
  }
  res.complete = true;
  return res;
}

// ---------------------------------------------------------------------------
// Test 3

/// Scans triples (alpha, beta, gamma) against (alpha, beta, gamma') with
/// gamma' in gamma^{G_alpha} ∩ gamma^{G_beta}; such triples are always
/// 2-subtuple complete, and they are conjugate iff gamma' lies in
/// gamma^{G_alpha,beta}. One alpha is taken from each orbit of G.
inline TestOutcome test3_scan(const PermGroup& G, const Limits& limits = {}) {
  TestOutcome out;
  out.test = 3;
  const std::size_t n = G.degree();
  if (n > limits.degree_cap) {
    out.status = Status::Skipped;
    out.budget_hit = true;
    out.detail = "degree exceeds cap";
    return out;
  }
  try {
    NodeCounter nodes(limits.search_nodes, "3-tuple scan");
    for (const auto& gorb : G.orbits()) {
      const Point alpha = gorb.front();
      const PermGroup Ga = G.point_stabilizer(alpha);
      for (const auto& borb : Ga.orbits()) {
        const Point beta = borb.front();
        if (beta == alpha) continue;
        const PermGroup Gb = G.point_stabilizer(beta);
        const PermGroup Gab = Ga.point_stabilizer(beta);
        const auto ids_ab = Gab.orbit_ids();
        for (const auto& corb : Gab.orbits()) {
          const Point gamma = corb.front();
          if (gamma == alpha || gamma == beta) continue;
          nodes.tick();
          std::vector<bool> in_a(n, false);
          for (Point x : Ga.orbit(gamma)) in_a[x] = true;
          auto ob = Gb.orbit(gamma);
          std::sort(ob.begin(), ob.end());
          for (Point gp : ob) {
            if (!in_a[gp] || ids_ab[gp] == ids_ab[gamma]) continue;
            WitnessCertificate c{G, {alpha, beta, gamma}, {alpha, beta, gp}, {}, WitnessKind::Plain, "test 3"};
            if (!fill_pair_transporters(c)) throw std::logic_error("test 3 pair transporter missing");
            out.status = Status::NonBinary;
            out.detail = "triples (" + std::to_string(alpha) + "," + std::to_string(beta) + "," +
                         std::to_string(gamma) + ") and (" + std::to_string(alpha) + "," +
                         std::to_string(beta) + "," + std::to_string(gp) + ") are 2-subtuple complete but not conjugate";
            out.certificate = std::move(c);
            return out;
          }
        }
      }
    }
    out.status = Status::Inconclusive;
    out.pairs_determine_triples = true;
    out.detail = "2-subtuple completeness implies 3-subtuple completeness";
  } catch (const BudgetExceeded& e) {
    out.status = Status::Skipped;
    out.budget_hit = true;
    out.detail = e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Test 2

/// Strong certificate I = (0, ..., n-1), J = I^sigma for sigma in the
/// 2-closure but not in G.
inline std::optional<WitnessCertificate> witness_from_sigma(const PermGroup& G, const Permutation& sigma) {
  const std::size_t n = G.degree();
  WitnessCertificate c{G, {}, {}, {}, WitnessKind::Strong, "test 2"};
  for (Point x = 0; x < n; ++x) {
    c.I.push_back(x);
    c.J.push_back(sigma[x]);
  }
  if (!fill_pair_transporters(c)) return std::nullopt;
  return c;
}

inline TestOutcome test2_closure(const PermGroup& G, const Limits& limits = {}) {
  TestOutcome out;
  out.test = 2;
  try {
    auto cr = two_closure(G, limits);
    if (cr.is_two_closed) {
      out.status = Status::Inconclusive;
      out.detail = "group is 2-closed";
      return out;
    }
    out.status = Status::NonBinary;
    out.detail = std::string("2-closure has order ") + cr.order.str() + (cr.symbolic_full ? " (full symmetric group)" : "") +
                 "; witness element " + to_cycle_string(*cr.witness);
    if (G.degree() < 2) return out;
    auto c = witness_from_sigma(G, *cr.witness);
    if (!c) throw std::logic_error("closure element fails a pair transporter");
    out.certificate = std::move(c);
  } catch (const BudgetExceeded& e) {
    out.status = Status::Skipped;
    out.budget_hit = true;
    out.detail = e.what();
  }
  return out;
}

/// The strong certificate from the closure, if G is not 2-closed.
inline std::optional<WitnessCertificate> witness_from_closure(const PermGroup& G, const Limits& limits = {}) {
  auto t = test2_closure(G, limits);
  if (t.status == Status::Skipped) throw BudgetExceeded(t.detail);
  return t.certificate;
}

// ---------------------------------------------------------------------------
// Exact arity by exhaustive tuple orbits

struct ArityResult {
  bool exact = false;
  std::size_t value = 2;  // exact arity, or a lower bound when !exact
  std::size_t lengths_checked = 0;
  std::string note;
};

namespace detail {

/// Ranks of injective k-tuples over n points (Lehmer code, mixed radix).
class InjectiveTupleIndex {
 public:
  InjectiveTupleIndex(std::size_t n, std::size_t k) : n_(n), k_(k) {
    size_ = 1;
    for (std::size_t i = 0; i < k; ++i) size_ *= (n - i);
  }
  std::uint64_t size() const { return size_; }

  std::uint64_t rank(const Point* t) const {
    std::uint64_t r = 0;
    std::uint64_t used = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      std::uint64_t below = static_cast<std::uint64_t>(std::popcount(used & ((std::uint64_t{1} << t[i]) - 1)));
      r = r * (n_ - i) + (t[i] - below);
      used |= std::uint64_t{1} << t[i];
    }
    return r;
  }

  void unrank(std::uint64_t r, Point* t) const {
    std::vector<std::uint64_t> digit(k_);
    for (std::size_t i = k_; i-- > 0;) {
      digit[i] = r % (n_ - i);
      r /= (n_ - i);
    }
    std::uint64_t used = 0;
    for (std::size_t i = 0; i < k_; ++i) {
      std::uint64_t d = digit[i];
      Point x = 0;
      for (;; ++x) {
        if (used & (std::uint64_t{1} << x)) continue;
        if (d == 0) break;
        --d;
      }
      t[i] = x;
      used |= std::uint64_t{1} << x;
    }
  }

 private:
  std::size_t n_, k_;
  std::uint64_t size_;
};

}  // namespace detail

/// Brute-force arity: labels the G-orbits of injective k-tuples for every k,
/// then finds the least r >= 2 such that for every length m >= r the orbits
/// of the r-subtuples determine the orbit of the m-tuple. Tuples with
/// repeated entries reduce to injective ones, so lengths above the degree
/// add nothing. Stops with a lower bound when the tuple budget runs out.
inline ArityResult exact_arity(const PermGroup& G, std::uint64_t tuple_budget = Limits{}.tuple_budget) {
  const std::size_t n = G.degree();
  if (n > 20) throw InvalidInput("exact arity supports degree at most 20");
  ArityResult res;
  // orbit[k][rank] for k = 1..K
  std::vector<std::vector<std::uint32_t>> orbit(n + 1);
  std::vector<std::uint32_t> norbits(n + 1, 0);
  std::uint64_t spent = 0;
  std::size_t K = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    detail::InjectiveTupleIndex idx(n, k);
    if (spent + idx.size() > tuple_budget) break;
    spent += idx.size();
    constexpr auto none = static_cast<std::uint32_t>(-1);
    auto& lab = orbit[k];
    lab.assign(idx.size(), none);
    std::vector<Point> t(k), u(k);
    std::vector<std::uint64_t> queue;
    for (std::uint64_t r = 0; r < idx.size(); ++r) {
      if (lab[r] != none) continue;
      const std::uint32_t id = norbits[k]++;
      lab[r] = id;
      queue.assign(1, r);
      for (std::size_t q = 0; q < queue.size(); ++q) {
        idx.unrank(queue[q], t.data());
        for (const auto& g : G.generators()) {
          for (std::size_t i = 0; i < k; ++i) u[i] = g[t[i]];
          auto s = idx.rank(u.data());
          if (lab[s] == none) {
            lab[s] = id;
            queue.push_back(s);
          }
        }
      }
    }
    K = k;
  }
  res.lengths_checked = K;

  // For each r, does the r-profile determine the m-orbit for all m in [r, K]?
  auto determines = [&](std::size_t r, std::size_t m) {
    detail::InjectiveTupleIndex im(n, m), ir(n, r);
    std::map<std::vector<std::uint32_t>, std::uint32_t> seen;
    std::vector<bool> done(norbits[m], false);
    std::vector<Point> t(m), sub(r);
    std::vector<std::size_t> pick(r);
    for (std::uint64_t x = 0; x < im.size(); ++x) {
      const auto o = orbit[m][x];
      if (done[o]) continue;
      done[o] = true;
      im.unrank(x, t.data());
      std::vector<std::uint32_t> profile;
      std::iota(pick.begin(), pick.end(), std::size_t{0});
      while (true) {
        for (std::size_t i = 0; i < r; ++i) sub[i] = t[pick[i]];
        profile.push_back(orbit[r][ir.rank(sub.data())]);
        std::size_t i = r;
        while (i > 0 && pick[i - 1] == m - r + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
      }
      auto [it, fresh] = seen.emplace(std::move(profile), o);
      if (!fresh && it->second != o) return false;
    }
    return true;
  };

  for (std::size_t r = 2;; ++r) {
    bool ok = true;
    for (std::size_t m = r; m <= K && ok; ++m) ok = determines(r, m);
    if (!ok) continue;
    res.value = r;
    res.exact = K == n;
    if (!res.exact) res.note = "tuple budget reached at length " + std::to_string(K + 1);
    return res;
  }
}

}  // namespace binarity
