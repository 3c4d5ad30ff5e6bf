#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "binarity/binarity.hpp"

namespace binarity {

// ---------------------------------------------------------------------------
// Fixed points

enum class FixSource { DirectCount, ClassFormula };

struct FixData {
  std::optional<Permutation> element;
  std::string label;
  BigInt fix_count = 0;
  FixSource source = FixSource::DirectCount;
};

/// Counts the points fixed by g; g may be a realized element or, for a coset
/// action, an element of the parent group.
inline FixData fix_count_direct(const ActionSpace& A, const Permutation& g) {
  Permutation r = A.to_realized(g);
  if (!A.group().contains(r)) throw InvalidInput("element " + to_cycle_string(r) + " is not in the group");
  FixData d;
  d.element = r;
  d.fix_count = r.fixed_point_count();
  d.source = FixSource::DirectCount;
  return d;
}

/// Exact quotient a / b; throws InvalidInput when b does not divide a.
inline BigInt exact_quotient(const BigInt& a, const BigInt& b) {
  if (b <= 0 || a < 0) throw InvalidInput("formula inputs must be positive");
  if (a % b != 0) throw InvalidInput("non-integral result: " + a.str() + " / " + b.str());
  return a / b;
}

/// |Fix(g)| = |Ω| * |M ∩ g^G| / |g^G| for a transitive action with point
/// stabilizer M.
inline BigInt fix_count_formula(const BigInt& omega_size, const BigInt& class_in_M, const BigInt& class_in_G) {
  if (omega_size <= 0 || class_in_M < 0 || class_in_G <= 0) throw InvalidInput("formula inputs must be positive");
  return exact_quotient(omega_size * class_in_M, class_in_G);
}

/// |Fix(V)| = |Ω| * |{V^g : V^g <= M}| / |V^G|.
inline BigInt fix_count_formula_subgroup(const BigInt& omega_size, const BigInt& conjugates_in_M,
                                         const BigInt& conjugates_in_G) {
  return fix_count_formula(omega_size, conjugates_in_M, conjugates_in_G);
}

/// Single-class form |C_G(g)| / |C_M(g)| (or |N_G(V)| / |N_M(V)|).
inline BigInt fix_count_from_centralizers(const BigInt& in_G, const BigInt& in_M) {
  return exact_quotient(in_G, in_M);
}

// ---------------------------------------------------------------------------
// Element helpers

/// Some x in G with g^x = x^-1 g x = h, searched by enumeration.
inline std::optional<Permutation> conjugating_element(const PermGroup& G, const Permutation& g,
                                                      const Permutation& h, const Limits& limits = {}) {
  if (g.cycle_type() != h.cycle_type()) return std::nullopt;
  std::optional<Permutation> found;
  G.chain();
  if (G.order() > limits.enumeration_cap) {
    throw BudgetExceeded("conjugacy search needs |G| <= " + std::to_string(limits.enumeration_cap));
  }
  G.chain().for_each_element([&](const Permutation& x) {
    if (g.conjugate_by(x) == h) {
      found = x;
      return false;
    }
    return true;
  });
  return found;
}

inline bool commute(const Permutation& a, const Permutation& b) { return a * b == b * a; }

/// Orders of a group as a machine integer (callers ensure it fits).
inline std::uint64_t small_order(const PermGroup& G) {
  if (G.order() > std::numeric_limits<std::uint64_t>::max()) throw BudgetExceeded("group order too large");
  return static_cast<std::uint64_t>(G.order());
}

// ---------------------------------------------------------------------------
// Witnesses from disjoint-support factorizations

/// Certificate for G on Ω from a subset Λ and a permutation tau of Λ that no
/// element of G_Λ induces. Pairs are transported by the first candidate that
/// agrees with tau on both points, or by search.
inline std::optional<WitnessCertificate> lambda_certificate(const PermGroup& G, const std::vector<Point>& lambda,
                                                            const std::vector<Point>& tau_images,
                                                            const std::vector<Permutation>& candidates,
                                                            std::string provenance) {
  WitnessCertificate c{G, lambda, tau_images, {}, WitnessKind::Plain, std::move(provenance)};
  for (std::size_t u = 0; u < lambda.size(); ++u) {
    for (std::size_t v = u + 1; v < lambda.size(); ++v) {
      std::optional<Permutation> t;
      for (const auto& x : candidates) {
        if (x[lambda[u]] == tau_images[u] && x[lambda[v]] == tau_images[v]) {
          t = x;
          break;
        }
      }
      if (!t) t = transporter(G, {lambda[u], lambda[v]}, {tau_images[u], tau_images[v]});
      if (!t) return std::nullopt;
      c.pair_transporters.emplace(std::make_pair(u, v), std::move(*t));
    }
  }
  return c;
}

struct LemmaWitness {
  bool applicable = false;
  std::string reason;
  std::vector<Point> lambda;                 // in construction order
  std::vector<Permutation> induced;          // g, h, gh (or g, h) restricted to Λ, Λ-local labels
  std::optional<Permutation> tau;            // on Λ, Λ-local labels
  std::optional<WitnessCertificate> certificate;
};

// ---------------------------------------------------------------------------
// Witness on three blocks of size p

/// Elementary abelian V = <g, h> of order p^2 with g in G_alpha and h, gh
/// conjugate to g: builds Λ = {alpha_0, ..., alpha_{3p-1}}, checks the three
/// induced cycle shapes, and certifies that tau = (alpha_p ... alpha_{2p-1})
/// is not induced by G_Λ.
inline LemmaWitness three_block_witness(const ActionSpace& A, Point alpha, std::uint64_t p, const Permutation& g_in,
                                     const Permutation& h_in, const Limits& limits = {}) {
  LemmaWitness out;
  auto fail = [&](std::string why) {
    out.applicable = false;
    out.reason = std::move(why);
    return out;
  };
  const PermGroup& G = A.group();
  const std::size_t n = G.degree();
  if (!is_prime(p)) return fail("p is not prime");
  if (alpha >= n) return fail("alpha out of range");
  if (!G.is_transitive()) return fail("action is not transitive");
  const Permutation g = A.to_realized(g_in);
  const Permutation h = A.to_realized(h_in);
  if (!G.contains(g) || !G.contains(h)) return fail("g or h is not in the group");
  const BigInt stab = G.order() / n;
  if (n % p != 0) return fail("p does not divide |Ω|");
  if (stab % p != 0) return fail("p does not divide |G_alpha|");
  if (stab % (BigInt(p) * p) == 0) return fail("p^2 divides |G_alpha|");
  if (g[alpha] != alpha) return fail("g does not fix alpha");
  if (g.order() != p || h.order() != p) return fail("g or h does not have order p");
  if (!commute(g, h)) return fail("g and h do not commute");
  for (std::uint64_t i = 0; i < p; ++i) {
    if (g.power(static_cast<long long>(i)) == h) return fail("h lies in <g>");
  }
  const Permutation gh = g * h;
  auto x = conjugating_element(G, g, h, limits);
  if (!x) return fail("h is not conjugate to g");
  auto y = conjugating_element(G, g, gh, limits);
  if (!y) return fail("gh is not conjugate to g");

  std::vector<Point> a(3 * p);
  a[0] = alpha;
  for (std::uint64_t i = 1; i < p; ++i) a[i] = h[a[i - 1]];
  a[p] = (*x)[alpha];
  for (std::uint64_t i = 1; i < p; ++i) a[p + i] = g[a[p + i - 1]];
  a[2 * p] = (*y)[alpha];
  for (std::uint64_t i = 1; i < p; ++i) a[2 * p + i] = g[a[2 * p + i - 1]];
  {
    auto s = a;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) return fail("constructed points are not distinct");
  }
  out.lambda = a;

  // Local label i stands for alpha_i.
  std::vector<std::int64_t> local(n, -1);
  for (std::size_t i = 0; i < a.size(); ++i) local[a[i]] = static_cast<std::int64_t>(i);
  auto induced = [&](const Permutation& e) -> std::optional<Permutation> {
    std::vector<Point> img(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto j = local[e[a[i]]];
      if (j < 0) return std::nullopt;
      img[i] = static_cast<Point>(j);
    }
    return Permutation(std::move(img));
  };
  auto gl = induced(g), hl = induced(h), ghl = induced(gh);
  if (!gl || !hl || !ghl) return fail("Λ is not invariant under V");
  // Expected shapes: g = (a_p..a_{2p-1})(a_{2p}..a_{3p-1}), h = (a_0..a_{p-1})
  // with g^-1 on the last block, gh = (a_0..a_{p-1})(a_p..a_{2p-1}).
  auto block = [&](std::size_t b) {
    std::vector<Point> c;
    for (std::uint64_t i = 0; i < p; ++i) c.push_back(static_cast<Point>(b * p + i));
    return c;
  };
  auto reversed = [](std::vector<Point> c) {
    std::reverse(c.begin() + 1, c.end());
    return c;
  };
  const std::size_t m = a.size();
  const auto eg = Permutation::from_cycles(m, {block(1), block(2)});
  const auto eh = Permutation::from_cycles(m, {block(0), reversed(block(2))});
  const auto egh = Permutation::from_cycles(m, {block(0), block(1)});
  if (*gl != eg || *hl != eh || *ghl != egh) return fail("induced cycle shapes differ from the construction");
  out.induced = {*gl, *hl, *ghl};
  const auto tau = Permutation::from_cycles(m, {block(1)});
  out.tau = tau;

  auto induced_group = ActionSpace::induced(G, a, limits);
  // induced() relabels Λ ascending; translate tau accordingly.
  const auto& sorted = induced_group.support();
  std::vector<Point> img(m);
  for (std::size_t i = 0; i < m; ++i) {
    Point src = sorted[i];
    Point dst = a[tau[static_cast<Point>(local[src])]];
    img[i] = static_cast<Point>(std::lower_bound(sorted.begin(), sorted.end(), dst) - sorted.begin());
  }
  if (induced_group.group().contains(Permutation(img))) {
    return fail("tau is induced by the set stabilizer of Λ, so p^2 divides |G_alpha|");
  }
  std::vector<Point> J(m);
  for (std::size_t i = 0; i < m; ++i) J[i] = a[tau[static_cast<Point>(i)]];
  auto cert = lambda_certificate(G, a, J, {Permutation(n), g, gh}, "three-block witness");
  if (!cert) return fail("pair transporter missing");
  out.certificate = std::move(cert);
  out.applicable = true;
  return out;
}

// ---------------------------------------------------------------------------
// Witness from fixed-point sets

/// g, h of prime order p with g, h, gh^-1 conjugate, V = <g,h> of order p^2,
/// g of maximal fixity among elements of order p, and |Fix(V)| < |Fix(g)|.
/// Λ = Fix(g) ∪ Fix(h) ∪ Fix(gh^-1) and tau_1 = g on Fix(gh^-1).
inline LemmaWitness fixed_point_witness(const ActionSpace& A, const Permutation& g_in, const Permutation& h_in,
                                        std::uint64_t p, const Limits& limits = {}) {
  LemmaWitness out;
  auto fail = [&](std::string why) {
    out.applicable = false;
    out.reason = std::move(why);
    return out;
  };
  const PermGroup& G = A.group();
  const std::size_t n = G.degree();
  if (!is_prime(p)) return fail("p is not prime");
  const Permutation g = A.to_realized(g_in);
  const Permutation h = A.to_realized(h_in);
  if (!G.contains(g) || !G.contains(h)) return fail("g or h is not in the group");
  if (g.order() != p || h.order() != p) return fail("g or h does not have order p");
  if (!commute(g, h)) return fail("g and h do not commute");
  for (std::uint64_t i = 0; i < p; ++i) {
    if (g.power(static_cast<long long>(i)) == h) return fail("h lies in <g>");
  }
  const Permutation k = g * h.inverse();
  if (G.order() > limits.enumeration_cap) return fail("group too large to check maximal fixity");
  if (!conjugating_element(G, g, h, limits)) return fail("h is not conjugate to g");
  if (!conjugating_element(G, g, k, limits)) return fail("gh^-1 is not conjugate to g");
  const std::size_t fg = g.fixed_point_count();
  bool exceeded = false;
  G.for_each_element(
      [&](const Permutation& e) {
        if (!exceeded && e.fixed_point_count() > fg && !e.is_identity() && e.order() == p) exceeded = true;
      },
      limits.enumeration_cap);
  if (exceeded) return fail("some element of order p fixes more points than g");
  std::size_t fv = 0;
  std::vector<Point> lambda;
  for (Point x = 0; x < n; ++x) {
    const bool a = g[x] == x, b = h[x] == x, c = k[x] == x;
    if (a && b) ++fv;
    if (a || b || c) lambda.push_back(x);
  }
  if (fv >= fg) return fail("|Fix(V)| is not smaller than |Fix(g)|");

  std::vector<Point> J(lambda.size());
  std::vector<Point> tau_local(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const Point x = lambda[i];
    const Point y = k[x] == x ? g[x] : x;
    J[i] = y;
    tau_local[i] = static_cast<Point>(std::lower_bound(lambda.begin(), lambda.end(), y) - lambda.begin());
  }
  out.lambda = lambda;
  out.tau = Permutation(tau_local);
  out.induced = {restrict_to(g, lambda), restrict_to(h, lambda)};
  auto induced_group = ActionSpace::induced(G, lambda, limits);
  if (induced_group.group().contains(*out.tau)) return fail("tau_1 is induced by the set stabilizer of Λ");
  auto cert = lambda_certificate(G, lambda, J, {Permutation(n), g, h}, "fixed-point witness");
  if (!cert) return fail("pair transporter missing");
  out.certificate = std::move(cert);
  out.applicable = true;
  return out;
}

// ---------------------------------------------------------------------------
// Battery of direct tests

struct BatteryOptions {
  std::vector<int> tests{3, 1, 2};
  std::size_t ell_max = 6;
  bool stop_at_first = true;
  Limits limits;
};

inline TestOutcome run_direct_test(int test, const PermGroup& G, const BatteryOptions& opt) {
  switch (test) {
    case 1: return test1_character_bound(G, opt.ell_max, opt.limits);
    case 2: return test2_closure(G, opt.limits);
    case 3: return test3_scan(G, opt.limits);
  }
  throw InvalidInput("unknown direct test " + std::to_string(test));
}

inline std::vector<TestOutcome> run_battery(const PermGroup& G, const BatteryOptions& opt) {
  std::vector<TestOutcome> out;
  for (int t : opt.tests) {
    out.push_back(run_direct_test(t, G, opt));
    if (opt.stop_at_first && out.back().status == Status::NonBinary) break;
  }
  return out;
}

inline const TestOutcome* first_nonbinary(const std::vector<TestOutcome>& v) {
  for (const auto& t : v) {
    if (t.status == Status::NonBinary) return &t;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Test 4: suborbits

/// Runs the battery on G_alpha acting on each of its orbits in Ω \ {alpha}
/// (smallest first). A non-binary suborbit action makes G non-binary; a
/// witness (I, J) on the suborbit lifts to ((alpha, I), (alpha, J)).
inline TestOutcome suborbit_reduction(const PermGroup& G, Point alpha, const BatteryOptions& opt) {
  TestOutcome out;
  out.test = 4;
  G.check_point(alpha);
  if (!G.is_transitive()) {
    out.status = Status::Skipped;
    out.detail = "group is intransitive";
    return out;
  }
  try {
    const PermGroup Ga = G.point_stabilizer(alpha);
    auto orbs = Ga.orbits();
    std::stable_sort(orbs.begin(), orbs.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    std::vector<std::string> notes;
    bool any_budget = false;
    for (const auto& lam : orbs) {
      if (lam.size() < 2) continue;
      std::vector<Permutation> gens;
      for (const auto& s : Ga.generators()) gens.push_back(restrict_to(s, lam));
      PermGroup local(lam.size(), std::move(gens));
      auto results = run_battery(local, opt);
      for (const auto& r : results) any_budget = any_budget || r.budget_hit;
      const auto* hit = first_nonbinary(results);
      if (!hit) continue;
      out.status = Status::NonBinary;
      out.detail = "suborbit of size " + std::to_string(lam.size()) + " containing " + std::to_string(lam.front()) +
                   ": test " + std::to_string(hit->test) + " " + hit->detail;
      out.evidence = hit->evidence;
      if (hit->certificate) {
        WitnessCertificate c{G, {alpha}, {alpha}, {}, WitnessKind::Plain, "test 4 via test " + std::to_string(hit->test)};
        for (Point x : hit->certificate->I) c.I.push_back(lam[x]);
        for (Point x : hit->certificate->J) c.J.push_back(lam[x]);
        if (!fill_pair_transporters(c)) throw std::logic_error("lifted witness lost a pair transporter");
        out.certificate = std::move(c);
      }
      return out;
    }
    out.status = any_budget ? Status::Skipped : Status::Inconclusive;
    out.budget_hit = any_budget;
    out.detail = any_budget ? "some suborbit test hit its budget" : "every suborbit action inconclusive";
  } catch (const BudgetExceeded& e) {
    out.status = Status::Skipped;
    out.budget_hit = true;
    out.detail = e.what();
  }
  return out;
}

/// Abstract form: M acting on the cosets of H = M ∩ M^g, without G.
inline TestOutcome suborbit_reduction_abstract(const PermGroup& M, const PermGroup& H, const BatteryOptions& opt) {
  TestOutcome out;
  out.test = 4;
  try {
    auto A = coset_action(M, H, opt.limits);
    auto results = run_battery(A.group(), opt);
    if (const auto* hit = first_nonbinary(results)) {
      out = *hit;
      out.test = 4;
      out.detail = "action on " + std::to_string(A.degree()) + " cosets: test " + std::to_string(hit->test) + " " + hit->detail;
      return out;
    }
    out.status = Status::Inconclusive;
    for (const auto& r : results) out.budget_hit = out.budget_hit || r.budget_hit;
    out.detail = "action on " + std::to_string(A.degree()) + " cosets inconclusive";
  } catch (const BudgetExceeded& e) {
    out.status = Status::Skipped;
    out.budget_hit = true;
    out.detail = e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Primitivity

/// Transitive with no block system other than the trivial ones.
inline bool is_primitive(const PermGroup& G) {
  const std::size_t n = G.degree();
  if (!G.is_transitive()) return false;
  if (n <= 2) return true;
  const auto Ga = G.point_stabilizer(0);
  for (const auto& orb : Ga.orbits()) {
    const Point beta = orb.front();
    if (beta == 0) continue;
    std::vector<Point> parent(n);
    std::iota(parent.begin(), parent.end(), Point{0});
    std::function<Point(Point)> find = [&](Point x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<std::pair<Point, Point>> queue{{0, beta}};
    parent[beta] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      auto [x, y] = queue[q];
      for (const auto& g : G.generators()) {
        Point a = find(g[x]), b = find(g[y]);
        if (a == b) continue;
        parent[b] = a;
        queue.emplace_back(a, b);
      }
    }
    std::size_t block = 0;
    const Point root = find(0);
    for (Point x = 0; x < n; ++x) block += find(x) == root;
    if (block < n) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Subgroups containing a Sylow subgroup

namespace detail {

/// Elements of G in a hash index, for membership-free bookkeeping.
struct ElementIndex {
  std::vector<Permutation> elements;
  std::unordered_map<Permutation, std::size_t, PermutationHash> pos;

  explicit ElementIndex(const PermGroup& G, const Limits& limits) {
    elements = G.elements(limits.enumeration_cap);
    pos.reserve(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) pos.emplace(elements[i], i);
  }
};

inline bool is_p_power(BigInt v, std::uint64_t p) {
  while (v > 1 && v % p == 0) v /= p;
  return v == 1;
}

inline bool conjugate_subgroups(const PermGroup& a, const PermGroup& b, const std::vector<Permutation>& conjugators) {
  if (a.order() != b.order()) return false;
  for (const auto& x : conjugators) {
    bool ok = true;
    for (const auto& s : a.generators()) {
      if (!b.contains(s.conjugate_by(x))) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

/// All subgroups K with Q <= K <= M, one per class under `conjugators`
/// (which must normalize Q and realize every M-conjugacy between such K).
inline std::vector<PermGroup> overgroups_of(const PermGroup& Q, const ElementIndex& M,
                                            const std::vector<Permutation>& conjugators, NodeCounter& nodes) {
  std::vector<PermGroup> found{Q};
  for (std::size_t i = 0; i < found.size(); ++i) {
    const PermGroup H = found[i];
    const auto helems = H.elements();
    std::vector<bool> done(M.elements.size(), false);
    for (std::size_t j = 0; j < M.elements.size(); ++j) {
      if (done[j]) continue;
      const auto& x = M.elements[j];
      // Mark the right coset Hx.
      for (const auto& e : helems) done[M.pos.at(e * x)] = true;
      if (H.contains(x)) continue;
      nodes.tick();
      PermGroup K = join(H, {x});
      bool fresh = true;
      for (const auto& F : found) {
        if (conjugate_subgroups(K, F, conjugators)) {
          fresh = false;
          break;
        }
      }
      if (fresh) found.push_back(std::move(K));
    }
  }
  return found;
}

}  // namespace detail

/// A Sylow p-subgroup, grown greedily from p-power elements in sorted order.
inline PermGroup sylow_subgroup(const PermGroup& M, std::uint64_t p, const Limits& limits = {}) {
  if (!is_prime(p)) throw InvalidInput("p must be prime");
  const BigInt target = p_part(M.order(), p);
  PermGroup P = PermGroup::trivial(M.degree());
  if (target == 1) return P;
  const auto elems = M.elements(limits.enumeration_cap);
  while (P.order() < target) {
    const BigInt before = P.order();
    for (const auto& x : elems) {
      if (P.order() == target) break;
      if (!detail::is_p_power(x.order(), p) || P.contains(x)) continue;
      PermGroup Q = join(P, {x});
      if (detail::is_p_power(Q.order(), p)) P = std::move(Q);
    }
    if (P.order() == before) throw std::logic_error("Sylow subgroup search stalled");
  }
  return P;
}

/// Subgroups H with P <= H <= M for a Sylow p-subgroup P, up to
/// M-conjugacy, ordered by increasing order. Their coset actions are the
/// transitive actions of M of degree prime to p.
inline std::vector<PermGroup> sylow_overgroups(const PermGroup& M, std::uint64_t p, const Limits& limits = {}) {
  const PermGroup P = sylow_subgroup(M, p, limits);
  const detail::ElementIndex idx(M, limits);
  // Two overgroups of P conjugate in M are conjugate by an element of N_M(P).
  std::vector<Permutation> normalizer;
  for (const auto& x : idx.elements) {
    bool ok = true;
    for (const auto& s : P.generators()) ok = ok && P.contains(s.conjugate_by(x));
    if (ok) normalizer.push_back(x);
  }
  NodeCounter nodes(limits.search_nodes, "overgroup search");
  auto out = detail::overgroups_of(P, idx, normalizer, nodes);
  std::stable_sort(out.begin(), out.end(), [](const PermGroup& a, const PermGroup& b) { return a.order() < b.order(); });
  return out;
}

/// All subgroups of a p-group P of the given order.
inline std::vector<PermGroup> subgroups_of_order(const PermGroup& P, const BigInt& order, const Limits& limits = {}) {
  std::vector<PermGroup> layer{PermGroup::trivial(P.degree())};
  std::vector<PermGroup> result;
  const auto elems = P.elements(limits.enumeration_cap);
  if (order == 1) return layer;
  // Subgroups of a p-group form chains with index p at each step.
  while (!layer.empty()) {
    std::vector<PermGroup> next;
    for (const auto& H : layer) {
      for (const auto& x : elems) {
        if (H.contains(x)) continue;
        PermGroup K = join(H, {x});
        if (K.order() > order) continue;
        bool dup = false;
        for (const auto& F : next) dup = dup || same_group(F, K);
        if (!dup) next.push_back(std::move(K));
      }
    }
    for (const auto& K : next) {
      if (K.order() == order) {
        bool dup = false;
        for (const auto& F : result) dup = dup || same_group(F, K);
        if (!dup) result.push_back(K);
      }
    }
    std::erase_if(next, [&](const PermGroup& K) { return K.order() >= order; });
    layer = std::move(next);
  }
  return result;
}

/// Point stabilizers (up to M-conjugacy) of the transitive actions of M
/// whose degree is not divisible by d = p^k.
inline std::vector<PermGroup> stabilizers_for_prime_power(const PermGroup& M, std::uint64_t d, const Limits& limits = {}) {
  const std::uint64_t p = prime_power_base(d);
  if (p == 0) throw InvalidInput("d must be a prime or a prime power");
  std::uint64_t k = 0;
  for (std::uint64_t v = d; v > 1; v /= p) ++k;
  if (k == 1) return sylow_overgroups(M, p, limits);
  const PermGroup P = sylow_subgroup(M, p, limits);
  // Degree not divisible by p^k iff the stabilizer contains a conjugate of a
  // subgroup of P of order |P| / p^(k-1).
  BigInt q_order = P.order();
  for (std::uint64_t i = 0; i + 1 < k && q_order > 1; ++i) q_order /= p;
  const detail::ElementIndex idx(M, limits);
  NodeCounter nodes(limits.search_nodes, "overgroup search");
  std::vector<PermGroup> all;
  for (const auto& Q : subgroups_of_order(P, q_order, limits)) {
    for (auto& K : detail::overgroups_of(Q, idx, idx.elements, nodes)) {
      bool dup = false;
      for (const auto& F : all) dup = dup || detail::conjugate_subgroups(K, F, idx.elements);
      if (!dup) all.push_back(std::move(K));
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const PermGroup& a, const PermGroup& b) { return a.order() < b.order(); });
  return all;
}

// ---------------------------------------------------------------------------
// Test 5

struct Test5Config {
  PermGroup M;
  BigInt omega_size = 0;
  std::uint64_t d = 2;
  bool relax_condition2 = true;
  bool relax_condition3 = true;
  BatteryOptions battery;
};

struct Test5Action {
  PermGroup stabilizer;
  BigInt degree = 0;
  BigInt stabilizer_order = 0;
  BigInt kernel_order = 0;
  bool condition2 = true;
  bool condition3 = true;
  bool survives = true;
  Status verdict = Status::Inconclusive;
  std::string detail;
  std::optional<WitnessCertificate> certificate;
};

struct Test5Result {
  Status status = Status::Inconclusive;
  std::string detail;
  std::vector<Test5Action> actions;
  bool budget_hit = false;
};

namespace detail {

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      ps.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

/// Order, exponent, commutativity and element-order counts.
struct GroupFingerprint {
  BigInt order;
  bool abelian = false;
  std::map<BigInt, std::uint64_t> order_counts;
  bool operator==(const GroupFingerprint&) const = default;
};

inline GroupFingerprint fingerprint(const PermGroup& K, const Limits& limits) {
  GroupFingerprint f;
  f.order = K.order();
  f.abelian = true;
  const auto& gens = K.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) f.abelian = f.abelian && commute(gens[i], gens[j]);
  }
  K.for_each_element([&](const Permutation& x) { ++f.order_counts[x.order()]; }, limits.enumeration_cap);
  return f;
}

inline PermGroup normal_closure(const PermGroup& H, const std::vector<Permutation>& seeds) {
  PermGroup N(H.degree(), seeds);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Permutation> extra;
    for (const auto& s : N.generators()) {
      for (const auto& h : H.generators()) {
        auto c = s.conjugate_by(h);
        if (!N.contains(c)) extra.push_back(c);
      }
    }
    if (!extra.empty()) {
      N = join(N, extra);
      grew = true;
    }
  }
  return N;
}

/// The normal subgroups of H, by closing normal closures of single elements
/// under joins.
inline std::vector<PermGroup> normal_subgroups(const PermGroup& H, const Limits& limits) {
  std::vector<PermGroup> out{PermGroup::trivial(H.degree())};
  auto add = [&](PermGroup N) {
    for (const auto& F : out) {
      if (same_group(F, N)) return false;
    }
    out.push_back(std::move(N));
    return true;
  };
  for (const auto& x : H.elements(limits.enumeration_cap)) {
    if (!x.is_identity()) add(normal_closure(H, {x}));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 1; j < i; ++j) {
      auto gens = out[i].generators();
      for (const auto& g : out[j].generators()) gens.push_back(g);
      add(PermGroup(H.degree(), gens));
    }
  }
  return out;
}

/// Kernel of the action of M on the cosets of H: the core of H.
inline PermGroup core_of(const PermGroup& M, const PermGroup& H, const ActionSpace& A) {
  std::vector<Permutation> gens;
  for (const auto& x : H.elements()) {
    if (A.realize(x).is_identity()) gens.push_back(x);
  }
  return PermGroup(M.degree(), std::move(gens));
}

}  // namespace detail

/// Lemma-based test with the point stabilizer M and |Ω| only. Enumerates the
/// transitive actions of M of degree > 1 not divisible by d, filters them by
/// the lemma's conditions (2) and (3) unless relaxed, and concludes
/// NonBinary when every remaining action is shown non-binary. The lemma also
/// needs the big group to be primitive, which the caller asserts.
inline Test5Result test5_alot(const Test5Config& cfg) {
  Test5Result res;
  const auto& M = cfg.M;
  const auto& limits = cfg.battery.limits;
  if (cfg.d < 2) throw InvalidInput("d must be at least 2");
  if (prime_power_base(cfg.d) == 0) throw InvalidInput("d must be a prime or a prime power");
  if (cfg.omega_size < 1) throw InvalidInput("omega_size must be positive");
  if ((cfg.omega_size - 1) % cfg.d == 0) {
    res.detail = "d divides |Ω| - 1";
    return res;
  }
  if (M.is_trivial()) {
    res.detail = "M is trivial";
    return res;
  }
  try {
    auto stabs = stabilizers_for_prime_power(M, cfg.d, limits);
    const std::uint64_t m_order = small_order(M);
    bool all_nonbinary = true;
    bool any_budget = false;
    for (const auto& H : stabs) {
      Test5Action act;
      act.stabilizer = H;
      act.degree = M.order() / H.order();
      act.stabilizer_order = H.order();
      if (act.degree == 1) continue;
      auto A = coset_action(M, H, limits);
      act.kernel_order = M.order() / A.group().order();
      if (!cfg.relax_condition2 && act.kernel_order > 1) {
        const auto image = small_order(A.group());
        for (auto q : detail::prime_divisors(m_order / image)) {
          if (image % q != 0) act.condition2 = false;
        }
      }
      if (!cfg.relax_condition3 && act.kernel_order > 1) {
        auto K = detail::core_of(M, H, A);
        const auto fk = detail::fingerprint(K, limits);
        bool found = false;
        for (const auto& N : detail::normal_subgroups(H, limits)) {
          if (N.order() != K.order() || same_group(N, K)) continue;
          if (detail::fingerprint(N, limits) == fk) {
            found = true;
            break;
          }
        }
        act.condition3 = found;
      }
      act.survives = act.condition2 && act.condition3;
      if (!act.survives) {
        act.detail = std::string("excluded by condition ") + (act.condition2 ? "(3)" : "(2)");
        res.actions.push_back(std::move(act));
        continue;
      }
      auto results = run_battery(A.group(), cfg.battery);
      if (const auto* hit = first_nonbinary(results)) {
        act.verdict = Status::NonBinary;
        act.detail = "test " + std::to_string(hit->test) + ": " + hit->detail;
        act.certificate = hit->certificate;
      } else {
        bool budget = false;
        for (const auto& r : results) budget = budget || r.budget_hit;
        any_budget = any_budget || budget;
        act.verdict = budget ? Status::Skipped : Status::Inconclusive;
        act.detail = budget ? "battery hit its budget" : "battery inconclusive";
        all_nonbinary = false;
      }
      res.actions.push_back(std::move(act));
    }
    res.budget_hit = any_budget;
    if (all_nonbinary) {
      res.status = Status::NonBinary;
      res.detail = "every admissible action of degree not divisible by " + std::to_string(cfg.d) + " is non-binary";
    } else {
      res.status = any_budget ? Status::Skipped : Status::Inconclusive;
      res.detail = "some admissible action of degree not divisible by " + std::to_string(cfg.d) + " was not shown non-binary";
    }
  } catch (const BudgetExceeded& e) {
    res.status = Status::Skipped;
    res.budget_hit = true;
    res.detail = e.what();
  }
  return res;
}

}  // namespace binarity
