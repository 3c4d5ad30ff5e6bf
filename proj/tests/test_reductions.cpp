#include <gtest/gtest.h>

#include "binarity/named_groups.hpp"
#include "oracles.hpp"

using namespace binarity;

namespace {

const Permutation& pick(const std::vector<Permutation>& v, std::size_t i) { return v.at(i); }

/// Indices not divisible by d of subgroups of M, one per conjugacy class, by brute force.
std::multiset<std::size_t> coprime_indices_up_to_conjugacy(const PermGroup& M, std::uint64_t d) {
  const auto elems = oracle::elements(M);
  const auto subs = oracle::all_subgroups(elems);
  std::set<std::vector<oracle::Perm>> done;
  std::multiset<std::size_t> out;
  for (const auto& H : subs) {
    const std::size_t index = elems.size() / H.size();
    if (index % d == 0 || done.count(H)) continue;
    // Record the whole conjugacy class.
    for (const auto& x : elems) {
      std::vector<oracle::Perm> K;
      auto xi = x;
      for (std::size_t i = 0; i < x.size(); ++i) xi[x[i]] = static_cast<std::uint32_t>(i);
      for (const auto& h : H) K.push_back(oracle::mul(oracle::mul(xi, h), x));
      std::sort(K.begin(), K.end());
      done.insert(K);
    }
    out.insert(index);
  }
  return out;
}

std::multiset<std::size_t> indices(const PermGroup& M, const std::vector<PermGroup>& hs) {
  std::multiset<std::size_t> out;
  for (const auto& H : hs) out.insert(static_cast<std::size_t>(M.order() / H.order()));
  return out;
}

}  // namespace

TEST(FixCount, Direct) {
  const auto A4 = ActionSpace::explicit_action(groups::alternating(4));
  EXPECT_EQ(fix_count_direct(A4, Permutation(4)).fix_count, 4);
  EXPECT_EQ(fix_count_direct(A4, parse_permutation("(0 1 2)", 4)).fix_count, 1);
  const auto C5 = ActionSpace::explicit_action(groups::cyclic(5));
  EXPECT_EQ(fix_count_direct(C5, parse_permutation("(0 1 2 3 4)", 5)).fix_count, 0);
  EXPECT_THROW(fix_count_direct(A4, parse_permutation("(0 1)", 4)), InvalidInput);
}

TEST(FixCount, FormulaArithmetic) {
  EXPECT_EQ(fix_count_from_centralizers(BigInt("1365154560000000"), 12600), BigInt("108345600000"));
  EXPECT_EQ(fix_count_from_centralizers(44352000, 3600 * 4 * 2), 1540);
  EXPECT_EQ(fix_count_from_centralizers(302400000, 50400), 6000);
  EXPECT_THROW(fix_count_from_centralizers(28800, 19200), InvalidInput);
  EXPECT_EQ(fix_count_formula(BigInt("1000000000000000000000"), 1, 1), BigInt("1000000000000000000000"));
  EXPECT_THROW(fix_count_formula(10, 1, 3), InvalidInput);
  EXPECT_THROW(fix_count_formula(0, 1, 1), InvalidInput);
}

TEST(FixCountProperty, FormulaMatchesDirectCount) {
  struct Case {
    PermGroup G;
    PermGroup M;
  };
  const std::vector<Case> cases{
      {groups::alternating(5),
       PermGroup(5, {parse_permutation("(0 1 2)", 5), parse_permutation("(0 1)(3 4)", 5)})},
      {groups::symmetric(5), PermGroup(5, {parse_permutation("(0 1)", 5), parse_permutation("(2 3 4)", 5)})},
      {groups::pgl2(7), groups::pgl2(7).point_stabilizer(0)},
  };
  for (const auto& c : cases) {
    auto A = coset_action(c.G, c.M);
    const auto elems = c.G.elements();
    std::set<Permutation> seen;
    for (const auto& g : elems) {
      if (seen.count(g)) continue;
      std::set<Permutation> cls;
      for (const auto& x : elems) cls.insert(g.conjugate_by(x));
      seen.insert(cls.begin(), cls.end());
      std::size_t in_m = 0;
      for (const auto& y : cls) in_m += c.M.contains(y);
      const auto formula = fix_count_formula(A.degree(), in_m, cls.size());
      EXPECT_EQ(formula, fix_count_direct(A, g).fix_count) << to_cycle_string(g);
    }
  }
}

TEST(ThreeBlockWitness, AlternatingSixOnOneHundredEighty) {
  const PermGroup H(6, {parse_permutation("(0 1)(2 3)", 6)});
  auto A = coset_action(groups::alternating(6), H);
  ASSERT_EQ(A.degree(), 180u);
  auto w = three_block_witness(A, 0, 2, parse_permutation("(0 1)(2 3)", 6), parse_permutation("(0 2)(1 3)", 6));
  ASSERT_TRUE(w.applicable) << w.reason;
  EXPECT_EQ(w.lambda.size(), 6u);
  ASSERT_EQ(w.induced.size(), 3u);
  EXPECT_EQ(to_cycle_string(pick(w.induced, 0)), "(2 3)(4 5)");
  EXPECT_EQ(to_cycle_string(pick(w.induced, 1)), "(0 1)(4 5)");
  EXPECT_EQ(to_cycle_string(pick(w.induced, 2)), "(0 1)(2 3)");
  ASSERT_TRUE(w.certificate);
  EXPECT_TRUE(verify_witness(*w.certificate).ok);
}

TEST(ThreeBlockWitness, NotApplicableWhenSquareDividesStabilizer) {
  const PermGroup V(6, {parse_permutation("(0 1)(2 3)", 6), parse_permutation("(0 2)(1 3)", 6)});
  auto A = coset_action(groups::alternating(6), V);
  auto w = three_block_witness(A, 0, 2, parse_permutation("(0 1)(2 3)", 6), parse_permutation("(0 2)(1 3)", 6));
  EXPECT_FALSE(w.applicable);
  EXPECT_FALSE(w.certificate);
}

TEST(ThreeBlockWitness, RejectsNonCommutingPair) {
  const PermGroup H(6, {parse_permutation("(0 1)(2 3)", 6)});
  auto A = coset_action(groups::alternating(6), H);
  auto w = three_block_witness(A, 0, 2, parse_permutation("(0 1)(2 3)", 6), parse_permutation("(1 2)(4 5)", 6));
  EXPECT_FALSE(w.applicable);
}

TEST(FixedPointWitness, AlternatingFiveOnThirty) {
  const PermGroup H(5, {parse_permutation("(0 1)(2 3)", 5)});
  auto A = coset_action(groups::alternating(5), H);
  auto w = fixed_point_witness(A, parse_permutation("(0 1)(2 3)", 5), parse_permutation("(0 2)(1 3)", 5), 2);
  ASSERT_TRUE(w.applicable) << w.reason;
  EXPECT_EQ(w.lambda.size(), 6u);
  ASSERT_TRUE(w.certificate);
  EXPECT_TRUE(verify_witness(*w.certificate).ok);
}

TEST(FixedPointWitness, StrictInequalityRequired) {
  auto A = ActionSpace::explicit_action(groups::alternating(4));
  auto w = fixed_point_witness(A, parse_permutation("(0 1)(2 3)", 4), parse_permutation("(0 2)(1 3)", 4), 2);
  EXPECT_FALSE(w.applicable);
}

TEST(FixedPointWitness, MaximalFixityRequired) {
  auto A = ActionSpace::explicit_action(groups::symmetric(5));
  auto w = fixed_point_witness(A, parse_permutation("(0 1)(2 3)", 5), parse_permutation("(0 2)(1 3)", 5), 2);
  EXPECT_FALSE(w.applicable);
  EXPECT_NE(w.reason.find("fixes more points"), std::string::npos);
}

TEST(Test4, SymmetricAndAlternatingFour) {
  BatteryOptions bo;
  EXPECT_EQ(suborbit_reduction(groups::symmetric(4), 0, bo).status, Status::Inconclusive);
  EXPECT_EQ(suborbit_reduction(groups::alternating(4), 0, bo).status, Status::Inconclusive);
}

TEST(Test4, LiftsSuborbitWitness) {
  BatteryOptions bo;
  auto t = suborbit_reduction(groups::alternating(5), 0, bo);
  ASSERT_EQ(t.status, Status::NonBinary);
  ASSERT_TRUE(t.certificate);
  EXPECT_EQ(t.certificate->I.front(), 0u);
  EXPECT_TRUE(verify_witness(*t.certificate).ok);
}

TEST(Test4, AbstractForm) {
  BatteryOptions bo;
  auto t = suborbit_reduction_abstract(groups::a4_x_s5(), groups::a4_x_s5_sylow2(), bo);
  ASSERT_EQ(t.status, Status::NonBinary);
  ASSERT_TRUE(t.certificate);
  EXPECT_EQ(t.certificate->group.degree(), 45u);
  EXPECT_TRUE(verify_witness(*t.certificate).ok);
}

TEST(SylowOvergroups, SmallExamples) {
  auto s4 = sylow_overgroups(groups::symmetric(4), 2);
  ASSERT_EQ(s4.size(), 2u);
  EXPECT_EQ(s4[0].order(), 8);
  EXPECT_EQ(s4[1].order(), 24);
  auto c6 = sylow_overgroups(groups::cyclic(6), 2);
  ASSERT_EQ(c6.size(), 2u);
  EXPECT_EQ(c6[0].order(), 2);
  EXPECT_EQ(c6[1].order(), 6);
}

TEST(SylowOvergroupsProperty, MatchFullSubgroupEnumeration) {
  const std::vector<PermGroup> groups_{groups::symmetric(4), groups::alternating(5), groups::dihedral(6),
                                       groups::symmetric(5), groups::pgl2(7), groups::cyclic(12)};
  for (const auto& M : groups_) {
    for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
      if (M.order() % p != 0) continue;
      EXPECT_EQ(indices(M, sylow_overgroups(M, p)), coprime_indices_up_to_conjugacy(M, p)) << M.name() << " p=" << p;
    }
  }
}

TEST(SylowOvergroupsProperty, PrimePowerDivisor) {
  for (const auto& M : {groups::symmetric(4), groups::dihedral(8), groups::alternating(5)}) {
    EXPECT_EQ(indices(M, stabilizers_for_prime_power(M, 4)), coprime_indices_up_to_conjugacy(M, 4)) << M.name();
  }
}

TEST(Primitivity, MatchesBlockEnumeration) {
  for (const auto& G : oracle::corpus_groups(7)) {
    const auto elems = oracle::elements(G);
    const std::size_t n = G.degree();
    bool primitive = G.is_transitive();
    for (std::uint32_t mask = 0; primitive && mask < (1u << n); ++mask) {
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      if (!(mask & 1u) || size < 2 || size >= n) continue;
      bool block = true;
      for (const auto& g : elems) {
        std::uint32_t img = 0;
        for (std::size_t x = 0; x < n; ++x) {
          if (mask >> x & 1u) img |= 1u << g[x];
        }
        if (img != mask && (img & mask)) block = false;
      }
      if (block) primitive = false;
    }
    EXPECT_EQ(is_primitive(G), primitive) << G.name();
  }
}

TEST(Test5, CyclicSixSurvivesFilter) {
  Test5Config cfg{groups::cyclic(6), 4, 2, true, true, {}};
  auto r = test5_alot(cfg);
  EXPECT_EQ(r.status, Status::Inconclusive);
  ASSERT_EQ(r.actions.size(), 1u);
  EXPECT_EQ(r.actions[0].degree, 3);
  EXPECT_TRUE(r.actions[0].survives);
  EXPECT_EQ(exact_arity(coset_action(groups::cyclic(6), sylow_overgroups(groups::cyclic(6), 2)[0]).group()).value, 2u);
}

TEST(Test5, EscapeBranchWhenDDividesOmegaMinusOne) {
  Test5Config cfg{groups::pgl2(19), 21, 2, true, true, {}};
  auto r = test5_alot(cfg);
  EXPECT_EQ(r.status, Status::Inconclusive);
  EXPECT_TRUE(r.actions.empty());
}

TEST(Test5, RejectsBadDivisor) {
  Test5Config cfg{groups::cyclic(6), 4, 6, true, true, {}};
  EXPECT_THROW(test5_alot(cfg), InvalidInput);
}

TEST(Test5Property, ExactFiltersAreSoundAgainstOracle) {
  const std::vector<PermGroup> ms{groups::cyclic(6), groups::symmetric(4), groups::alternating(4),
                                  groups::dihedral(4), groups::dihedral(6), groups::symmetric(3),
                                  groups::alternating(5)};
  for (const auto& M : ms) {
    for (std::uint64_t d : {2u, 3u, 4u}) {
      Test5Config cfg{M, BigInt(d + 2), d, false, false, {}};
      auto r = test5_alot(cfg);
      if (r.status != Status::NonBinary) continue;
      for (const auto& a : r.actions) {
        if (!a.survives) continue;
        auto A = coset_action(M, a.stabilizer);
        auto ar = exact_arity(A.group(), 2'000'000);
        EXPECT_GT(ar.value, 2u) << M.name() << " d=" << d << " degree " << A.degree();
      }
    }
  }
}
