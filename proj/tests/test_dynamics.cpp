// Copyright 2026 The matchgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "test_util.hpp"

namespace matchgame {
namespace {

using testing::fixture;

bool subset(const std::vector<Matching>& a, const std::vector<Matching>& b) {
  return std::all_of(a.begin(), a.end(),
                     [&](const Matching& x) { return std::find(b.begin(), b.end(), x) != b.end(); });
}

StrategicPairs random_pairs(std::size_t n, Rng& rng) {
  std::vector<Pair> v;
  for (AgentId m = 0; m < static_cast<AgentId>(n); ++m)
    for (AgentId w = 0; w < static_cast<AgentId>(n); ++w)
      if (rng.below(3) == 0) v.emplace_back(m, w);
  return StrategicPairs(n, v);
}

std::set<AgentId> all_women(std::size_t n) {
  std::set<AgentId> s;
  for (AgentId w = 0; w < static_cast<AgentId>(n); ++w) s.insert(w);
  return s;
}

TEST(PushUpDynamics, Example1) {
  auto inst = fixture("example1.json");
  const StrategicPairs p(5, {{2, 3}, {2, 0}});
  const auto t = run_pushup_dynamics(inst, p);
  EXPECT_EQ(t.converged_at(), 1u);
  EXPECT_EQ(t.fixed_point_matching, testing::example1_pushup_ne());
  EXPECT_TRUE(is_stable(*inst, t.fixed_point_matching));
  const auto all = enumerate_stable(*inst);
  EXPECT_NE(std::find(all.begin(), all.end(), t.fixed_point_matching), all.end());
  EXPECT_TRUE(verify_ne_accomplice(t.fixed_point, p));
}

TEST(PushUpDynamics, IdentityTopNoSteps) {
  auto inst = std::make_shared<const Instance>(identity_top_instance(6));
  const auto t = run_pushup_dynamics(inst, StrategicPairs::all_pairs(6));
  EXPECT_EQ(t.converged_at(), 0u);
  EXPECT_TRUE(t.fixed_point.is_truthful());
  EXPECT_EQ(t.fixed_point_matching, Matching::identity(6));
}

TEST(PushUpDynamics, RejectsBadPair) {
  auto inst = fixture("example1.json");
  EXPECT_THROW(run_pushup_dynamics(inst, StrategicPairs(7, {{6, 0}})), InputError);
}

TEST(PushUpDynamics, SeededPolicyDeterministic) {
  Rng rng(51);
  auto inst = testing::random_instance(12, rng);
  const auto p = StrategicPairs::all_pairs(12);
  const auto a = run_pushup_dynamics(inst, p, SelectionPolicy::random(9));
  const auto b = run_pushup_dynamics(inst, p, SelectionPolicy::random(9));
  ASSERT_EQ(a.steps.size(), b.steps.size());
  EXPECT_EQ(a.fixed_point, b.fixed_point);
}

// Step bound, per-step invariants and the stability of the fixed point, on
// random instances and random strategic sets.
TEST(PushUpDynamics, TraceInvariants) {
  Rng rng(52);
  for (int t = 0; t < 150; ++t) {
    const auto n = 1 + rng.below(12);
    auto inst = testing::random_instance(n, rng);
    const auto p = rng.below(2) ? StrategicPairs::all_pairs(n) : random_pairs(n, rng);
    const auto policy = rng.below(2) ? SelectionPolicy::fixed_order()
                                     : SelectionPolicy::random(rng.next());
    const auto trace = run_pushup_dynamics(inst, p, policy);
    ASSERT_LE(trace.converged_at(), n * n);
    ASSERT_EQ(trace.truthful_matching, run_da(*inst));

    auto prev = StrategyProfile::truthful(inst, Side::kMenReport);
    auto prev_mu = trace.truthful_matching;
    for (const auto& s : trace.steps) {
      ASSERT_TRUE(p.contains(s.actor, s.beneficiary));
      ASSERT_EQ(s.matching_after, da_on_profile(s.profile_after));
      // The new list is the single-woman push-up of the previous report.
      ASSERT_EQ(s.profile_after.report(s.actor),
                push_up(prev.report(s.actor), prev_mu.woman_of(s.actor), {s.moved}));
      // Manipulator weakly better on his previous report.
      const auto& old_list = prev.report(s.actor);
      ASSERT_LE(old_list.rank_of(s.matching_after.woman_of(s.actor)),
                old_list.rank_of(prev_mu.woman_of(s.actor)));
      // Some woman strictly better under true lists.
      bool improved = false;
      for (AgentId w = 0; w < static_cast<AgentId>(n); ++w)
        improved |= inst->woman(w).prefers(s.matching_after.man_of(w), prev_mu.man_of(w));
      ASSERT_TRUE(improved);
      // Women below a man's current partner only ever leave that set.
      for (AgentId m = 0; m < static_cast<AgentId>(n); ++m) {
        const auto& before = prev.report(m);
        const auto& after = s.profile_after.report(m);
        const AgentId partner = s.matching_after.woman_of(m);
        for (AgentId w = 0; w < static_cast<AgentId>(n); ++w)
          if (after.prefers(partner, w)) { ASSERT_TRUE(before.prefers(partner, w)); }
      }
      prev = s.profile_after;
      prev_mu = s.matching_after;
    }
    ASSERT_TRUE(is_stable(*inst, trace.fixed_point_matching));
    ASSERT_TRUE(verify_ne_accomplice(trace.fixed_point, p));
  }
}

// Stable sets (under each step's reported profile) only shrink along a trace.
TEST(PushUpDynamics, StableSetsNested) {
  Rng rng(53);
  for (int t = 0; t < 60; ++t) {
    const auto n = 2 + rng.below(5);
    auto inst = testing::random_instance(n, rng);
    const auto trace = run_pushup_dynamics(inst, StrategicPairs::all_pairs(n));
    auto prev = enumerate_stable(*inst);
    ASSERT_EQ(prev, enumerate_stable(effective_profile(StrategyProfile::truthful(inst, Side::kMenReport))));
    for (const auto& s : trace.steps) {
      auto cur = enumerate_stable(effective_profile(s.profile_after));
      ASSERT_TRUE(subset(cur, prev));
      prev = std::move(cur);
    }
  }
}

// The Example 1 alternation between the truthful list and the primed list of
// m3 cycles, and neither move is a push-up; the engine instead terminates.
TEST(PushUpDynamics, Example1CyclingGuard) {
  auto inst = fixture("example1.json");
  const auto truth = StrategyProfile::truthful(inst, Side::kMenReport);
  const auto primed = testing::example1_prime_profile(inst);
  std::vector<Matching> seen{da_on_profile(truth)};
  auto cur = truth;
  for (int i = 0; i < 4; ++i) {
    cur = cur == truth ? primed : truth;
    seen.push_back(da_on_profile(cur));
  }
  EXPECT_EQ(seen[0], seen[2]);
  EXPECT_EQ(seen[2], seen[4]);
  EXPECT_EQ(seen[1], testing::example1_starred());
  // w4 gains on the way out, w1 gains on the way back.
  EXPECT_TRUE(inst->woman(3).prefers(seen[1].man_of(3), seen[0].man_of(3)));
  EXPECT_TRUE(inst->woman(0).prefers(seen[2].man_of(0), seen[1].man_of(0)));

  auto is_push_up_of = [](const PreferenceList& from, AgentId match, const PreferenceList& to) {
    std::vector<AgentId> below(from.begin() + from.rank_of(match) + 1, from.end());
    for (std::size_t mask = 0; mask < (1u << below.size()); ++mask) {
      std::set<AgentId> x;
      for (std::size_t i = 0; i < below.size(); ++i)
        if (mask >> i & 1) x.insert(below[i]);
      if (push_up(from, match, x) == to) return true;
    }
    return false;
  };
  EXPECT_FALSE(is_push_up_of(truth.report(2), seen[0].woman_of(2), primed.report(2)));
  EXPECT_FALSE(is_push_up_of(primed.report(2), seen[1].woman_of(2), truth.report(2)));

  const auto t = run_pushup_dynamics(inst, StrategicPairs(5, {{2, 3}, {2, 0}}));
  EXPECT_LE(t.converged_at(), 25u);
}

TEST(InconspicuousDynamics, Fixture3x3) {
  auto inst = fixture("self_manipulation_3x3.json");
  const auto t = run_inconspicuous_dynamics(inst, {0});
  ASSERT_EQ(t.converged_at(), 1u);
  EXPECT_EQ(t.steps[0].actor, 0);
  EXPECT_EQ(t.steps[0].moved, 2);
  EXPECT_EQ(t.steps[0].position, 1);
  EXPECT_EQ(t.fixed_point_matching, Matching::identity(3));
  EXPECT_TRUE(verify_ne_woman(t.fixed_point, {0}));
  EXPECT_FALSE(oracle::woman_can_improve(t.fixed_point, 0));
}

TEST(InconspicuousDynamics, IdentityTopNoSteps) {
  auto inst = std::make_shared<const Instance>(identity_top_instance(5));
  EXPECT_EQ(run_inconspicuous_dynamics(inst, all_women(5)).converged_at(), 0u);
}

TEST(InconspicuousDynamics, StepsHurtSomeManAndHelpTheWoman) {
  Rng rng(54);
  for (int t = 0; t < 20; ++t) {
    auto inst = testing::random_instance(10, rng);
    const auto trace = run_inconspicuous_dynamics(inst, all_women(10));
    ASSERT_LE(trace.converged_at(), 100u);
    Matching prev = trace.truthful_matching;
    for (const auto& s : trace.steps) {
      ASSERT_TRUE(inst->woman(s.actor).prefers(s.matching_after.man_of(s.actor), prev.man_of(s.actor)));
      bool hurt = false;
      for (AgentId m = 0; m < 10; ++m)
        hurt |= inst->man(m).prefers(prev.woman_of(m), s.matching_after.woman_of(m));
      ASSERT_TRUE(hurt);
      prev = s.matching_after;
    }
    ASSERT_TRUE(verify_ne_woman(trace.fixed_point, all_women(10)));
  }
}

// The inconspicuous check at a fixed point agrees with a search over all n!
// reports of every strategic woman.
TEST(InconspicuousDynamics, FixedPointIsFullNe) {
  Rng rng(55);
  for (int t = 0; t < 100; ++t) {
    const auto n = 2 + rng.below(4);
    auto inst = testing::random_instance(n, rng);
    std::set<AgentId> pw;
    for (AgentId w = 0; w < static_cast<AgentId>(n); ++w)
      if (rng.below(2)) pw.insert(w);
    const auto trace = run_inconspicuous_dynamics(inst, pw);
    ASSERT_TRUE(verify_ne_woman(trace.fixed_point, pw));
    for (AgentId w : pw) ASSERT_FALSE(oracle::woman_can_improve(trace.fixed_point, w));
  }
}

TEST(VerifyNe, Accomplice) {
  auto inst = fixture("example1.json");
  const StrategicPairs p(5, {{2, 3}});
  EXPECT_TRUE(verify_ne_accomplice(testing::example1_prime_profile(inst), p));
  EXPECT_FALSE(verify_ne_accomplice(StrategyProfile::truthful(inst, Side::kMenReport), p));
  const auto witness = find_accomplice_deviation(StrategyProfile::truthful(inst, Side::kMenReport), p);
  ASSERT_TRUE(witness.has_value());
  EXPECT_EQ(witness->moved, 3);
  EXPECT_THROW(verify_ne_accomplice(StrategyProfile::truthful(inst, Side::kWomenReport), p),
               InputError);
}

TEST(VerifyNe, IdentityTopEveryReportOfLastMan) {
  Rng rng(56);
  for (std::size_t n : {3u, 5u, 8u}) {
    auto inst = std::make_shared<const Instance>(identity_top_instance(n));
    const auto last = static_cast<AgentId>(n - 1);
    const StrategicPairs p(n, {{last, last}});
    for (int i = 0; i < 20; ++i) {
      const auto sp = StrategyProfile::truthful(inst, Side::kMenReport)
                          .with_report(last, uniform_ranking(n, rng));
      ASSERT_TRUE(verify_ne_accomplice(sp, p));
      ASSERT_EQ(da_on_profile(sp), Matching::identity(n));
    }
  }
}

TEST(VerifyNe, OneForMany) {
  auto inst = fixture("example1.json");
  const auto truth = StrategyProfile::truthful(inst, Side::kMenReport);
  EXPECT_FALSE(verify_ne_one_for_many(truth, {2}, {{2, {3}}}));
  auto idt = std::make_shared<const Instance>(identity_top_instance(4));
  EXPECT_TRUE(verify_ne_one_for_many(StrategyProfile::truthful(idt, Side::kMenReport), {0, 1},
                                     {{0, {1, 2}}, {1, {3}}}));
}

// NE of the flattened accomplice game are NE of the one-for-many game.
TEST(VerifyNe, OneForManyViaFlattening) {
  Rng rng(57);
  for (int t = 0; t < 100; ++t) {
    const auto n = 2 + rng.below(9);
    auto inst = testing::random_instance(n, rng);
    std::set<AgentId> pm;
    std::map<AgentId, std::set<AgentId>> pw;
    for (AgentId m = 0; m < static_cast<AgentId>(n); ++m) {
      if (rng.below(2)) continue;
      pm.insert(m);
      for (AgentId w = 0; w < static_cast<AgentId>(n); ++w)
        if (rng.below(2)) pw[m].insert(w);
    }
    const auto trace = run_pushup_dynamics(inst, one_for_many_to_accomplice(n, pm, pw));
    ASSERT_TRUE(verify_ne_one_for_many(trace.fixed_point, pm, pw));
  }
}

TEST(VerifyNe, Woman) {
  auto inst = fixture("self_manipulation_3x3.json");
  EXPECT_FALSE(verify_ne_woman(StrategyProfile::truthful(inst, Side::kWomenReport), {0}));
  auto idt = std::make_shared<const Instance>(identity_top_instance(4));
  EXPECT_TRUE(verify_ne_woman(StrategyProfile::truthful(idt, Side::kWomenReport), all_women(4)));
  EXPECT_THROW(verify_ne_woman(StrategyProfile::truthful(inst, Side::kMenReport), {0}), InputError);
}

TEST(EnumerateAllNe, IdentityTop) {
  auto inst = std::make_shared<const Instance>(identity_top_instance(3));
  const auto all = enumerate_all_ne(inst, StrategicPairs(3, {{2, 2}}));
  ASSERT_EQ(all.size(), 6u);
  for (const auto& ne : all) EXPECT_EQ(ne.matching, Matching::identity(3));
}

TEST(EnumerateAllNe, RefusesLarge) {
  EXPECT_THROW(enumerate_all_ne(fixture("example1.json"), StrategicPairs(5, {{0, 0}})),
               OracleBoundError);
  auto inst = std::make_shared<const Instance>(identity_top_instance(3));
  EXPECT_THROW(enumerate_all_ne(inst, StrategicPairs(3, {{0, 0}, {1, 0}, {2, 0}})),
               OracleBoundError);
}

// Cross-check against NE defined through the n!-report oracle.
TEST(EnumerateAllNe, MatchesBruteForce) {
  Rng rng(58);
  for (int t = 0; t < 15; ++t) {
    auto inst = testing::random_instance(3, rng);
    const auto p = StrategicPairs(3, {{static_cast<AgentId>(rng.below(3)), static_cast<AgentId>(rng.below(3))},
                                      {static_cast<AgentId>(rng.below(3)), static_cast<AgentId>(rng.below(3))}});
    const auto got = enumerate_all_ne(inst, p);
    std::set<std::vector<PreferenceList>> got_set;
    for (const auto& ne : got) got_set.insert(ne.profile.reports());

    const auto men = p.men();
    std::set<std::vector<PreferenceList>> want;
    const auto perms = oracle::all_permutations(3);
    const auto truth = StrategyProfile::truthful(inst, Side::kMenReport);
    std::vector<std::size_t> idx(men.size(), 0);
    while (true) {
      auto sp = truth;
      for (std::size_t i = 0; i < men.size(); ++i) sp = sp.with_report(men[i], PreferenceList(perms[idx[i]]));
      bool ne = true;
      for (const auto& [m, w] : p) ne = ne && !oracle::accomplice_exists(sp, m, w);
      if (ne) want.insert(sp.reports());
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == perms.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    ASSERT_EQ(got_set, want);
    // Certified NE matchings have no blocking pair inside P.
    for (const auto& ne : got)
      for (const auto& bp : blocking_pairs(*inst, ne.matching).blocking_pairs)
        ASSERT_FALSE(p.contains(bp.first, bp.second));
  }
}

// Growing the strategic women of the same men can only remove equilibria.
TEST(EnumerateAllNe, MoreStrategicWomenFewerEquilibria) {
  Rng rng(59);
  for (int t = 0; t < 30; ++t) {
    const auto n = 2 + rng.below(3);
    auto inst = testing::random_instance(n, rng);
    std::vector<Pair> small, big;
    const auto k = 1 + rng.below(2);
    for (std::size_t i = 0; i < k; ++i) {
      const auto m = static_cast<AgentId>(rng.below(n));
      const auto w = static_cast<AgentId>(rng.below(n));
      small.emplace_back(m, w);
      big.emplace_back(m, w);
      big.emplace_back(m, static_cast<AgentId>(rng.below(n)));
    }
    std::set<std::vector<PreferenceList>> ne_small, ne_big;
    for (const auto& ne : enumerate_all_ne(inst, StrategicPairs(n, small))) ne_small.insert(ne.profile.reports());
    for (const auto& ne : enumerate_all_ne(inst, StrategicPairs(n, big))) ne_big.insert(ne.profile.reports());
    ASSERT_TRUE(std::includes(ne_small.begin(), ne_small.end(), ne_big.begin(), ne_big.end()));
  }
}

}  // namespace
}  // namespace matchgame
