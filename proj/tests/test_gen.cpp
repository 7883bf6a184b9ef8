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

#include <boost/math/distributions/chi_squared.hpp>
#include <map>

#include "oracles.hpp"
#include "test_util.hpp"

namespace matchgame {
namespace {

// Pearson chi-square p-value of observed counts against expected
// probabilities over the same keys.
double chi_square_p(const std::map<std::vector<AgentId>, long>& counts,
                    const std::map<std::vector<AgentId>, double>& pmf, long total) {
  double stat = 0;
  for (const auto& [key, p] : pmf) {
    const double expected = p * static_cast<double>(total);
    const auto it = counts.find(key);
    const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    stat += (observed - expected) * (observed - expected) / expected;
  }
  boost::math::chi_squared dist(static_cast<double>(pmf.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

std::vector<AgentId> vec(const PreferenceList& l) { return {l.begin(), l.end()}; }

TEST(Kendall, Examples) {
  const PreferenceList u({0, 1, 2});
  EXPECT_EQ(kendall_tau(u, u), 0);
  EXPECT_EQ(kendall_tau(u, PreferenceList({2, 1, 0})), 3);
  EXPECT_EQ(kendall_tau(u, PreferenceList({1, 0, 2})), 1);
  EXPECT_THROW(kendall_tau(u, PreferenceList({0, 1})), InputError);
}

TEST(Kendall, MetricOnAllTriplesN4) {
  const auto perms = oracle::all_permutations(4);
  std::vector<PreferenceList> lists;
  for (const auto& p : perms) lists.emplace_back(p);
  for (std::size_t a = 0; a < lists.size(); ++a)
    for (std::size_t b = 0; b < lists.size(); ++b) {
      const auto dab = kendall_tau(lists[a], lists[b]);
      ASSERT_EQ(dab, oracle::kendall(perms[a], perms[b]));
      ASSERT_EQ(dab, kendall_tau(lists[b], lists[a]));
      ASSERT_EQ(dab == 0, a == b);
      ASSERT_LE(dab, 6);
      for (std::size_t c = 0; c < lists.size(); ++c)
        ASSERT_LE(dab, kendall_tau(lists[a], lists[c]) + kendall_tau(lists[c], lists[b]));
    }
}

TEST(Rng, Deterministic) {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
  Rng c(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(c.below(7), 7u);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

// std::mt19937_64 output is fixed by the standard; 10000th draw for the
// default seed is given there.
TEST(Rng, EngineIsStandardMt64) {
  Rng r(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = r.next();
  EXPECT_EQ(x, 9981545732273789042ULL);
}

TEST(Mallows, PhiZeroIsCenter) {
  Rng rng(61);
  for (int i = 0; i < 1000; ++i) {
    const auto center = uniform_ranking(6, rng);
    ASSERT_EQ(mallows_sample({center, 0.0}, rng), center);
  }
}

TEST(Mallows, RejectsBadPhi) {
  Rng rng(62);
  EXPECT_THROW(mallows_sample({PreferenceList::identity(3), 1.5}, rng), InputError);
  EXPECT_THROW(mallows_sample({PreferenceList::identity(3), -0.1}, rng), InputError);
  EXPECT_THROW(Model::mallows(0.5, 2.0), InputError);
}

TEST(Mallows, CenterProbabilityHalf) {
  const auto pmf = oracle::mallows_pmf({0, 1, 2}, 0.5);
  EXPECT_NEAR(pmf.at({0, 1, 2}), 1.0 / 2.625, 1e-12);
  Rng rng(63);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += mallows_sample({PreferenceList({0, 1, 2}), 0.5}, rng) == PreferenceList({0, 1, 2});
  EXPECT_NEAR(hits / 10000.0, 0.38095, 0.03);
}

// 100k draws per (n, phi, center) against the exact pmf.
TEST(Mallows, ChiSquareAgainstExactPmf) {
  Rng rng(64);
  for (std::size_t n = 2; n <= 5; ++n)
    for (double phi : {0.2, 0.5, 0.8, 1.0}) {
      const auto center = uniform_ranking(n, rng);
      const auto pmf = oracle::mallows_pmf(vec(center), phi);
      std::map<std::vector<AgentId>, long> counts;
      const long total = 100000;
      for (long i = 0; i < total; ++i) ++counts[vec(mallows_sample({center, phi}, rng))];
      EXPECT_GT(chi_square_p(counts, pmf, total), 1e-3) << "n=" << n << " phi=" << phi;
    }
}

TEST(GenerateInstance, GoldenImpartialN5) {
  Rng rng(42);
  const auto inst = generate_instance(5, Model::impartial(), rng);
  EXPECT_EQ(inst, load_instance_file(testing::data_path("golden_impartial_n5_seed42.json")));
}

TEST(GenerateInstance, SameSeedSameInstance) {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    Rng a(seed), b(seed);
    EXPECT_EQ(generate_instance(9, Model::mallows(0.3, 0.7), a),
              generate_instance(9, Model::mallows(0.3, 0.7), b));
  }
}

TEST(GenerateInstance, MallowsZeroSharesCenters) {
  Rng rng(65);
  CentralRankings c;
  const auto inst = generate_instance(7, Model::mallows(0, 0), rng, &c);
  for (AgentId i = 0; i < 7; ++i) {
    EXPECT_EQ(inst.man(i), c.men);
    EXPECT_EQ(inst.woman(i), c.women);
  }
}

TEST(GenerateInstance, MallowsOneLooksImpartial) {
  Rng rng(66);
  std::map<std::vector<AgentId>, long> counts;
  long total = 0;
  while (total < 10000) {
    const auto inst = generate_instance(3, Model::mallows(1, 1), rng);
    for (const auto& l : inst.men()) ++counts[vec(l)], ++total;
  }
  std::map<std::vector<AgentId>, double> uniform;
  for (const auto& p : oracle::all_permutations(3)) uniform[p] = 1.0 / 6.0;
  EXPECT_GT(chi_square_p(counts, uniform, total), 0.01);
}

TEST(GenerateInstance, Errors) {
  Rng rng(67);
  EXPECT_THROW(generate_instance(0, Model::impartial(), rng), InputError);
  EXPECT_EQ(generate_instance(4, Model::identity_top(), rng), identity_top_instance(4));
}

}  // namespace
}  // namespace matchgame
