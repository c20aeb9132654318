// Copyright 2026 The csgcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "csgcheck/equilibria.hpp"
#include "csgcheck/error.hpp"
#include "support.hpp"

namespace csg {
namespace {

NormalFormGame intersection() { return parse_nfg_table(read_file(testing::model_path("intersection.nfg"))); }
NormalFormGame pennies() { return parse_nfg_table(read_file(testing::model_path("matching_pennies.nfg"))); }

std::size_t profile(const NormalFormGame& g, std::vector<int> joint) { return g.index(joint); }

TEST(BestResponse, PureReplies) {
  auto g = pennies();
  auto br = best_response_value(g, 0, {{0.5, 0.5}, {1.0, 0.0}});
  EXPECT_DOUBLE_EQ(br.value, 1.0);
  EXPECT_EQ(br.action, 0);
  auto car = intersection();
  // yld = 1, pro = 0 for every car in this table.
  auto r = best_response_value(car, 0, {{1, 0}, {0, 1}, {1, 0}});
  EXPECT_DOUBLE_EQ(r.value, 5.0);
  EXPECT_EQ(r.action, 0);
}

TEST(Certification, NashAndCorrelatedChecks) {
  auto g = pennies();
  EXPECT_TRUE(check_epsilon_ne(g, {{0.5, 0.5}, {0.5, 0.5}}, 1e-9));
  EXPECT_FALSE(check_epsilon_ne(g, {{1, 0}, {1, 0}}, 0.5));
  EXPECT_NEAR(nash_gain(g, {{1, 0}, {1, 0}}), 2.0, 1e-12);
  auto car = intersection();
  EXPECT_TRUE(check_epsilon_ne(car, {{0, 1}, {3.0 / 22, 19.0 / 22}, {3.0 / 202, 199.0 / 202}}, 1e-9));
  JointDistribution j(8, 0.0);
  j[profile(car, {0, 1, 0})] = 0.5;
  j[profile(car, {1, 0, 1})] = 0.5;
  EXPECT_TRUE(check_ce(car, j, 1e-9));
}

TEST(FindNe, MatchingPenniesIsUniform) {
  auto r = find_ne(pennies(), Criterion::kSocialWelfare);
  EXPECT_NEAR(r.values[0], 0.0, 1e-9);
  EXPECT_NEAR(r.profile[0][0], 0.5, 1e-9);
  EXPECT_NEAR(r.profile[1][0], 0.5, 1e-9);
}

TEST(FindNe, IntersectionWelfareAndFairness) {
  auto sw = find_ne(intersection(), Criterion::kSocialWelfare);
  EXPECT_NEAR(sw.values[0], 5, 1e-6);
  EXPECT_NEAR(sw.values[1], -5, 1e-6);
  EXPECT_NEAR(sw.values[2], 5, 1e-6);
  auto sf = find_ne(intersection(), Criterion::kSocialFairness);
  EXPECT_NEAR(sf.profile[0][1], 1.0, 1e-4);
  EXPECT_NEAR(sf.profile[1][1], 0.863636, 1e-4);
  EXPECT_NEAR(sf.profile[2][1], 0.985148, 1e-4);
  EXPECT_NEAR(sf.values[0], -9.254050, 1e-4);
  EXPECT_NEAR(sf.values[1], -9.925742, 1e-4);
  EXPECT_NEAR(sf.values[2], -9.318182, 1e-4);
}

TEST(FindCe, IntersectionWelfareAndFairness) {
  auto car = intersection();
  auto sw = find_ce(car, Criterion::kSocialWelfare);
  EXPECT_NEAR(sw.values[0], 5, 1e-6);
  EXPECT_NEAR(sw.values[1], -5, 1e-6);
  auto sf = find_ce(car, Criterion::kSocialFairness);
  for (double v : sf.values) EXPECT_NEAR(v, 0.0, 1e-6);
  EXPECT_NEAR(sf.joint[profile(car, {0, 1, 0})], 0.5, 1e-6);
  EXPECT_NEAR(sf.joint[profile(car, {1, 0, 1})], 0.5, 1e-6);
}

TEST(FindEquilibria, ModifiedIntersection) {
  auto car = intersection();
  car.set_utility(profile(car, {0, 0, 0}), 1, -4.5);
  auto swne = find_ne(car, Criterion::kSocialWelfare);
  EXPECT_NEAR(swne.values[0], -5, 1e-6);
  EXPECT_NEAR(swne.values[1], 5, 1e-6);
  EXPECT_NEAR(swne.values[2], -5, 1e-6);
  // (pro1, yld2, pro3) is no longer a correlated equilibrium on its own;
  // reference values from an independent LP solver.
  auto swce = find_ce(car, Criterion::kSocialWelfare);
  EXPECT_NEAR(swce.values[0], 4.994927, 1e-5);
  EXPECT_NEAR(swce.values[1], -4.999950, 1e-5);
  EXPECT_NEAR(swce.values[2], 4.999950, 1e-5);
  EXPECT_GT(swce.joint[profile(car, {0, 1, 0})], 0.99);
  auto sfne = find_ne(car, Criterion::kSocialFairness);
  EXPECT_NEAR(sfne.values[0], -9.254050, 1e-4);
  EXPECT_NEAR(sfne.values[1], -9.925742, 1e-4);
}

TEST(FindEquilibria, SocialCostIsNegatedWelfare) {
  auto car = intersection();
  auto neg = negate_for_social_cost(car);
  for (auto kind : {EquilibriumKind::kNash, EquilibriumKind::kCorrelated}) {
    auto sc = find_equilibrium(car, kind, Criterion::kSocialWelfare, Direction::kMin);
    auto sw = find_equilibrium(neg, kind, Criterion::kSocialWelfare, Direction::kMax);
    ASSERT_EQ(sc.values.size(), sw.values.size());
    for (std::size_t i = 0; i < sc.values.size(); ++i) EXPECT_NEAR(sc.values[i], -sw.values[i], 1e-9);
  }
}

TEST(FindEquilibria, OnePlayerPicksItsBestAction) {
  auto g = parse_nfg_table("a : 1\nb : 3\nc : 2\n");
  auto r = find_ne(g, Criterion::kSocialWelfare);
  EXPECT_DOUBLE_EQ(r.values[0], 3.0);
  auto c = find_ce(g, Criterion::kSocialFairness);
  EXPECT_NEAR(c.values[0], 3.0, 1e-9);
}

TEST(FindEquilibria, NearlyTiedUtilitiesStayFeasible) {
  // Local games from value iteration can differ only by round-off.
  auto g = parse_nfg_table(
      "send1 - - : 0.93750000005 0.15562500001250001 0.3581250000375\n"
      "wait1 - - : 0.37500000050000004 0.037500000125 0.037500000375\n");
  auto r = find_ce(g, Criterion::kSocialFairness);
  EXPECT_NEAR(r.joint[0], 1.0, 1e-9);
}

// Property: every result passes its own deviation check; SWCE welfare is at
// least SWNE welfare.
TEST(FindEquilibria, RandomGamesCertify) {
  testing::Gen gen(2024);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = testing::random_nfg(gen, gen.uniform_int(2, 3), 3);
    for (auto crit : {Criterion::kSocialWelfare, Criterion::kSocialFairness}) {
      auto ne = find_ne(g, crit);
      EXPECT_TRUE(check_epsilon_ne(g, ne.profile, 1e-6)) << format_nfg_table(g);
      auto ce = find_ce(g, crit);
      EXPECT_TRUE(check_ce(g, ce.joint, 1e-6)) << format_nfg_table(g);
      if (crit == Criterion::kSocialWelfare) EXPECT_GE(welfare(ce.values), welfare(ne.values) - 1e-6);
      else EXPECT_LE(spread(ce.values), spread(ne.values) + 1e-6);
    }
  }
}

}  // namespace
}  // namespace csg
