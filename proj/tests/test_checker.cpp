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

#include <cmath>
#include <limits>

#include "csgcheck/checker.hpp"
#include "csgcheck/error.hpp"
#include "csgcheck/matrix_game.hpp"
#include "csgcheck/property.hpp"
#include "support.hpp"

namespace csg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CheckResult run(const Csg& game, const Scope& scope, const std::string& text, CheckOptions opts = {}) {
  Checker checker(game, opts);
  return checker.check(resolve_property(parse_property(text), scope));
}

CheckOptions tight() {
  CheckOptions o;
  o.epsilon = 1e-8;
  return o;
}

TEST(ZeroSum, MatchingPenniesNextValue) {
  auto m = testing::load_fixture("matching_pennies.csg");
  auto r = run(m.game, m.scope, "<<p1>> Pmax=? [ X \"win1\" ]");
  auto oracle = solve_matrix_game({{1, 0}, {0, 1}});
  EXPECT_NEAR(r.value, oracle.value, 1e-9);
  EXPECT_NEAR(r.value, 0.5, 1e-9);
  ASSERT_TRUE(r.strategy.has_value());
  const auto* e = r.strategy->find(m.game.initial, r.strategy->initial_memory);
  ASSERT_NE(e, nullptr);
  EXPECT_NEAR(e->local[0][0], 0.5, 1e-8);
}

TEST(ZeroSum, BoundedQueriesUseThresholdTolerance) {
  auto m = testing::load_fixture("matching_pennies.csg");
  EXPECT_TRUE(run(m.game, m.scope, "<<p1>> P>=0.5 [ F \"win1\" ]").satisfied);
  EXPECT_FALSE(run(m.game, m.scope, "<<p1>> P>0.5 [ F \"win1\" ]").satisfied);
  EXPECT_FALSE(run(m.game, m.scope, "<<p1>> P>=0.51 [ F \"win1\" ]").satisfied);
}

TEST(ZeroSum, CoalitionOfAllPlayersIsAnMdp) {
  auto m = testing::load_fixture("matching_pennies.csg");
  EXPECT_NEAR(run(m.game, m.scope, "<<p1,p2>> Pmax=? [ F \"win1\" ]").value, 1.0, 1e-12);
  EXPECT_NEAR(run(m.game, m.scope, "<<p1,p2>> Pmin=? [ F \"win1\" ]").value, 0.0, 1e-12);
}

TEST(ZeroSum, Prob0AgainstAnOpponent) {
  auto m = testing::load_fixture("aloha2.csg", {{"D", "1"}});
  // User 2 can always collide within one slot.
  auto r = run(m.game, m.scope, "<<usr1>> Pmax=? [ F (\"sent1\" & t<=D) ]");
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  auto cg = build_coalition_game(m.game, {{0}});
  std::vector<char> left(m.game.num_states(), 1), target(m.game.num_states(), 0);
  const int sent1 = m.game.find_label("sent1");
  const int t = m.scope.variables.at("t").first;
  for (int s = 0; s < m.game.num_states(); ++s) target[s] = m.game.has_label(s, sent1) && m.game.valuations[s][t] <= 1;
  auto zero = prob0_max(cg.game, left, target);
  EXPECT_TRUE(zero[m.game.initial]);
}

TEST(ZeroSum, DeadlineValueGrowsWithTheDeadline) {
  double last = -1.0;
  for (int d = 0; d <= 8; ++d) {
    auto m = testing::load_fixture("aloha2.csg", {{"D", std::to_string(d)}});
    double v = run(m.game, m.scope, "<<usr1>> Pmax=? [ F (\"sent1\" & t<=D) ]").value;
    EXPECT_GE(v, last - 1e-12);
    last = v;
  }
  EXPECT_GT(last, 0.9);
}

TEST(ZeroSum, BoundedUntilMatchesDeadlineClock) {
  auto m = testing::load_fixture("aloha2.csg");
  double a = run(m.game, m.scope, "<<usr1>> Pmax=? [ F (\"sent1\" & t<=D) ]").value;
  double b = run(m.game, m.scope, "<<usr1>> Pmax=? [ F<=D \"sent1\" ]").value;
  EXPECT_NEAR(a, b, 1e-12);
}

TEST(ZeroSum, RewardsOutsideAlmostSureSetAreInfinite) {
  auto m = testing::load_fixture("aloha2.csg");
  auto r = run(m.game, m.scope, "<<usr1>> R{\"time\"}min=? [ F \"sent1\" ]", tight());
  EXPECT_TRUE(std::isfinite(r.value));
  auto never = run(m.game, m.scope, "<<usr1>> R{\"time\"}min=? [ F (\"sent1\" & t<=0) ]", tight());
  EXPECT_EQ(never.value, kInf);
}

TEST(ZeroSum, NegativeReachabilityRewardsAreRejected) {
  auto ast = parse_model(
      "csg player p m endplayer module m x:[0..1] init 0; [a] x=0 -> (x'=1); endmodule "
      "rewards \"r\" [a] true : -1; endrewards label \"done\" = x=1;");
  auto m = elaborate(ast);
  EXPECT_THROW(run(m.game, m.scope, "<<p>> R{\"r\"}min=? [ F \"done\" ]"), InputError);
  // Cumulative rewards may be negative.
  EXPECT_NEAR(run(m.game, m.scope, "<<p>> R{\"r\"}min=? [ C<=3 ]").value, -1.0, 1e-12);
}

TEST(ZeroSum, NonConvergenceIsReported) {
  auto m = testing::load_fixture("aloha2.csg");
  CheckOptions o;
  o.max_iters = 2;
  try {
    run(m.game, m.scope, "<<usr1>> R{\"time\"}min=? [ F \"sent1\" ]", o);
    FAIL();
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 2);
    EXPECT_GT(e.residual(), 1e-6);
  }
}

TEST(ZeroSum, SweepsAreMonotoneFromZero) {
  auto m = testing::load_fixture("aloha2.csg");
  CheckOptions o;
  std::vector<double> previous;
  bool monotone = true;
  int sweeps = 0;
  o.on_sweep = [&](const std::vector<double>& v) {
    if (!previous.empty()) {
      for (std::size_t s = 0; s < v.size(); ++s) monotone = monotone && v[s] >= previous[s] - 1e-12;
    }
    previous = v;
    ++sweeps;
  };
  auto r = run(m.game, m.scope, "<<usr1>> Pmax=? [ F \"sent1\" ]", o);
  EXPECT_TRUE(monotone);
  EXPECT_EQ(sweeps, r.iterations);
  EXPECT_LT(r.residual, o.epsilon);
}

TEST(ZeroSum, ThreadCountDoesNotChangeResults) {
  auto m = testing::load_fixture("aloha3.csg");
  CheckOptions one, four;
  four.threads = 4;
  auto a = run(m.game, m.scope, "<<usr1>> R{\"time\"}min=? [ F \"sent1\" ]", one);
  auto b = run(m.game, m.scope, "<<usr1>> R{\"time\"}min=? [ F \"sent1\" ]", four);
  EXPECT_EQ(a.state_values, b.state_values);
}

// Property: the max-coalition value equals the value computed with the
// other coalition as the (minimizing) row player.
TEST(ZeroSum, DeterminacyOnRandomGames) {
  testing::Gen gen(404);
  Scope scope;
  for (int trial = 0; trial < 15; ++trial) {
    testing::RandomGameOptions opt;
    opt.states = gen.uniform_int(3, 30);
    auto g = testing::random_csg(gen, opt);
    auto a = run(g, scope, "<<p1>> Pmax=? [ \"safe\" U \"goal\" ]", tight());
    auto b = run(g, scope, "<<p2>> Pmin=? [ \"safe\" U \"goal\" ]", tight());
    for (int s = 0; s < g.num_states(); ++s) EXPECT_NEAR(a.state_values[0][s], b.state_values[0][s], 1e-7);
    auto c = run(g, scope, "<<p1>> R{\"cost\"}min=? [ F \"goal\" ]", tight());
    auto d = run(g, scope, "<<p2>> R{\"cost\"}max=? [ F \"goal\" ]", tight());
    for (int s = 0; s < g.num_states(); ++s) {
      if (std::isinf(c.state_values[0][s])) {
        EXPECT_EQ(c.state_values[0][s], d.state_values[0][s]);
      } else {
        EXPECT_NEAR(c.state_values[0][s], d.state_values[0][s], 1e-6);
      }
    }
  }
}

TEST(ZeroSum, StrippedOpponentMatchesMdpOracle) {
  testing::Gen gen(505);
  Scope scope;
  for (int trial = 0; trial < 15; ++trial) {
    testing::RandomGameOptions opt;
    opt.states = gen.uniform_int(3, 30);
    opt.stripped = {1};
    auto g = testing::random_csg(gen, opt);
    auto hi = testing::reach_oracle(g, true), lo = testing::reach_oracle(g, false);
    auto a = run(g, scope, "<<p1>> Pmax=? [ \"safe\" U \"goal\" ]", tight());
    auto b = run(g, scope, "<<p1>> Pmin=? [ \"safe\" U \"goal\" ]", tight());
    for (int s = 0; s < g.num_states(); ++s) {
      EXPECT_NEAR(a.state_values[0][s], hi[s], 1e-6);
      EXPECT_NEAR(b.state_values[0][s], lo[s], 1e-6);
    }
  }
}

TEST(StateFormulas, BooleanCombinations) {
  auto m = testing::load_fixture("aloha2.csg");
  Checker checker(m.game);
  auto sat = [&](const std::string& text) {
    return checker.satisfying_states(*resolve_property(parse_property(text), m.scope).formula);
  };
  auto a = sat("<<usr1>> P>=0.5 [ F<=2 \"sent1\" ]");
  auto b = sat("\"sent2\"");
  auto both = sat("<<usr1>> P>=0.5 [ F<=2 \"sent1\" ] & !\"sent2\"");
  for (int s = 0; s < m.game.num_states(); ++s) EXPECT_EQ(both[s], a[s] && !b[s]);
  auto vars = sat("t<=1 | s1=2");
  const int t = m.scope.variables.at("t").first, s1 = m.scope.variables.at("s1").first;
  for (int s = 0; s < m.game.num_states(); ++s) {
    EXPECT_EQ(vars[s], m.game.valuations[s][t] <= 1 || m.game.valuations[s][s1] == 2);
  }
}

TEST(StateFormulas, NestedOperator) {
  auto m = testing::load_fixture("aloha2.csg");
  auto r = run(m.game, m.scope, "<<usr1>> Pmax=? [ F <<usr1,usr2>> P>=1 [ F \"done\" ] ]");
  EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(Equilibria, OneShotIntersection) {
  auto m = testing::load_fixture("intersection.csg");
  auto r = run(m.game, m.scope,
               "<<c1:c2:c3>>(NE,SW)max=? (R{\"u1\"}[ C<=1 ] + R{\"u2\"}[ C<=1 ] + R{\"u3\"}[ C<=1 ])");
  EXPECT_NEAR(r.value, 5.0, 1e-6);
  ASSERT_EQ(r.values.size(), 3u);
  EXPECT_NEAR(r.values[1], -5.0, 1e-6);
}

TEST(Equilibria, FairCorrelatedAlohaIsSymmetric) {
  auto m = testing::load_fixture("aloha2.csg");
  auto sf = run(m.game, m.scope,
                "<<usr1:usr2>>(CE,SF)min=? (R{\"time\"}[ F \"sent1\" ] + R{\"time\"}[ F \"sent2\" ])", tight());
  EXPECT_NEAR(sf.values[0], sf.values[1], 1e-4);
  auto sw = run(m.game, m.scope,
                "<<usr1:usr2>>(CE,SW)min=? (R{\"time\"}[ F \"sent1\" ] + R{\"time\"}[ F \"sent2\" ])", tight());
  EXPECT_LE(sw.value, sf.value + 1e-6);
}

TEST(Equilibria, BoundedSumThreshold) {
  auto m = testing::load_fixture("matching_pennies.csg");
  EXPECT_TRUE(run(m.game, m.scope, "<<p1:p2>>(NE,SW)>=1 (P[ X \"win1\" ] + P[ X \"win2\" ])").satisfied);
  EXPECT_FALSE(run(m.game, m.scope, "<<p1:p2>>(NE,SW)>1.1 (P[ X \"win1\" ] + P[ X \"win2\" ])").satisfied);
}

TEST(Equilibria, RejectsMixedHorizonsAndThreeUnboundedCoalitions) {
  auto m = testing::load_fixture("aloha3.csg");
  EXPECT_THROW(run(m.game, m.scope, "<<usr1:usr2:usr3>>(NE,SW)max=? (P[ F \"sent1\" ] + P[ F \"sent2\" ] + P[ F \"sent3\" ])"),
               InputError);
  EXPECT_THROW(run(m.game, m.scope, "<<usr1:usr2,usr3>>(NE,SW)max=? (P[ F<=3 \"sent1\" ] + P[ F \"sent2\" ])"),
               InputError);
}

}  // namespace
}  // namespace csg
