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

#include "csgcheck/checker.hpp"
#include "csgcheck/error.hpp"
#include "csgcheck/strategy_eval.hpp"
#include "support.hpp"

namespace csg {
namespace {

struct Synthesized {
  ElaboratedModel model;
  Property property;
  CheckResult result;
  CoalitionGame cg;
  std::vector<CoalitionObjective> objectives;
};

Synthesized synthesize(const std::string& fixture, const std::string& text, const ConstantBindings& b = {}) {
  Synthesized s;
  s.model = testing::load_fixture(fixture, b);
  s.property = resolve_property(parse_property(text), s.model.scope);
  Checker checker(s.model.game);
  s.result = checker.check(s.property);
  const GameFormula* g = s.property.root_game();
  s.cg = build_coalition_game(s.model.game, resolve_coalitions(*g, s.model.game));
  const Direction dir = g->numeric ? g->direction : g->effective_direction();
  for (std::size_t i = 0; i < g->objectives.size(); ++i) {
    s.objectives.push_back({static_cast<int>(i), checker.objective_spec(g->objectives[i]), dir});
  }
  if (!g->equilibrium && s.cg.game.num_players() == 2) {
    s.objectives.push_back({1, s.objectives[0].spec, dir == Direction::kMax ? Direction::kMin : Direction::kMax});
  }
  return s;
}

TEST(InducedChain, MatchingPenniesUniform) {
  auto s = synthesize("matching_pennies.csg", "<<p1>> Pmax=? [ X \"win1\" ]");
  ASSERT_TRUE(s.result.strategy.has_value());
  auto chain = induce_chain(s.cg.game, *s.result.strategy);
  EXPECT_EQ(chain.size(), 3);
  EXPECT_EQ(chain.state[chain.initial], s.model.game.initial);
  EXPECT_NEAR(evaluate_exact(chain, s.cg.game, s.objectives[0].spec, *s.result.strategy), 0.5, 1e-9);
}

TEST(InducedChain, MissingEntryIsAnInputError) {
  auto s = synthesize("matching_pennies.csg", "<<p1>> Pmax=? [ X \"win1\" ]");
  auto st = *s.result.strategy;
  st.entries.clear();
  EXPECT_THROW(induce_chain(s.cg.game, st), InputError);
}

TEST(ExactValues, MatchCheckerAcrossFixtures) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"aloha2.csg", "<<usr1>> Pmax=? [ F (\"sent1\" & t<=D) ]"},
      {"aloha2.csg", "<<usr1>> Pmax=? [ F<=D \"sent1\" ]"},
      {"aloha2.csg", "<<usr1>> R{\"time\"}min=? [ F \"sent1\" ]"},
      {"aloha2.csg", "<<usr1:usr2>>(NE,SW)max=? (P[ F<=D \"sent1\" ] + P[ F<=D \"sent2\" ])"},
      {"aloha2.csg", "<<usr1:usr2>>(CE,SW)min=? (R{\"time\"}[ F \"sent1\" ] + R{\"time\"}[ F \"sent2\" ])"},
      {"intersection.csg", "<<c1:c2:c3>>(CE,SF)max=? (R{\"u1\"}[ C<=1 ] + R{\"u2\"}[ C<=1 ] + R{\"u3\"}[ C<=1 ])"},
  };
  for (const auto& [fixture, text] : cases) {
    SCOPED_TRACE(text);
    auto s = synthesize(fixture, text);
    ASSERT_TRUE(s.result.strategy.has_value());
    auto chain = induce_chain(s.cg.game, *s.result.strategy);
    const std::size_t shown = s.property.root_game()->equilibrium ? s.objectives.size() : 1;
    for (std::size_t i = 0; i < shown; ++i) {
      double exact = evaluate_exact(chain, s.cg.game, s.objectives[i].spec, *s.result.strategy);
      double expected = s.result.values.empty() ? s.result.value : s.result.values[i];
      EXPECT_NEAR(exact, expected, 1e-5 * std::max(1.0, std::abs(expected)));
    }
    auto rep = best_response_check(s.cg.game, *s.result.strategy, s.objectives, 1e-4);
    EXPECT_TRUE(rep.certified);
  }
}

TEST(Simulation, ConvergesToExactValue) {
  auto s = synthesize("matching_pennies.csg", "<<p1>> Pmax=? [ X \"win1\" ]");
  auto chain = induce_chain(s.cg.game, *s.result.strategy);
  auto sim = simulate(chain, s.cg.game, s.objectives[0].spec, 100000, 7);
  EXPECT_EQ(sim.runs, 100000);
  EXPECT_NEAR(sim.mean, 0.5, 0.01);
  EXPECT_GT(sim.half_width, 0.0);
  EXPECT_LT(sim.half_width, 0.01);
  EXPECT_EQ(sim.truncated, 0);
}

TEST(Simulation, RewardEstimateWithinInterval) {
  auto s = synthesize("aloha2.csg", "<<usr1>> R{\"time\"}min=? [ F \"sent1\" ]");
  auto chain = induce_chain(s.cg.game, *s.result.strategy);
  double exact = evaluate_exact(chain, s.cg.game, s.objectives[0].spec, *s.result.strategy);
  auto sim = simulate(chain, s.cg.game, s.objectives[0].spec, 20000, 11);
  EXPECT_LT(std::abs(sim.mean - exact), 4.0 * sim.half_width + 1e-9);
}

TEST(Simulation, SeedsAreReproducibleAndThreadIndependent) {
  auto s = synthesize("aloha2.csg", "<<usr1>> Pmax=? [ F<=D \"sent1\" ]");
  auto chain = induce_chain(s.cg.game, *s.result.strategy);
  auto a = simulate(chain, s.cg.game, s.objectives[0].spec, 2000, 42);
  auto b = simulate(chain, s.cg.game, s.objectives[0].spec, 2000, 42, 100000, 4);
  auto c = simulate(chain, s.cg.game, s.objectives[0].spec, 2000, 43);
  EXPECT_EQ(a.outcomes, b.outcomes);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_NE(a.outcomes, c.outcomes);
  EXPECT_EQ(run_seed(42, 0), run_seed(42, 0));
  EXPECT_NE(run_seed(42, 0), run_seed(42, 1));
  EXPECT_NE(run_seed(42, 0), run_seed(43, 0));
}

TEST(BestResponse, PureStrategyInPenniesIsExploitable) {
  auto s = synthesize("matching_pennies.csg", "<<p1>> Pmax=? [ X \"win1\" ]");
  auto st = *s.result.strategy;
  auto rep = best_response_check(s.cg.game, st, s.objectives, 1e-4);
  EXPECT_TRUE(rep.certified);
  for (auto& e : st.entries) {
    if (e.state == s.model.game.initial) e.local[0] = {1.0, 0.0};
  }
  rep = best_response_check(s.cg.game, st, s.objectives, 1e-4);
  EXPECT_FALSE(rep.certified);
  ASSERT_GE(rep.worst, 0);
  EXPECT_EQ(s.objectives[rep.worst].coalition, 1);
  EXPECT_NEAR(rep.gains[rep.worst], 0.5, 1e-6);
  EXPECT_EQ(rep.worst_state, s.model.game.state_names[s.model.game.initial]);
}

TEST(BestResponse, TamperedEquilibriumIsViolated) {
  auto s = synthesize("intersection.csg",
                      "<<c1:c2:c3>>(NE,SW)max=? (R{\"u1\"}[ C<=1 ] + R{\"u2\"}[ C<=1 ] + R{\"u3\"}[ C<=1 ])");
  auto st = *s.result.strategy;
  EXPECT_TRUE(best_response_check(s.cg.game, st, s.objectives, 1e-4).certified);
  // Swap one driver's mixture: it now plays the other action.
  for (auto& e : st.entries) {
    if (e.state == s.model.game.initial) std::reverse(e.local[1].begin(), e.local[1].end());
  }
  auto rep = best_response_check(s.cg.game, st, s.objectives, 1e-4);
  EXPECT_FALSE(rep.certified);
  EXPECT_GT(rep.gains[rep.worst], 1e-4);
}

TEST(StrategyJson, RoundTrip) {
  for (const std::string text : {"<<usr1>> Pmax=? [ F<=D \"sent1\" ]",
                                 "<<usr1:usr2>>(CE,SW)min=? (R{\"time\"}[ F \"sent1\" ] + R{\"time\"}[ F \"sent2\" ])",
                                 "<<usr1:usr2>>(NE,SW)max=? (P[ F \"sent1\" ] + P[ F \"sent2\" ])"}) {
    SCOPED_TRACE(text);
    auto s = synthesize("aloha2.csg", text);
    auto dumped = export_strategy(*s.result.strategy, s.cg.game);
    auto back = import_strategy(dumped, s.cg.game);
    EXPECT_EQ(export_strategy(back, s.cg.game), dumped);
    EXPECT_EQ(back.entries.size(), s.result.strategy->entries.size());
    EXPECT_EQ(back.memory_kind, s.result.strategy->memory_kind);
  }
}

TEST(StrategyJson, SchemaErrors) {
  auto s = synthesize("matching_pennies.csg", "<<p1>> Pmax=? [ X \"win1\" ]");
  EXPECT_THROW(import_strategy("not json", s.cg.game), InputError);
  EXPECT_THROW(import_strategy("{}", s.cg.game), InputError);
  auto doc = nlohmann::json::parse(export_strategy(*s.result.strategy, s.cg.game));
  auto bad_kind = doc;
  bad_kind["kind"] = "mystery";
  EXPECT_THROW(import_strategy(bad_kind.dump(), s.cg.game), InputError);
  auto bad_state = doc;
  bad_state["entries"][0]["state"] = 99;
  EXPECT_THROW(import_strategy(bad_state.dump(), s.cg.game), InputError);
  auto bad_player = doc;
  bad_player["coalitions"][0][0] = "nobody";
  EXPECT_THROW(import_strategy(bad_player.dump(), s.cg.game), InputError);
}

}  // namespace
}  // namespace csg
