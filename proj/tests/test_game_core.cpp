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

#include "csgcheck/error.hpp"
#include "csgcheck/game_json.hpp"
#include "support.hpp"

namespace csg {
namespace {

using testing::Gen;

TEST(NormalFormGame, MixedRadixIndexing) {
  NormalFormGame g({{"a", "b"}, {"x", "y", "z"}});
  EXPECT_EQ(g.num_profiles(), 6u);
  std::vector<int> joint{1, 2};
  EXPECT_EQ(g.index(joint), 5u);
  EXPECT_EQ(g.decode(4), (std::vector<int>{1, 1}));
  EXPECT_EQ(g.action_of(4, 0), 1);
  EXPECT_EQ(g.with_action(4, 1, 0), 3u);
}

TEST(NormalFormGame, IndexDecodeRoundTrip) {
  Gen gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = testing::random_nfg(gen, gen.uniform_int(1, 4), 4);
    for (std::size_t k = 0; k < g.num_profiles(); ++k) {
      auto joint = g.decode(k);
      EXPECT_EQ(g.index(joint), k);
    }
  }
}

TEST(NormalFormGame, TableRoundTrip) {
  auto g = parse_nfg_table(read_file(testing::model_path("intersection.nfg")));
  EXPECT_EQ(g.num_players(), 3);
  EXPECT_EQ(g.num_profiles(), 8u);
  std::vector<int> pyp{0, 1, 0};
  EXPECT_DOUBLE_EQ(g.utility(g.index(pyp), 1), -5.0);
  EXPECT_EQ(parse_nfg_table(format_nfg_table(g)), g);
}

TEST(NormalFormGame, TableErrors) {
  EXPECT_THROW(parse_nfg_table("a b 1 2\n"), ParseError);
  EXPECT_THROW(parse_nfg_table("a b : 1\n"), ParseError);
  EXPECT_THROW(parse_nfg_table("a b : 1 x\n"), ParseError);
  EXPECT_THROW(parse_nfg_table("a : 1\na b : 1 2\n"), ParseError);
}

TEST(NormalFormGame, ExpectedUtilitiesOfProduct) {
  auto g = parse_nfg_table(read_file(testing::model_path("matching_pennies.nfg")));
  StrategyProfile uniform{{0.5, 0.5}, {0.5, 0.5}};
  auto u = expected_utilities(g, uniform);
  EXPECT_NEAR(u[0], 0.0, 1e-12);
  auto joint = product_distribution(g, uniform);
  for (double p : joint) EXPECT_DOUBLE_EQ(p, 0.25);
  EXPECT_THROW(validate_profile(g, {{0.7, 0.7}, {0.5, 0.5}}), InputError);
}

TEST(Csg, RandomGamesAreValid) {
  Gen gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::random_csg(gen, {});
    EXPECT_TRUE(validate_csg(g).empty());
  }
}

TEST(Csg, ValidationReportsBrokenDistribution) {
  Gen gen(5);
  auto g = testing::random_csg(gen, {});
  g.choices[0][0].successors[0].prob *= 0.5;
  auto diags = validate_csg(g);
  ASSERT_FALSE(diags.empty());
  EXPECT_EQ(diags[0].rule, "distribution sum");
  EXPECT_THROW(require_valid(g), InputError);
}

TEST(Csg, AvailableActionsIntersectPlayerSet) {
  auto m = testing::load_fixture("aloha2.csg");
  const Csg& g = m.game;
  const int u1 = g.find_player("usr1");
  auto names = [&](int s) {
    std::vector<std::string> out;
    for (int a : available_actions(g, s, u1)) out.push_back(g.action_names[u1][a]);
    return out;
  };
  EXPECT_EQ(names(g.initial), (std::vector<std::string>{"send1", "wait1"}));
  // Once sent, user 1 only idles.
  int sent = -1;
  for (int s = 0; s < g.num_states() && sent < 0; ++s) {
    if (g.has_label(s, g.find_label("sent1"))) sent = s;
  }
  ASSERT_GE(sent, 0);
  EXPECT_EQ(available_actions(g, sent, u1), (std::vector<int>{kIdle}));
}

TEST(CoalitionGame, MergesPlayersAndKeepsOrigin) {
  auto m = testing::load_fixture("aloha3.csg");
  const Csg& g = m.game;
  auto cg = build_coalition_game(g, {{0}, {1, 2}});
  EXPECT_EQ(cg.game.num_players(), 2);
  EXPECT_EQ(cg.game.player_names[1], "usr2,usr3");
  EXPECT_TRUE(validate_csg(cg.game).empty());
  for (int s = 0; s < g.num_states(); ++s) {
    ASSERT_EQ(cg.game.num_choices(s), g.num_choices(s));
    for (int k = 0; k < cg.game.num_choices(s); ++k) {
      EXPECT_EQ(cg.game.choices[s][k].successors, g.choices[s][cg.origin[s][k]].successors);
    }
  }
  EXPECT_THROW(build_coalition_game(g, {{0}, {0, 1}}), InputError);
  EXPECT_THROW(build_coalition_game(g, {{7}}), InputError);
}

TEST(CoalitionGame, RemainderIsAppended) {
  auto m = testing::load_fixture("aloha3.csg");
  auto cg = build_coalition_game(m.game, {{1}});
  ASSERT_EQ(cg.coalitions.size(), 2u);
  EXPECT_EQ(cg.coalitions[1], (std::vector<int>{0, 2}));
}

TEST(LocalNfg, CombinesImmediateAndContinuation) {
  auto m = testing::load_fixture("matching_pennies.csg");
  const Csg& g = m.game;
  std::vector<std::vector<double>> cont(g.num_states(), std::vector<double>(2, 0.0));
  cont[g.find_state("(s=1)")] = {1.0, 0.0};
  cont[g.find_state("(s=2)")] = {0.0, 1.0};
  auto nfg = local_nfg(g, g.initial, cont);
  ASSERT_EQ(nfg.num_profiles(), 4u);
  EXPECT_DOUBLE_EQ(nfg.utility(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(nfg.utility(1, 1), 1.0);
}

TEST(GameJson, RoundTripsFixturesAndRandomGames) {
  for (const char* name : {"matching_pennies.csg", "intersection.csg", "aloha2.csg"}) {
    auto g = testing::load_fixture(name).game;
    auto text = export_game(g);
    Csg back = import_game(text);
    EXPECT_EQ(export_game(back), text) << name;
    EXPECT_EQ(back.choices, g.choices) << name;
  }
  Gen gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = testing::random_csg(gen, {});
    Csg back = import_game(export_game(g));
    EXPECT_EQ(back.choices, g.choices);
    EXPECT_EQ(back.rewards, g.rewards);
  }
}

TEST(GameJson, RejectsMalformedDocuments) {
  EXPECT_THROW(import_game("{"), InputError);
  EXPECT_THROW(import_game("{\"players\": 3}"), InputError);
}

}  // namespace
}  // namespace csg
