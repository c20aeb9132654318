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

#include <fstream>

#include "csgcheck/error.hpp"
#include "csgcheck/game_json.hpp"
#include "csgcheck/json_writer.hpp"
#include "support.hpp"

namespace csg {
namespace {

const char* kMinimal =
    "csg player p1 m1 endplayer module m1 x:[0..1] init 0; [a] x=0 -> 1:(x'=1); endmodule";

TEST(ParseModel, MinimalProgram) {
  auto ast = parse_model(kMinimal);
  ASSERT_EQ(ast.players.size(), 1u);
  ASSERT_EQ(ast.modules.size(), 1u);
  EXPECT_EQ(ast.modules[0].commands.size(), 1u);
  auto m = elaborate(ast);
  ASSERT_EQ(m.game.num_states(), 2);
  const auto& c = m.game.choices[m.game.initial];
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(m.game.action_names[0][c[0].joint[0]], "a");
  EXPECT_EQ(c[0].successors, (std::vector<Successor>{{1, 1.0}}));
}

TEST(ParseModel, SyntaxErrorsCarryPositions) {
  try {
    parse_model("csg player p1 m1 endplayer module m1 x:[0..1] init 0;");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_NE(std::string(e.what()).find("end of input"), std::string::npos);
  }
  EXPECT_THROW(parse_model("csg module m x:[0..1]; [a] x=0 -> (x'=1) endmodule"), ParseError);
  EXPECT_THROW(parse_model("csg module m x:[0..1]; endmodule module n x:[0..1]; endmodule"), ParseError);
}

TEST(Elaborate, RuntimeErrors) {
  EXPECT_THROW(elaborate(parse_model("csg player p m endplayer module m x:[0..1] init 0; [a] true -> (x'=x+1); "
                                     "endmodule")),
               ElaborationError);
  EXPECT_THROW(elaborate(parse_model("csg player p m endplayer module m x:[0..1] init 0; [a] true -> 1.5:(x'=1) + "
                                     "-0.5:(x'=0); endmodule")),
               ElaborationError);
  // Two players writing one variable in the same step.
  EXPECT_THROW(elaborate(parse_model("csg player p m endplayer player q n endplayer "
                                     "module m x:[0..1] init 0; [a] true -> (x'=1); endmodule "
                                     "module n y:[0..1] init 0; [b] true -> (x'=0); endmodule")),
               ElaborationError);
  EXPECT_THROW(elaborate(parse_model("csg const int N; player p m endplayer module m x:[0..N] init 0; "
                                     "[a] true -> true; endmodule")),
               ElaborationError);
}

TEST(Elaborate, BindingsOverrideConstants) {
  auto small = testing::load_fixture("aloha2.csg", {{"D", "2"}, {"bmax", "1"}});
  auto big = testing::load_fixture("aloha2.csg");
  EXPECT_LT(small.game.num_states(), big.game.num_states());
  EXPECT_THROW(testing::load_fixture("aloha2.csg", {{"D", "two"}}), InputError);
}

TEST(Elaborate, MatchingPenniesCollapsesOutcomes) {
  auto m = testing::load_fixture("matching_pennies.csg");
  EXPECT_EQ(m.game.num_states(), 3);
  EXPECT_EQ(m.game.num_choices(m.game.initial), 4);
}

TEST(Elaborate, Deterministic) {
  const std::string text = read_file(testing::model_path("aloha3.csg"));
  auto a = export_game(elaborate(parse_model(text)).game);
  auto b = export_game(elaborate(parse_model(text)).game);
  EXPECT_EQ(a, b);
}

TEST(Elaborate, EveryStateIsReachable) {
  for (const char* name : {"matching_pennies.csg", "intersection.csg", "aloha2.csg", "aloha3.csg"}) {
    auto g = testing::load_fixture(name).game;
    std::vector<char> seen(g.num_states(), 0);
    std::vector<int> stack{g.initial};
    seen[g.initial] = 1;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      for (const auto& c : g.choices[s]) {
        for (const auto& t : c.successors) {
          if (!seen[t.state]) {
            seen[t.state] = 1;
            stack.push_back(t.state);
          }
        }
      }
    }
    for (int s = 0; s < g.num_states(); ++s) EXPECT_TRUE(seen[s]) << name << " " << g.state_names[s];
  }
}

TEST(Elaborate, StateCountsMatchHandExpansion) {
  auto counts = nlohmann::json::parse(read_file(std::string(CSG_ORACLES_DIR) + "/state_counts.json"));
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    auto parts = split_whitespace(it.key());
    ConstantBindings bindings;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto eq = parts[i].find('=');
      bindings[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
    }
    EXPECT_EQ(testing::load_fixture(parts[0], bindings).game.num_states(), it.value().get<int>()) << it.key();
  }
}

TEST(PrintModel, RoundTripsTheCorpus) {
  for (const char* name : {"matching_pennies.csg", "intersection.csg", "aloha2.csg", "aloha3.csg"}) {
    auto ast = parse_model(read_file(testing::model_path(name)));
    auto printed = print_model(ast);
    EXPECT_EQ(parse_model(printed), ast) << name;
    EXPECT_EQ(print_model(parse_model(printed)), printed) << name;
  }
}

TEST(PrintModel, RoundTripsGeneratedPrograms) {
  testing::Gen gen(99);
  for (int trial = 0; trial < 40; ++trial) {
    std::string text = "csg\nconst int K = " + std::to_string(gen.uniform_int(1, 4)) + ";\n";
    text += "player p m endplayer\nmodule m\n  x : [0..K] init 0;\n  b : bool init false;\n";
    const int commands = gen.uniform_int(1, 4);
    for (int c = 0; c < commands; ++c) {
      int lo = gen.uniform_int(0, 3);
      text += "  [a" + std::to_string(c) + "] x>=" + std::to_string(lo) + (gen.coin(0.5) ? " & !b" : " | b") +
              " -> 0.25:(x'=min(x+1,K)) + 0.75:(b'=!b)&(x'=max(x-" + std::to_string(c) + ",0));\n";
    }
    text += "endmodule\nrewards \"r\"\n  x>0 : x*2;\n  [a0] true : 1.5;\nendrewards\nlabel \"top\" = x=K;\n";
    auto ast = parse_model(text);
    EXPECT_EQ(parse_model(print_model(ast)), ast) << text;
    EXPECT_GE(elaborate(ast).game.num_states(), 1);
  }
}

}  // namespace
}  // namespace csg
