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
#include "csgcheck/property.hpp"
#include "support.hpp"

namespace csg {
namespace {

const GameFormula& root(const Property& p) {
  EXPECT_NE(p.root_game(), nullptr);
  return *p.root_game();
}

TEST(ParseProperty, ZeroSumProbability) {
  auto p = parse_property("<<usr1>> Pmax=? [ F (\"sent1\" & t<=D) ]");
  const auto& g = root(p);
  EXPECT_FALSE(g.equilibrium);
  EXPECT_TRUE(g.numeric);
  EXPECT_EQ(g.direction, Direction::kMax);
  ASSERT_EQ(g.coalitions.size(), 1u);
  EXPECT_EQ(g.coalitions[0], (std::vector<std::string>{"usr1"}));
  EXPECT_EQ(g.objectives[0].path.op, PathOp::kUntil);
}

TEST(ParseProperty, NonzeroSumReward) {
  auto p = parse_property("<<usr1:usr2>>(CE,SF)min=? (R{\"time\"}[ F \"sent1\" ] + R{\"time\"}[ F \"sent2\" ])");
  const auto& g = root(p);
  EXPECT_TRUE(g.equilibrium);
  EXPECT_EQ(g.kind, EquilibriumKind::kCorrelated);
  EXPECT_EQ(g.criterion, Criterion::kSocialFairness);
  EXPECT_EQ(g.direction, Direction::kMin);
  ASSERT_EQ(g.objectives.size(), 2u);
  EXPECT_TRUE(g.objectives[1].is_reward);
  EXPECT_EQ(g.objectives[1].reward, "time");
}

TEST(ParseProperty, TrivialAndBounded) {
  EXPECT_EQ(parse_property("true").root_game(), nullptr);
  auto p = parse_property("<<p1>> P>=0.5 [ X \"win1\" ] & !\"win2\"");
  EXPECT_FALSE(p.is_numeric());
}

TEST(ParseProperty, EventuallyIsSugarForUntil) {
  EXPECT_EQ(parse_property("<<p>> Pmax=? [ F \"a\" ]"), parse_property("<<p>> Pmax=? [ true U \"a\" ]"));
  EXPECT_EQ(parse_property("<<p>> Pmax=? [ F<=3 \"a\" ]"), parse_property("<<p>> Pmax=? [ true U<=3 \"a\" ]"));
}

TEST(ParseProperty, UnicodeAliases) {
  EXPECT_EQ(parse_property("\xe2\x9f\xa8\xe2\x9f\xa8p\xe2\x9f\xa9\xe2\x9f\xa9 P\xe2\x89\xa5" "0.5 [ F \"a\" ]"),
            parse_property("<<p>> P>=0.5 [ F \"a\" ]"));
}

TEST(ParseProperty, Errors) {
  EXPECT_THROW(parse_property("<<p1>> Pmax=? [ F \"a\" "), ParseError);
  EXPECT_THROW(parse_property("<<p1,>> Pmax=? [ F \"a\" ]"), ParseError);
}

TEST(PrintProperty, RoundTripsCorpus) {
  for (const char* name : {"matching_pennies.props", "intersection.props", "aloha2.props", "aloha3.props"}) {
    for (const auto& line : split_property_file(read_file(testing::model_path(name)))) {
      auto p = parse_property(line.text);
      EXPECT_EQ(parse_property(print_property(p)), p) << name << ":" << line.line;
    }
  }
}

TEST(Typecheck, FixtureCorpusIsWellTyped) {
  const std::pair<const char*, const char*> corpus[] = {{"matching_pennies.csg", "matching_pennies.props"},
                                                        {"intersection.csg", "intersection.props"},
                                                        {"aloha2.csg", "aloha2.props"},
                                                        {"aloha3.csg", "aloha3.props"}};
  for (const auto& [model, props] : corpus) {
    auto m = testing::load_fixture(model);
    for (const auto& line : split_property_file(read_file(testing::model_path(props)))) {
      auto p = resolve_property(parse_property(line.text), m.scope);
      EXPECT_TRUE(typecheck(p, m.game).empty()) << props << ":" << line.line;
    }
  }
}

TEST(Typecheck, Diagnostics) {
  auto m = testing::load_fixture("aloha2.csg");
  auto diag = [&](const std::string& text) { return typecheck(resolve_property(parse_property(text), m.scope), m.game); };
  EXPECT_EQ(diag("<<usr1>> Pmax=? [ F \"sent9\" ]").size(), 1u);
  auto overlap = diag("<<usr1,usr2:usr2>>(NE,SW)max=? (P[ F \"sent1\" ] + P[ F \"sent2\" ])");
  ASSERT_FALSE(overlap.empty());
  EXPECT_NE(overlap[0].find("disjoint"), std::string::npos);
  EXPECT_FALSE(diag("<<usr3>> Pmax=? [ F \"sent1\" ]").empty());
  EXPECT_FALSE(diag("<<usr1>> P>=1.5 [ F \"sent1\" ]").empty());
  EXPECT_FALSE(diag("<<usr1>> R{\"energy\"}min=? [ F \"sent1\" ]").empty());
  EXPECT_FALSE(diag("<<usr1:usr2>>(NE,SW)max=? (P[ F \"sent1\" ])").empty());
  auto deep = diag("<<usr1>> P>=0.1 [ F <<usr2>> P>=0.2 [ F <<usr1>> P>=0.3 [ F \"sent1\" ] ] ]");
  ASSERT_FALSE(deep.empty());
  EXPECT_NE(deep[0].find("nesting depth"), std::string::npos);
  EXPECT_TRUE(diag("<<usr1>> P>=0.1 [ F <<usr2>> P>=0.2 [ F \"sent1\" ] ]").empty());
}

TEST(Coalitions, ResolveNamesAndIndices) {
  auto m = testing::load_fixture("aloha3.csg");
  auto p = parse_property("<<usr1:2,usr3>>(NE,SW)max=? (P[ F \"sent1\" ] + P[ F \"sent2\" ])");
  auto part = resolve_coalitions(root(p), m.game);
  EXPECT_EQ(part, (Partition{{0}, {1, 2}}));
}

}  // namespace
}  // namespace csg
