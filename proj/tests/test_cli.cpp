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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "csgcheck/error.hpp"
#include "csgcheck/run.hpp"
#include "csgcheck/text_util.hpp"
#include "support.hpp"

namespace csg {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "csgcheck");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

// Scratch directory unique to the running test.
fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() / ("csgcheck_" + std::string(info->test_suite_name()) + "_" + info->name());
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

const std::string kPennies = testing::model_path("matching_pennies.csg");
const std::string kAloha = testing::model_path("aloha2.csg");

TEST(Cli, ChecksPropertyFile) {
  auto o = cli({"check", "--model", kPennies, "--props", testing::model_path("matching_pennies.props")});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("0.5"), std::string::npos);
}

TEST(Cli, FalsePropertyExitsWithOne) {
  auto o = cli({"check", "--model", kPennies, "--prop", "<<p1>> P>=0.75 [ X \"win1\" ]"});
  EXPECT_EQ(o.code, 1);
}

TEST(Cli, InputErrorsExitWithTwo) {
  EXPECT_EQ(cli({"check", "--model", "/nonexistent.csg", "--prop", "true"}).code, 2);
  EXPECT_EQ(cli({"check", "--model", kPennies, "--prop", "<<p1>> Pmax=? [ X \"nolabel\" ]"}).code, 2);
  EXPECT_EQ(cli({"check", "--model", kPennies, "--prop", "<<p1>> Pmax=? [ X "}).code, 2);
  EXPECT_EQ(cli({"check", "--model", kPennies}).code, 2);
  EXPECT_EQ(cli({"check", "--model", kPennies, "--prop", "true", "--format", "xml"}).code, 2);
  EXPECT_EQ(cli({"check", "--model", kAloha, "--const", "nope", "--prop", "true"}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);

  fs::path bad = scratch() / "bad.csg";
  std::ofstream(bad) << "csg\nmodule m x : [0..1] init 0;\n";
  auto o = cli({"check", "--model", bad.string(), "--prop", "true"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find(bad.string()), std::string::npos);
}

TEST(Cli, NonConvergenceExitsWithThree) {
  auto o = cli({"check", "--model", kAloha, "--max-iters", "3", "--prop", "<<usr1>> R{\"time\"}min=? [ F \"sent1\" ]"});
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("error"), std::string::npos);
}

TEST(Cli, HelpExitsWithZero) { EXPECT_EQ(cli({"--help"}).code, 0); }

TEST(Cli, JsonAndCsvAreByteIdenticalAcrossRuns) {
  const std::vector<std::string> base = {"check", "--model", kAloha, "--props", testing::model_path("aloha2.props")};
  for (const std::string fmt : {"json", "csv"}) {
    auto args = base;
    args.insert(args.end(), {"--format", fmt});
    auto a = cli(args), b = cli(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
  auto args = base;
  args.insert(args.end(), {"--format", "json"});
  auto doc = nlohmann::json::parse(cli(args).out);
  EXPECT_EQ(doc["states"], 65);
  for (const auto& r : doc["results"]) {
    EXPECT_TRUE(r.contains("property"));
    EXPECT_TRUE(r.contains("value"));
    EXPECT_FALSE(r.contains("wall_time"));
  }
  args.push_back("--timing");
  auto timed = nlohmann::json::parse(cli(args).out);
  EXPECT_TRUE(timed["results"][0].contains("wall_time"));
}

TEST(Cli, CsvHasHeaderAndOneRowPerProperty) {
  auto o = cli({"check", "--model", kPennies, "--format", "csv", "--props", testing::model_path("matching_pennies.props")});
  auto rows = lines(o.out);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], "property,value,satisfied");
  auto props = split_property_file(read_file(testing::model_path("matching_pennies.props")));
  EXPECT_EQ(rows.size(), props.size() + 1);
}

TEST(Cli, SweepIsMonotoneInTheDeadline) {
  auto o = cli({"sweep", "--model", kAloha, "--sweep", "D=0:10:1", "--prop", "<<usr1>> Pmax=? [ F (\"sent1\" & t<=D) ]"});
  ASSERT_EQ(o.code, 0) << o.err;
  auto rows = lines(o.out);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0], "constant,property,value,error");
  double last = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].rfind(std::to_string(i - 1) + ",", 0), 0u) << rows[i];
    auto comma = rows[i].rfind(',');
    auto prev = rows[i].rfind(',', comma - 1);
    double v = std::stod(rows[i].substr(prev + 1, comma - prev - 1));
    EXPECT_GE(v, last - 1e-12);
    last = v;
    EXPECT_EQ(rows[i].substr(comma + 1), "");
  }
}

TEST(Cli, EmptySweepPrintsOnlyTheHeader) {
  auto o = cli({"sweep", "--model", kAloha, "--sweep", "D=5:4:1", "--prop", "<<usr1>> Pmax=? [ F \"sent1\" ]"});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(lines(o.out).size(), 1u);
  EXPECT_EQ(cli({"sweep", "--model", kAloha, "--sweep", "D=0:4:0", "--prop", "true"}).code, 2);
}

TEST(Cli, SweepValues) {
  std::string name;
  EXPECT_EQ(sweep_values("D=0:3:1", &name), (std::vector<std::string>{"0", "1", "2", "3"}));
  EXPECT_EQ(name, "D");
  EXPECT_EQ(sweep_values("q=0.1:0.3:0.1", &name), (std::vector<std::string>{"0.1", "0.2", "0.3"}));
  EXPECT_TRUE(sweep_values("D=3:1:1", &name).empty());
  EXPECT_THROW(sweep_values("D=1:3", &name), InputError);
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
  EXPECT_EQ(csv_field("plain"), "plain");
}

TEST(Cli, ExportThenEvalCertifies) {
  fs::path file = scratch() / "strategy.json";
  const std::string prop = "<<usr1:usr2>>(NE,SW)max=? (P[ F<=D \"sent1\" ] + P[ F<=D \"sent2\" ])";
  auto c = cli({"check", "--model", kAloha, "--prop", prop, "--export-strategy", file.string()});
  ASSERT_EQ(c.code, 0) << c.err;
  auto e = cli({"eval", "--model", kAloha, "--prop", prop, "--import-strategy", file.string(), "--runs", "2000"});
  EXPECT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("verdict: ε-equilibrium (ε ≤ 1e-4)"), std::string::npos) << e.out;
  auto again = cli({"eval", "--model", kAloha, "--prop", prop, "--import-strategy", file.string(), "--runs", "2000"});
  EXPECT_EQ(e.out, again.out);
  EXPECT_EQ(cli({"eval", "--model", kAloha, "--prop", prop, "--import-strategy", file.string(), "--runs", "0"}).code, 2);
  EXPECT_EQ(cli({"check", "--model", kAloha, "--prop", prop, "--prop", "true", "--export-strategy", file.string()}).code,
            2);
}

TEST(Cli, TamperedStrategyIsViolated) {
  fs::path file = scratch() / "strategy.json";
  const std::string prop = "<<p1>> Pmax=? [ X \"win1\" ]";
  ASSERT_EQ(cli({"check", "--model", kPennies, "--prop", prop, "--export-strategy", file.string()}).code, 0);
  auto doc = nlohmann::json::parse(read_file(file.string()));
  bool changed = false;
  for (auto& entry : doc["entries"]) {
    auto& rows = entry["rows"][0];
    if (rows.size() == 2) {
      rows[0]["prob"] = 1.0;
      rows[1]["prob"] = 0.0;
      changed = true;
    }
  }
  ASSERT_TRUE(changed);
  std::ofstream(file) << doc.dump(2);
  auto o = cli({"eval", "--model", kPennies, "--prop", prop, "--import-strategy", file.string(), "--format", "json",
                "--runs", "1000"});
  EXPECT_EQ(o.code, 1) << o.err;
  auto report = nlohmann::json::parse(o.out);
  EXPECT_FALSE(report["certified"].get<bool>());
  EXPECT_EQ(report["verdict"], "violated");
  EXPECT_EQ(report["violation"]["coalition"], "p2");
}

TEST(Cli, StrategyForDifferentCoalitionsIsRejected) {
  fs::path file = scratch() / "strategy.json";
  ASSERT_EQ(cli({"check", "--model", kAloha, "--prop", "<<usr1>> Pmax=? [ F \"sent1\" ]", "--export-strategy",
                 file.string()})
                .code,
            0);
  auto o = cli({"eval", "--model", kAloha, "--prop", "<<usr2>> Pmax=? [ F \"sent2\" ]", "--import-strategy",
                file.string()});
  EXPECT_EQ(o.code, 2);
}

TEST(Cli, ExportAndReloadExplicitGame) {
  fs::path file = scratch() / "game.json";
  ASSERT_EQ(cli({"export", "--model", kAloha, "--output", file.string()}).code, 0);
  auto a = cli({"check", "--model", kAloha, "--prop", "<<usr1>> Pmax=? [ F<=3 \"sent1\" ]"});
  auto b = cli({"check", "--model", file.string(), "--prop", "<<usr1>> Pmax=? [ F<=3 \"sent1\" ]"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(a.out.substr(a.out.find("property:")), b.out.substr(b.out.find("property:")));
  EXPECT_EQ(cli({"check", "--model", file.string(), "--const", "D=2", "--prop", "true"}).code, 2);
}

TEST(Cli, NormalFormGames) {
  auto o = cli({"nfg", "--game", testing::model_path("intersection.nfg"), "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  auto doc = nlohmann::json::parse(o.out);
  double total = 0.0;
  for (double u : doc["values"]) total += u;
  EXPECT_NEAR(total, 5.0, 1e-6);
  auto m = cli({"nfg", "--game", testing::model_path("matching_pennies.nfg"), "--matrix"});
  EXPECT_EQ(m.code, 0);
  EXPECT_NE(m.out.find("0.5"), std::string::npos);
}

}  // namespace
}  // namespace csg
