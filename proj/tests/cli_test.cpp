// Copyright 2026 The spatnet Authors
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


#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "spatnet/cli.h"
#include "spatnet/error.h"
#include "spatnet/network_io.h"
#include "spatnet/scenario.h"
#include "testing.h"

namespace spatnet {
namespace {

using nlohmann::json;
using testing::DataDir;
using testing::O;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Data(const char* name) { return (DataDir() / name).string(); }

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::vector<json> JsonLines(const std::string& text) {
  std::vector<json> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(json::parse(line));
  }
  return lines;
}

TEST(CliValidateTest, CleanRegistryExitsZero) {
  Result r = Cli({"validate", Data("registry_example.json")});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_EQ(r.out, "");
}

TEST(CliValidateTest, HierarchyFindingsExitOne) {
  Result r = Cli({"validate", Data("hierarchy_example.json"), "--hierarchy", "3,2"});
  EXPECT_EQ(r.code, cli::kExitFindings);
  auto lines = JsonLines(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0]["rule"], "ObjRule2");
  EXPECT_EQ(lines[0]["subject"], 1);
  EXPECT_EQ(lines[1]["rule"], "ObjRule3");
  EXPECT_EQ(lines[1]["subject"], 3);
}

TEST(CliValidateTest, RegistryViolationExitsOne) {
  auto dir = testing::TempDir("cli_validate");
  json doc = json::parse(Slurp(Data("registry_example.json")));
  doc["objects"].push_back({{"id", 7}, {"params", {{"name", "loose"}, {"water", 0}}}});
  Spit(dir / "bad.json", doc.dump());
  Result r = Cli({"validate", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, cli::kExitFindings);
  auto lines = JsonLines(r.out);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0]["subject"], 7);
}

TEST(CliAnalyzeTest, Queries) {
  const std::string file = Data("registry_example.json");
  EXPECT_EQ(json::parse(Cli({"analyze", file, "point-no-flow"}).out),
            json::parse(R"({"objects":[1,4,6]})"));
  EXPECT_EQ(json::parse(Cli({"analyze", file, "shortest-path", "--from", "1", "--to", "6"}).out),
            json::parse(R"({"distance":3,"path":[1,2,3,6]})"));
  for (const char* algorithm : {"dijkstra", "bellman-ford"}) {
    Result r = Cli({"analyze", file, "shortest-path", "--from", "1", "--to", "6", "--weights",
                    "param:length", "--algorithm", algorithm});
    EXPECT_EQ(json::parse(r.out), json::parse(R"({"distance":580,"path":[1,2,3,6]})"));
  }
  Result fw = Cli({"analyze", file, "shortest-path", "--from", "1", "--to", "6", "--weights",
                   "param:length", "--algorithm", "floyd-warshall"});
  EXPECT_EQ(json::parse(fw.out), json::parse(R"({"distance":580})"));
  json matrix = json::parse(
      Cli({"analyze", file, "shortest-path", "--algorithm", "floyd-warshall"}).out);
  EXPECT_EQ(matrix["ids"], json::parse("[1,2,3,4,5,6]"));
  EXPECT_EQ(matrix["distances"][0][5], 3);
  EXPECT_TRUE(matrix["distances"][5][0].is_null());
  EXPECT_EQ(json::parse(Cli({"analyze", file, "shortest-path", "--from", "6", "--to", "1"}).out),
            json::parse(R"({"distance":null,"path":[],"unreachable":true})"));
  EXPECT_EQ(json::parse(Cli({"analyze", file, "reachability", "--from", "3", "--mode", "dfs"}).out),
            json::parse(R"({"objects":[3,4,5,6]})"));
  Result flow = Cli({"analyze", file, "max-flow", "--from", "1", "--to", "6"});
  EXPECT_EQ(flow.code, cli::kExitOk);
  EXPECT_EQ(json::parse(flow.out)["flow"], 1);
}

TEST(CliAnalyzeTest, BadInput) {
  const std::string file = Data("registry_example.json");
  EXPECT_EQ(Cli({"analyze", file, "shortest-path", "--from", "1"}).code, cli::kExitInputError);
  EXPECT_EQ(Cli({"analyze", file, "shortest-path", "--from", "1", "--to", "99"}).code,
            cli::kExitInputError);
  EXPECT_EQ(Cli({"analyze", file, "no-such-query"}).code, cli::kExitInputError);
  EXPECT_EQ(Cli({"analyze", "/nonexistent.json", "point-no-flow"}).code, cli::kExitInputError);
  EXPECT_EQ(Cli({"frobnicate"}).code, cli::kExitInputError);
}

TEST(CliSimulateTest, ZeroStepsWritesInitialState) {
  Result r = Cli({"simulate", Data("registry_example.json"), "--scenario",
                  Data("transfer_scenario.json"), "--steps", "0"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string header, columns, line;
  std::getline(in, header);
  std::getline(in, columns);
  EXPECT_EQ(header, "# seed=7 algorithm=full steps=0 interaction=conservative_transfer");
  EXPECT_EQ(columns, "step,element_kind,id,param,value");
  while (std::getline(in, line)) EXPECT_EQ(line.substr(0, 2), "0,");
}

std::int64_t WaterAt(const std::string& csv, int step) {
  std::istringstream in(csv);
  std::int64_t total = 0;
  const std::string prefix = std::to_string(step) + ",object,";
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(prefix, 0) != 0 || line.find(",water,") == std::string::npos) continue;
    total += std::stoll(line.substr(line.rfind(',') + 1));
  }
  return total;
}

TEST(CliSimulateTest, TransferConservesWater) {
  Result r = Cli({"simulate", Data("registry_example.json"), "--scenario",
                  Data("transfer_scenario.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  for (int step = 0; step <= 20; ++step) EXPECT_EQ(WaterAt(r.out, step), 200);
}

TEST(CliSimulateTest, OutputsAndFinalNetwork) {
  auto dir = testing::TempDir("cli_simulate");
  Result r = Cli({"simulate", Data("registry_example.json"), "--scenario",
                  Data("transfer_scenario.json"), "--steps", "3", "--seed", "11", "--out",
                  (dir / "run.csv").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(Slurp(dir / "run.csv").rfind("# seed=11 algorithm=full steps=3", 0), 0u);
  Network final_net = LoadNetwork(dir / "run.csv.final.json");
  EXPECT_EQ(final_net.object_count(), 6u);
}

TEST(CliSimulateTest, SeededRunsAreByteIdentical) {
  const std::vector<std::string> args{"simulate", Data("traffic_grid_4x4.json"), "--scenario",
                                      "traffic", "--mode", "probabilistic", "--steps", "40",
                                      "--seed", "5"};
  Result a = Cli(args), b = Cli(args);
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::vector<std::string> other = args;
  other.back() = "6";
  EXPECT_NE(Cli(other).out, a.out);
}

TEST(CliSimulateTest, RealBinaryIsDeterministic) {
  auto dir = testing::TempDir("cli_binary");
  auto run = [&](const std::string& name) {
    const std::string cmd = std::string("\"") + SPATNET_BIN + "\" simulate \"" +
                            Data("traffic_grid_4x4.json") +
                            "\" --scenario traffic --mode probabilistic --steps 25 --seed 3 "
                            "--out \"" + (dir / name).string() + "\"";
    EXPECT_EQ(std::system(cmd.c_str()), 0);
    return Slurp(dir / name);
  };
  const std::string first = run("a.csv");
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, run("b.csv"));
}

TEST(CliSimulateTest, FrontierAndOptionErrors) {
  const std::string file = Data("registry_example.json");
  const std::string scenario = Data("transfer_scenario.json");
  Result frontier = Cli({"simulate", file, "--scenario", scenario, "--algorithm", "frontier",
                         "--frontier-set", "1", "--steps", "2"});
  EXPECT_EQ(frontier.code, cli::kExitOk) << frontier.err;
  EXPECT_EQ(WaterAt(frontier.out, 2), 200);
  EXPECT_EQ(Cli({"simulate", file, "--scenario", scenario, "--mode", "deterministic"}).code,
            cli::kExitInputError);
  EXPECT_EQ(Cli({"simulate", file, "--scenario", scenario, "--algorithm", "frontier"}).code,
            cli::kExitInputError);
  EXPECT_EQ(Cli({"simulate", file}).code, cli::kExitInputError);
  EXPECT_EQ(Cli({"simulate", file, "--scenario", "traffic"}).code, cli::kExitInputError);
}

TEST(CliSimulateTest, TrafficHeader) {
  Result r = Cli({"simulate", Data("traffic_grid_4x4.json"), "--scenario", "traffic", "--steps",
                  "1"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("# seed=0 algorithm=full steps=1 interaction=traffic mode=deterministic "
                        "time_step_s=",
                        0),
            0u);
}

TEST(CliBuildRegistryTest, LinksTouchingRoads) {
  auto dir = testing::TempDir("cli_build");
  json doc = {{"topology", "polyline"},
              {"objects",
               {{{"id", 1},
                 {"geometry", {{"type", "polyline"}, {"coords", {{0, 0}, {10, 0}}}}},
                 {"params", json::object()}},
                {{"id", 2},
                 {"geometry", {{"type", "polyline"}, {"coords", {{10, 0}, {10, 10}}}}},
                 {"params", json::object()}}}},
              {"links", json::array()}};
  Spit(dir / "roads.json", doc.dump());
  Result one = Cli({"build-registry", (dir / "roads.json").string(), "--epsilon", "0.5"});
  ASSERT_EQ(one.code, cli::kExitOk) << one.err;
  Network net = NetworkFromJson(json::parse(one.out));
  ASSERT_EQ(net.link_count(), 1u);
  EXPECT_EQ(net.links().begin()->second.from, O(1));
  Result both = Cli({"build-registry", (dir / "roads.json").string(), "--epsilon", "0.5",
                     "--bidirectional"});
  EXPECT_EQ(NetworkFromJson(json::parse(both.out)).link_count(), 2u);
  EXPECT_EQ(Cli({"build-registry", (dir / "roads.json").string()}).code, cli::kExitInputError);
}

TEST(CliMakeGridTest, MatchesShippedGrid) {
  Result r = Cli({"make-grid"});
  ASSERT_EQ(r.code, cli::kExitOk);
  EXPECT_EQ(json::parse(r.out), json::parse(Slurp(Data("traffic_grid_4x4.json"))));
  EXPECT_EQ(Cli({"make-grid", "--size", "1"}).code, cli::kExitInputError);
}

TEST(CliTest, HelpExitsZero) { EXPECT_EQ(Cli({"--help"}).code, cli::kExitOk); }

json Inline() {
  return {{"topology", "polygon"},
          {"objects",
           {{{"id", 1},
             {"geometry", {{"type", "polygon"}, {"coords", {{0, 0}, {5, 0}, {5, 5}, {0, 5}}}}},
             {"params", {{"depth", 2.0}}}}}},
          {"links", json::array()}};
}

TEST(ScenarioTest, InteractionForms) {
  Scenario id = ParseScenario(R"({"interaction": "identity"})");
  EXPECT_EQ(id.interaction_name, "identity");
  EXPECT_FALSE(id.is_traffic);
  Scenario t = ParseScenario(
      R"({"interaction": {"name": "conservative_transfer", "param": "w", "rate": 3,
           "probabilistic": true}, "steps": 4, "seed": 9, "max_interactions_per_object": 2})");
  EXPECT_EQ(t.interaction.name, "conservative_transfer");
  EXPECT_TRUE(static_cast<bool>(t.interaction.stochastic));
  EXPECT_EQ(t.interaction.max_interactions_per_object, 2);
  EXPECT_EQ(t.steps, 4u);
  EXPECT_EQ(t.seed, 9u);
  Scenario tr = ParseScenario(
      R"({"interaction": {"name": "traffic", "mode": "probabilistic", "bpr_alpha": 0.2,
           "bpr_beta": 3, "headway_s": 1.5}})");
  EXPECT_TRUE(tr.is_traffic);
  EXPECT_EQ(tr.traffic.mode, traffic::TrafficMode::kProbabilistic);
  EXPECT_DOUBLE_EQ(tr.traffic.bpr.alpha, 0.2);
  EXPECT_DOUBLE_EQ(tr.traffic.bpr.beta, 3.0);
  EXPECT_EQ(tr.traffic.headway, 1.5);
  EXPECT_TRUE(TrafficScenario().is_traffic);
}

TEST(ScenarioTest, CouplingAndInitial) {
  json doc = {{"interaction", "identity"},
              {"initial", {{"2", {{"capacity", 7}}}}},
              {"couplings",
               {{{"network", Inline()},
                 {"relation", "static"},
                 {"objects", {{1, 2}}},
                 {"effect",
                  {{"kind", "assign"},
                   {"when", {{"param", "depth"}, {"min", 1.0}}},
                   {"set", {{"capacity", 0}}}}}}}}};
  Scenario s = ScenarioFromJson(doc, {});
  ASSERT_EQ(s.couplings.size(), 1u);
  Network net;
  net.AddObject(testing::Obj(2, std::nullopt, {{"capacity", std::int64_t{40}}}));
  ApplyInitial(s, net);
  EXPECT_EQ(net.object(O(2)).params.GetInt("capacity"), 7);
  ApplyCoupling(s.couplings[0], s.couplings[0].related, net);
  EXPECT_EQ(net.object(O(2)).params.GetInt("capacity"), 0);

  Scenario unknown = ScenarioFromJson({{"initial", {{"9", {{"capacity", 1}}}}}}, {});
  EXPECT_THROW(ApplyInitial(unknown, net), Error);
}

TEST(ScenarioTest, AddEffectKeepsKind) {
  auto add = CouplingEffectFromJson({{"kind", "add"}, {"param", "n"}, {"amount", 2}}, "t");
  ParameterVector out = add({}, ParameterVector{{"n", std::int64_t{5}}});
  EXPECT_EQ(out.GetInt("n"), 7);
  EXPECT_THROW(add({}, ParameterVector{{"m", 1.0}}), Error);
}

TEST(ScenarioTest, ParseErrors) {
  for (const char* text : {
           "not json",
           "[]",
           R"({"interaction": "teleport"})",
           R"({"interaction": {"name": "conservative_transfer", "rate": 1}})",
           R"({"interaction": {"name": "conservative_transfer", "param": "w", "rate": -1}})",
           R"({"steps": -3})",
           R"({"algorithm": "sideways"})",
           R"({"frontier_mode": "sometimes"})",
           R"({"couplings": [{"relation": "static"}]})",
           R"({"couplings": [{"network": {"objects": []}, "relation": "sideways"}]})",
           R"({"interaction": {"name": "traffic", "mode": "chaotic"}})",
       }) {
    try {
      ParseScenario(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kScenarioParseError) << text;
    }
  }
}

TEST(ScenarioTest, UnknownKeysWarn) {
  std::vector<std::string> warnings;
  ParseScenario(R"({"interaction": "identity", "colour": "blue"})", {},
                [&](const std::string& w) { warnings.push_back(w); });
  EXPECT_EQ(warnings.size(), 1u);
}

}  // namespace
}  // namespace spatnet
