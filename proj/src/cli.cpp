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

#include "spatnet/cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "spatnet/analysis.h"
#include "spatnet/error.h"
#include "spatnet/network_io.h"
#include "spatnet/scenario.h"
#include "spatnet/simulation.h"
#include "spatnet/structure_rules.h"
#include "spatnet/traffic.h"

namespace spatnet::cli {

namespace {

using nlohmann::json;

// Integral values print without a fractional part.
json Number(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 0x1.0p53) {
    return static_cast<std::int64_t>(x);
  }
  return x;
}

json Ids(const auto& ids) {
  json arr = json::array();
  for (ObjectId id : ids) arr.push_back(id.value);
  return arr;
}

struct Io {
  std::ostream& out;
  std::ostream& err;
  WarningSink warn() const {
    return [this](const std::string& msg) { err << "warning: " << msg << '\n'; };
  }
};

// Writes to `path`, or to `fallback` when the path is empty.
void Emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  f << text;
}

// validate

struct ValidateArgs {
  std::string file;
  std::string hierarchy;
};

int Validate(const ValidateArgs& a, const Io& io) {
  Network net = LoadNetwork(a.file, io.warn());
  std::vector<Violation> violations = ValidateRegistry(net);
  if (!a.hierarchy.empty()) {
    HierarchyConfig cfg = ParseHierarchyConfig(a.hierarchy);
    auto objs = DetectInvalidObjectLinks(net, cfg);
    violations.insert(violations.end(), objs.begin(), objs.end());
    if (cfg.has_link_rules()) {
      auto links = DetectInvalidLinkCategories(net, cfg);
      violations.insert(violations.end(), links.begin(), links.end());
    }
  }
  NormalizeViolations(violations);
  for (const Violation& v : violations) {
    json line = {{"rule", std::string(RuleName(v.rule))},
                 {"subject", v.subject.value},
                 {"detail", v.detail}};
    io.out << line.dump() << '\n';
  }
  return violations.empty() ? kExitOk : kExitFindings;
}

// analyze

struct AnalyzeArgs {
  std::string file;
  std::string query;
  std::optional<std::int64_t> from;
  std::optional<std::int64_t> to;
  std::string weights = "unit";
  std::string mode = "bfs";
  std::string algorithm = "dijkstra";
};

ObjectId Need(const std::optional<std::int64_t>& id, const char* flag) {
  if (!id) throw Error(ErrorCode::kInvalidArgument, std::string("this query needs ") + flag);
  return ObjectId(*id);
}

json PathJson(const PathOutcome& outcome) {
  if (const auto* p = std::get_if<PathResult>(&outcome)) {
    return {{"distance", Number(p->distance)}, {"path", Ids(p->path)}};
  }
  if (std::holds_alternative<NegativeCycle>(outcome)) {
    return {{"distance", nullptr}, {"path", json::array()}, {"negative_cycle", true}};
  }
  return {{"distance", nullptr}, {"path", json::array()}, {"unreachable", true}};
}

int Analyze(const AnalyzeArgs& a, const Io& io) {
  Network net = LoadNetwork(a.file, io.warn());
  const WeightSpec w = WeightSpec::Parse(a.weights);
  json result;
  if (a.query == "point-no-flow") {
    result = {{"objects", Ids(PointNoFlow(net))}};
  } else if (a.query == "shortest-path") {
    if (a.algorithm == "dijkstra") {
      result = PathJson(ShortestPathDijkstra(net, Need(a.from, "--from"), Need(a.to, "--to"), w));
    } else if (a.algorithm == "bellman-ford") {
      result =
          PathJson(ShortestPathBellmanFord(net, Need(a.from, "--from"), Need(a.to, "--to"), w));
    } else {
      DistanceMatrix m = AllPairsFloydWarshall(net, w);
      if (a.from && a.to) {
        auto d = m.at(ObjectId(*a.from), ObjectId(*a.to));
        result = {{"distance", d ? Number(*d) : json(nullptr)}};
        if (!d) result["unreachable"] = true;
      } else {
        json rows = json::array();
        for (ObjectId i : m.ids()) {
          json row = json::array();
          for (ObjectId j : m.ids()) {
            auto d = m.at(i, j);
            row.push_back(d ? Number(*d) : json(nullptr));
          }
          rows.push_back(row);
        }
        result = {{"ids", Ids(m.ids())}, {"distances", rows}};
      }
    }
  } else if (a.query == "reachability") {
    const TraversalMode mode = a.mode == "dfs" ? TraversalMode::kDfs : TraversalMode::kBfs;
    result = {{"objects", Ids(ReachableSet(net, Need(a.from, "--from"), mode))}};
  } else {
    FlowResult f = MaxFlowFordFulkerson(net, Need(a.from, "--from"), Need(a.to, "--to"), w);
    json flows = json::array();
    for (const auto& [id, value] : f.link_flow) {
      if (value != 0.0) flows.push_back({{"link_id", id.value}, {"flow", Number(value)}});
    }
    result = {{"flow", Number(f.value)}, {"link_flows", flows}};
  }
  io.out << result.dump() << '\n';
  return kExitOk;
}

// simulate

struct SimulateArgs {
  std::string file;
  std::string scenario;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> seed;
  std::string algorithm;
  std::string mode;
  std::optional<double> bpr_alpha;
  std::optional<double> bpr_beta;
  std::optional<double> headway;
  bool literal_receiver_capacity = false;
  std::string frontier_set;
  std::string out;
  std::string final_path;
};

std::set<ObjectId> ParseIdList(const std::string& text) {
  std::set<ObjectId> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      ids.insert(ObjectId(v));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "'" + item + "' is not an object id");
    }
  }
  return ids;
}

int Simulate(const SimulateArgs& a, const Io& io) {
  Network net = LoadNetwork(a.file, io.warn());
  Scenario sc = a.scenario == "traffic" ? TrafficScenario() : LoadScenario(a.scenario, io.warn());
  ApplyInitial(sc, net);

  const std::uint64_t steps = a.steps ? *a.steps : sc.steps.value_or(0);
  const std::uint64_t seed = a.seed ? *a.seed : sc.seed.value_or(0);
  const std::string algorithm = a.algorithm.empty() ? sc.algorithm : a.algorithm;

  std::ostringstream csv;
  std::string final_json;
  if (sc.is_traffic) {
    if (algorithm != "full") {
      throw Error(ErrorCode::kInvalidArgument, "traffic runs support only --algorithm full");
    }
    traffic::TrafficOptions opt = sc.traffic;
    if (a.mode == "probabilistic") opt.mode = traffic::TrafficMode::kProbabilistic;
    if (a.mode == "deterministic") opt.mode = traffic::TrafficMode::kDeterministic;
    if (a.bpr_alpha) opt.bpr.alpha = *a.bpr_alpha;
    if (a.bpr_beta) opt.bpr.beta = *a.bpr_beta;
    if (a.headway) opt.headway = *a.headway;
    if (a.literal_receiver_capacity) opt.literal_receiver_capacity = true;
    traffic::TrafficRun run = traffic::RunTraffic(std::move(net), opt, sc.couplings, steps, seed);
    csv << "# seed=" << seed << " algorithm=full steps=" << steps << " interaction=traffic mode="
        << (opt.mode == traffic::TrafficMode::kDeterministic ? "deterministic" : "probabilistic")
        << " time_step_s=" << ToString(ParamValue{run.time_step}) << '\n';
    traffic::WriteTrafficCsv(csv, run);
    final_json = NetworkToJson(run.final_network).dump(2) + "\n";
  } else {
    if (!a.mode.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--mode applies only to traffic runs");
    }
    if (sc.interaction_name == "conservative_transfer") CheckFactorSums(net);
    SimulationRun run;
    if (algorithm == "full") {
      run = SimulateFull(std::move(net), sc.interaction, sc.couplings, steps, seed);
    } else if (algorithm == "frontier") {
      std::set<ObjectId> initial = a.frontier_set.empty() ? sc.frontier_set
                                                          : ParseIdList(a.frontier_set);
      run = SimulateFrontier(std::move(net), sc.interaction, sc.couplings, initial, steps, seed,
                             sc.frontier_mode);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown algorithm '" + algorithm + "'");
    }
    csv << "# seed=" << seed << " algorithm=" << algorithm << " steps=" << steps
        << " interaction=" << sc.interaction_name << '\n';
    WriteStatesCsv(csv, run.states);
    final_json = NetworkToJson(run.final_network).dump(2) + "\n";
  }

  Emit(a.out, csv.str(), io.out);
  std::string final_path = a.final_path;
  if (final_path.empty() && !a.out.empty()) final_path = a.out + ".final.json";
  if (!final_path.empty()) Emit(final_path, final_json, io.out);
  return kExitOk;
}

// build-registry

struct BuildRegistryArgs {
  std::string file;
  double epsilon = kDefaultEpsilon;
  bool bidirectional = false;
  std::string out;
};

int BuildRegistry(const BuildRegistryArgs& a, const Io& io) {
  Network net = LoadNetwork(a.file, io.warn());
  BuildRegistryFromGeometry(net, {.epsilon = a.epsilon, .bidirectional = a.bidirectional});
  Emit(a.out, NetworkToJson(net).dump(2) + "\n", io.out);
  return kExitOk;
}

// make-grid

struct MakeGridArgs {
  int size = 4;
  double block_length = 200.0;
  std::string out;
};

int MakeGrid(const MakeGridArgs& a, const Io& io) {
  Network net = traffic::MakeTrafficGrid({.size = a.size, .block_length_m = a.block_length});
  Emit(a.out, NetworkToJson(net).dump(2) + "\n", io.out);
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Networks of spatial objects: validation, analysis and simulation.", "spatnet"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 clean, 1 violations found (validate), 2 input error.\n"
      "validate prints one JSON object per line; simulate writes CSV time series.");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check registry and hierarchy rules");
  validate->add_option("file", va.file, "Network JSON file")->required();
  validate->add_option("--hierarchy", va.hierarchy,
                       "Hierarchy config k,a[,c,a_link]: object categories 1..k with "
                       "threshold a, link categories 1..c with threshold a_link");
  validate->footer("Output: JSON lines {\"rule\", \"subject\", \"detail\"}.");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Run a network analysis query");
  analyze->add_option("file", aa.file, "Network JSON file")->required();
  analyze->add_option("query", aa.query, "Query")
      ->required()
      ->check(CLI::IsMember({"point-no-flow", "shortest-path", "reachability", "max-flow"}));
  analyze->add_option("--from", aa.from, "Source object id");
  analyze->add_option("--to", aa.to, "Target object id");
  analyze->add_option("--weights", aa.weights, "unit or param:NAME (weights or capacities)");
  analyze->add_option("--mode", aa.mode, "Traversal order for reachability")
      ->check(CLI::IsMember({"bfs", "dfs"}));
  analyze->add_option("--algorithm", aa.algorithm, "Shortest-path algorithm")
      ->check(CLI::IsMember({"dijkstra", "bellman-ford", "floyd-warshall"}));

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run a time-stepped simulation");
  simulate->add_option("file", sa.file, "Network JSON file")->required();
  simulate->add_option("--scenario", sa.scenario, "Scenario JSON file, or 'traffic'")
      ->required();
  simulate->add_option("--steps", sa.steps, "Number of steps");
  simulate->add_option("--seed", sa.seed, "Random seed (default 0)");
  simulate->add_option("--algorithm", sa.algorithm, "full or frontier")
      ->check(CLI::IsMember({"full", "frontier"}));
  simulate->add_option("--mode", sa.mode, "Traffic mode")
      ->check(CLI::IsMember({"deterministic", "probabilistic"}));
  simulate->add_option("--bpr-alpha", sa.bpr_alpha, "BPR alpha (default 0.15)");
  simulate->add_option("--bpr-beta", sa.bpr_beta, "BPR beta (default 4)");
  simulate->add_option("--headway", sa.headway, "Override the per-vehicle headway in seconds");
  simulate->add_flag("--literal-receiver-capacity", sa.literal_receiver_capacity,
                     "Use the outgoing volume as receiver capacity in probabilistic traffic");
  simulate->add_option("--frontier-set", sa.frontier_set, "Initial affected ids, comma-separated");
  simulate->add_option("--out", sa.out, "CSV output path (default standard output)");
  simulate->add_option("--final", sa.final_path,
                       "Final network JSON path (default <out>.final.json when --out is set)");
  simulate->footer(
      "CSV columns: step,element_kind,id,param,value; traffic runs use "
      "step,road_id,current_volume,current_mean_speed. The first line records the run.");

  BuildRegistryArgs ba;
  auto* build = app.add_subcommand("build-registry", "Derive links from polyline geometry");
  build->add_option("file", ba.file, "Network JSON file")->required();
  build->add_option("--epsilon", ba.epsilon, "Endpoint tolerance")->required();
  build->add_flag("--bidirectional", ba.bidirectional, "Add links in both directions");
  build->add_option("--out", ba.out, "Output path (default standard output)");

  MakeGridArgs ga;
  auto* grid = app.add_subcommand("make-grid", "Write the demo traffic grid network");
  grid->add_option("--size", ga.size, "Intersections per side")->check(CLI::Range(2, 100));
  grid->add_option("--block-length", ga.block_length, "Block length in meters");
  grid->add_option("--out", ga.out, "Output path (default standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  const Io io{out, err};
  try {
    if (*validate) return Validate(va, io);
    if (*analyze) return Analyze(aa, io);
    if (*simulate) return Simulate(sa, io);
    if (*build) return BuildRegistry(ba, io);
    if (*grid) return MakeGrid(ga, io);
  } catch (const Error& e) {
    err << "error: " << e.what() << " [" << ErrorCodeName(e.code()) << "]\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace spatnet::cli
