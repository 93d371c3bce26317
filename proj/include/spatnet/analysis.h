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

#ifndef SPATNET_ANALYSIS_H_
#define SPATNET_ANALYSIS_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "spatnet/network.h"

namespace spatnet {

// Where link weights (or capacities) come from.
class WeightSpec {
 public:
  static WeightSpec Unit() { return WeightSpec(); }
  static WeightSpec LinkParam(std::string name) { return WeightSpec(std::move(name)); }
  // "unit" or "param:NAME". Throws kInvalidArgument.
  static WeightSpec Parse(std::string_view text);

  bool is_unit() const { return !param_; }
  const std::optional<std::string>& param() const { return param_; }

  // Throws kMissingParameter / kSchemaMismatch.
  double WeightOf(const Link& link) const;

 private:
  WeightSpec() = default;
  explicit WeightSpec(std::string name) : param_(std::move(name)) {}
  std::optional<std::string> param_;
};

struct PathResult {
  double distance = 0.0;
  std::vector<ObjectId> path;
};

struct Unreachable {
  friend bool operator==(Unreachable, Unreachable) = default;
};
struct NegativeCycle {
  friend bool operator==(NegativeCycle, NegativeCycle) = default;
};

using PathOutcome = std::variant<PathResult, Unreachable, NegativeCycle>;

// Minimum-distance path; among equal-distance paths the lexicographically
// smallest id sequence is returned. Throws kNegativeWeight, kUnknownObject.
// Never yields NegativeCycle.
PathOutcome ShortestPathDijkstra(const Network& net, ObjectId src, ObjectId dst,
                                 const WeightSpec& w = WeightSpec::Unit());

// Same contract as Dijkstra, accepting negative weights. Reports
// NegativeCycle when a negative cycle is reachable from src.
PathOutcome ShortestPathBellmanFord(const Network& net, ObjectId src, ObjectId dst,
                                    const WeightSpec& w = WeightSpec::Unit());

// All-pairs distances; nullopt marks an unreachable pair.
class DistanceMatrix {
 public:
  DistanceMatrix(std::vector<ObjectId> ids, std::vector<std::optional<double>> cells);

  const std::vector<ObjectId>& ids() const { return ids_; }
  // Throws kUnknownObject.
  std::optional<double> at(ObjectId from, ObjectId to) const;

 private:
  std::size_t IndexOf(ObjectId id) const;
  std::vector<ObjectId> ids_;
  std::vector<std::optional<double>> cells_;
};

// Throws kNegativeCycle.
DistanceMatrix AllPairsFloydWarshall(const Network& net, const WeightSpec& w = WeightSpec::Unit());

enum class TraversalMode { kBfs, kDfs };

// Objects reachable from src along link direction, src included.
// Throws kUnknownObject.
std::set<ObjectId> ReachableSet(const Network& net, ObjectId src,
                                TraversalMode mode = TraversalMode::kBfs);

struct FlowResult {
  double value = 0.0;
  std::map<LinkId, double> link_flow;
};

// Edmonds-Karp maximum flow. Throws kUnknownObject, kNegativeCapacity and
// kInvalidArgument when src == dst.
FlowResult MaxFlowFordFulkerson(const Network& net, ObjectId src, ObjectId dst,
                                const WeightSpec& capacity = WeightSpec::Unit());

// Objects found only in the FROM column or only in the TO column of the
// registry, ascending. Objects without links are not reported.
std::vector<ObjectId> PointNoFlow(const Network& net);

}  // namespace spatnet

#endif  // SPATNET_ANALYSIS_H_
