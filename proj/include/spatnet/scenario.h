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

// Simulation scenario files. A scenario names a built-in interaction set
// and optionally couplings to other networks, initial parameter overrides
// and run settings:
//
//   {"interaction": "identity" | "traffic" | {"name": ..., ...},
//    "couplings": [...], "initial": {"<id>": {"<param>": value}},
//    "steps": 10, "seed": 1, "algorithm": "full" | "frontier",
//    "frontier_set": [ids], "frontier_mode": "wavefront" | "cumulative",
//    "max_interactions_per_object": n}

#ifndef SPATNET_SCENARIO_H_
#define SPATNET_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "spatnet/network_io.h"
#include "spatnet/propagation.h"
#include "spatnet/simulation.h"
#include "spatnet/traffic.h"

namespace spatnet {

struct Scenario {
  std::string interaction_name = "identity";
  bool is_traffic = false;
  InteractionSet interaction = InteractionSet::Identity();
  traffic::TrafficOptions traffic;
  std::vector<NetworkCoupling> couplings;
  std::map<ObjectId, ParameterVector> initial;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> seed;
  std::string algorithm = "full";
  std::set<ObjectId> frontier_set;
  FrontierMode frontier_mode = FrontierMode::kWavefront;
};

// Throws kScenarioParseError. Relative coupling network paths resolve
// against `base_dir`.
Scenario ScenarioFromJson(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                          const WarningSink& warn = {});
Scenario ParseScenario(std::string_view text, const std::filesystem::path& base_dir = {},
                       const WarningSink& warn = {});
Scenario LoadScenario(const std::filesystem::path& path, const WarningSink& warn = {});

// The scenario for `simulate --scenario traffic`.
Scenario TrafficScenario();

// Writes the "initial" overrides into the network. Throws kUnknownObject.
void ApplyInitial(const Scenario& scenario, Network& net);

// Built-in coupling effect: a function usable as NetworkCoupling::f or g.
//   {"kind": "assign", "when": {"param": p, "min": x}, "set": {...}}
//     sets the listed target parameters when source p >= x (always when
//     "when" is absent);
//   {"kind": "add", "param": p, "amount": x} adds x to target p.
NetworkCoupling::Fn CouplingEffectFromJson(const nlohmann::json& spec,
                                           const std::string& context);

}  // namespace spatnet

#endif  // SPATNET_SCENARIO_H_
