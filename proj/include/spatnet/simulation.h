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

#ifndef SPATNET_SIMULATION_H_
#define SPATNET_SIMULATION_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <vector>

#include "spatnet/network.h"
#include "spatnet/propagation.h"

namespace spatnet {

// Snapshot of every parameter vector after a step. Link vectors carry the
// q and r factors (see LinkVector).
struct SimulationState {
  std::uint64_t step = 0;
  std::map<ObjectId, ParameterVector> objects;
  std::map<LinkId, ParameterVector> links;
  std::uint64_t rng_seed = 0;
  std::uint64_t rng_position = 0;

  friend bool operator==(const SimulationState&, const SimulationState&) = default;
};

SimulationState CaptureState(const Network& net, std::uint64_t step, const Rng& rng);

struct SimulationRun {
  // states[0] is the initial state; one further entry per step.
  std::vector<SimulationState> states;
  Network final_network;
  // Interactions each object took part in over the run.
  std::map<ObjectId, int> interactions;
};

// Every step: apply the couplings, run the interaction set on every link in
// ascending link id order against the step-start snapshot, then commit all
// changes at once (numeric changes add up across links).
SimulationRun SimulateFull(Network net, const InteractionSet& iset,
                           std::vector<NetworkCoupling> couplings, std::uint64_t steps,
                           std::uint64_t seed);

enum class FrontierMode {
  // Next step's set is the objects changed during this step.
  kWavefront,
  // Next step's set also keeps every object affected so far.
  kCumulative,
};

// Every step: apply the couplings, then each object of the affected set (in
// ascending id) interacts over its outgoing links (ascending link id) with
// the snapshot discipline of SimulateFull. The affected set is then
// replaced according to `mode`. Throws kUnknownObject for ids in `initial`
// not in the network, kInvalidArgument when `initial` is empty.
SimulationRun SimulateFrontier(Network net, const InteractionSet& iset,
                               std::vector<NetworkCoupling> couplings,
                               const std::set<ObjectId>& initial, std::uint64_t steps,
                               std::uint64_t seed, FrontierMode mode = FrontierMode::kWavefront);

// Long-format time series: step,element_kind,id,param,value.
void WriteStatesCsv(std::ostream& out, const std::vector<SimulationState>& states);

// CSV field escaping per RFC 4180.
std::string CsvField(const std::string& s);

}  // namespace spatnet

#endif  // SPATNET_SIMULATION_H_
