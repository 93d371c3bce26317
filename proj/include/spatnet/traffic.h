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

// Road traffic on a network whose objects are road segments and whose
// links are the turning movements between them. Volumes are whole vehicles.

#ifndef SPATNET_TRAFFIC_H_
#define SPATNET_TRAFFIC_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "spatnet/network.h"
#include "spatnet/propagation.h"
#include "spatnet/rng.h"

namespace spatnet::traffic {

// Object parameter names of the traffic schema.
inline constexpr const char* kDirection = "direction";
inline constexpr const char* kLength = "length_m";
inline constexpr const char* kLanes = "lanes";
inline constexpr const char* kPracticalCapacity = "practical_capacity";
inline constexpr const char* kFreeFlowSpeed = "free_flow_speed_mps";
inline constexpr const char* kCurrentMeanSpeed = "current_mean_speed_mps";
inline constexpr const char* kCurrentVolume = "current_volume";

struct RoadParams {
  ObjectId road_id;
  std::string direction;
  double length_m = 0.0;
  std::int64_t lanes = 1;
  std::int64_t practical_capacity = 0;  // vehicles per lane
  double free_flow_speed = 0.0;         // m/s
  double current_mean_speed = 0.0;      // m/s
  std::int64_t current_volume = 0;      // vehicles on the whole road

  std::int64_t capacity_total() const { return practical_capacity * lanes; }
};

// Reads the traffic schema from an object. Throws kMissingParameter or
// kSchemaMismatch; with `strict`, also rejects speeds outside
// (0, free_flow_speed] and volumes outside [0, capacity_total].
RoadParams ReadRoad(const SpatialObject& obj, bool strict = true);
void WriteRoad(ParameterVector& params, const RoadParams& road);

// Checks every road (strictly) and the per-object factor sums.
void ValidateTrafficNetwork(const Network& net);

struct BprCoefficients {
  double alpha = 0.15;
  double beta = 4.0;
};

// s = free_flow / (1 + alpha * (volume / capacity)^beta). Throws
// kZeroCapacity when capacity_total <= 0.
double BprSpeed(double free_flow_speed, double volume, double capacity_total,
                const BprCoefficients& bpr = {});

// Free-flow crossing time of the longest-to-cross road. Throws
// kEmptyNetwork, kInvalidArgument for non-positive length or speed.
double DeriveTimeStep(const Network& net);

// Spacing in seconds between consecutive exiting vehicles of one lane when
// the vehicles are spread evenly: (length / speed) / max(volume / lanes, 1).
double VehicleHeadway(const RoadParams& road);

// Vehicles that can leave the road within t_s: n_s = floor(t_s / t_v *
// lanes), capped by the current volume. `headway` overrides t_v.
std::int64_t OutgoingVolume(const RoadParams& road, double t_s,
                            std::optional<double> headway = std::nullopt);

// Free room on the road: (c - v / lanes) * lanes, floored at zero.
std::int64_t IncomingCapacity(const RoadParams& road);

// Links into every road whose feeders' summed outgoing volume exceeds its
// free room; only these links apply the receiving factor r.
std::set<LinkId> MarkOversubscribedLinks(const Network& net, double t_s,
                                         std::optional<double> headway = std::nullopt);

enum class TrafficMode { kDeterministic, kProbabilistic };

struct TrafficOptions {
  TrafficMode mode = TrafficMode::kDeterministic;
  BprCoefficients bpr;
  std::optional<double> headway;
  // Passes c_b = v_o to the probabilistic procedures in place of the
  // receiver's capacity. Transfers are still clamped to the receiver's free
  // room.
  bool literal_receiver_capacity = false;
};

struct TrafficStepReport {
  std::set<LinkId> marked;
  std::map<LinkId, std::int64_t> transferred;
};

// One time step: couplings, link marking, per-link transfers in ascending
// link id (all read from the step-start state, committed together), then
// the BPR speed update. Throws kSchemaMismatch / kMissingParameter.
TrafficStepReport TrafficStep(Network& net, double t_s, const TrafficOptions& options, Rng& rng,
                              std::vector<NetworkCoupling>* couplings = nullptr);

struct RoadState {
  std::int64_t current_volume = 0;
  double current_mean_speed = 0.0;
  friend bool operator==(const RoadState&, const RoadState&) = default;
};

struct TrafficRun {
  double time_step = 0.0;
  // states[0] is the initial state.
  std::vector<std::map<ObjectId, RoadState>> states;
  std::vector<TrafficStepReport> reports;
  Network final_network;
};

// Validates the network, derives the time step and runs `steps` steps.
TrafficRun RunTraffic(Network net, const TrafficOptions& options,
                      std::vector<NetworkCoupling> couplings, std::uint64_t steps,
                      std::uint64_t seed);

// step,road_id,current_volume,current_mean_speed
void WriteTrafficCsv(std::ostream& out, const TrafficRun& run);

struct GridSpec {
  int size = 4;  // intersections per side
  double block_length_m = 200.0;
};

// A closed grid of size x size intersections joined by two-way streets,
// each direction a separate road object. Turning links join a road to every
// road leaving its end intersection except its own reverse; q and r split
// evenly. Initial volumes are a fixed function of the road id.
Network MakeTrafficGrid(const GridSpec& spec = {});

}  // namespace spatnet::traffic

#endif  // SPATNET_TRAFFIC_H_
