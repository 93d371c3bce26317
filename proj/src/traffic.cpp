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

#include "spatnet/traffic.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spatnet/error.h"
#include "spatnet/simulation.h"

namespace spatnet::traffic {

namespace {

// Floors that land within this distance below an integer are rounded up, so
// that products such as 3 * (1/3) count as whole vehicles.
constexpr double kFloorSlack = 1e-9;

std::int64_t FloorCount(double x) {
  return static_cast<std::int64_t>(std::floor(x + kFloorSlack));
}

const ParamValue& Require(const SpatialObject& obj, const char* name) {
  const ParamValue* v = obj.params.Find(name);
  if (v == nullptr) {
    throw Error(ErrorCode::kMissingParameter,
                "road " + std::to_string(obj.id.value) + " lacks '" + name + "'");
  }
  return *v;
}

[[noreturn]] void Mismatch(const SpatialObject& obj, const char* name, const std::string& why) {
  throw Error(ErrorCode::kSchemaMismatch,
              "road " + std::to_string(obj.id.value) + " '" + name + "' " + why);
}

double RequireReal(const SpatialObject& obj, const char* name) {
  const ParamValue& v = Require(obj, name);
  if (!IsNumeric(v)) Mismatch(obj, name, "must be numeric");
  return AsReal(v);
}

std::int64_t RequireInt(const SpatialObject& obj, const char* name) {
  const ParamValue& v = Require(obj, name);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  Mismatch(obj, name, "must be an integer");
}

std::map<ObjectId, RoadParams> ReadRoads(const Network& net) {
  std::map<ObjectId, RoadParams> roads;
  for (const auto& [id, obj] : net.objects()) roads.emplace(id, ReadRoad(obj, false));
  return roads;
}

}  // namespace

RoadParams ReadRoad(const SpatialObject& obj, bool strict) {
  RoadParams r;
  r.road_id = obj.id;
  const ParamValue& dir = Require(obj, kDirection);
  if (const auto* s = std::get_if<std::string>(&dir)) {
    r.direction = *s;
  } else {
    Mismatch(obj, kDirection, "must be text");
  }
  r.length_m = RequireReal(obj, kLength);
  r.lanes = RequireInt(obj, kLanes);
  r.practical_capacity = RequireInt(obj, kPracticalCapacity);
  r.free_flow_speed = RequireReal(obj, kFreeFlowSpeed);
  r.current_mean_speed = RequireReal(obj, kCurrentMeanSpeed);
  r.current_volume = RequireInt(obj, kCurrentVolume);

  if (r.lanes < 1) Mismatch(obj, kLanes, "must be at least 1");
  if (r.practical_capacity < 0) Mismatch(obj, kPracticalCapacity, "must be non-negative");
  if (r.current_volume < 0) Mismatch(obj, kCurrentVolume, "must be non-negative");
  if (!(r.length_m > 0.0)) Mismatch(obj, kLength, "must be positive");
  if (!(r.free_flow_speed > 0.0)) Mismatch(obj, kFreeFlowSpeed, "must be positive");
  if (strict) {
    if (!(r.current_mean_speed > 0.0) || r.current_mean_speed > r.free_flow_speed) {
      Mismatch(obj, kCurrentMeanSpeed, "must lie in (0, free_flow_speed_mps]");
    }
    if (r.current_volume > r.capacity_total()) {
      Mismatch(obj, kCurrentVolume, "exceeds practical_capacity * lanes");
    }
  }
  return r;
}

void WriteRoad(ParameterVector& params, const RoadParams& road) {
  params.Set(kDirection, road.direction);
  params.Set(kLength, road.length_m);
  params.Set(kLanes, road.lanes);
  params.Set(kPracticalCapacity, road.practical_capacity);
  params.Set(kFreeFlowSpeed, road.free_flow_speed);
  params.Set(kCurrentMeanSpeed, road.current_mean_speed);
  params.Set(kCurrentVolume, road.current_volume);
}

void ValidateTrafficNetwork(const Network& net) {
  if (net.object_count() == 0) throw Error(ErrorCode::kEmptyNetwork, "no roads");
  for (const auto& [id, obj] : net.objects()) ReadRoad(obj, true);
  CheckFactorSums(net);
}

double BprSpeed(double free_flow_speed, double volume, double capacity_total,
                const BprCoefficients& bpr) {
  if (!(capacity_total > 0.0)) {
    throw Error(ErrorCode::kZeroCapacity, "BPR speed needs a positive capacity");
  }
  if (volume < 0.0) throw Error(ErrorCode::kInvalidArgument, "negative volume");
  const double ratio = volume / capacity_total;
  return free_flow_speed / (1.0 + bpr.alpha * std::pow(ratio, bpr.beta));
}

double DeriveTimeStep(const Network& net) {
  if (net.object_count() == 0) throw Error(ErrorCode::kEmptyNetwork, "no roads");
  double t_s = 0.0;
  for (const auto& [id, obj] : net.objects()) {
    const double len = RequireReal(obj, kLength);
    const double ffs = RequireReal(obj, kFreeFlowSpeed);
    if (!(len > 0.0) || !(ffs > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "road " + std::to_string(id.value) + " needs positive length and speed");
    }
    t_s = std::max(t_s, len / ffs);
  }
  return t_s;
}

double VehicleHeadway(const RoadParams& road) {
  const double per_lane = static_cast<double>(road.current_volume) / road.lanes;
  return (road.length_m / road.current_mean_speed) / std::max(per_lane, 1.0);
}

std::int64_t OutgoingVolume(const RoadParams& road, double t_s, std::optional<double> headway) {
  if (!(t_s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "time step must be positive");
  if (road.current_volume <= 0) return 0;
  const double t_v = headway ? *headway : VehicleHeadway(road);
  if (!(t_v > 0.0)) throw Error(ErrorCode::kInvalidArgument, "headway must be positive");
  const double n = t_s / t_v * static_cast<double>(road.lanes);
  if (n >= static_cast<double>(road.current_volume)) return road.current_volume;
  const std::int64_t n_s = FloorCount(n);
  return n_s > road.current_volume ? road.current_volume : n_s;
}

std::int64_t IncomingCapacity(const RoadParams& road) {
  return std::max<std::int64_t>(0, road.capacity_total() - road.current_volume);
}

namespace {

std::set<LinkId> Mark(const Network& net, const std::map<ObjectId, RoadParams>& roads,
                      const std::map<ObjectId, std::int64_t>& outgoing) {
  std::set<LinkId> marked;
  for (const auto& [id, road] : roads) {
    std::int64_t demand = 0;
    for (LinkId l : net.Incoming(id)) demand += outgoing.at(net.link(l).from);
    if (demand > IncomingCapacity(road)) {
      for (LinkId l : net.Incoming(id)) marked.insert(l);
    }
  }
  return marked;
}

std::map<ObjectId, std::int64_t> OutgoingVolumes(const std::map<ObjectId, RoadParams>& roads,
                                                 double t_s, std::optional<double> headway) {
  std::map<ObjectId, std::int64_t> out;
  for (const auto& [id, road] : roads) out.emplace(id, OutgoingVolume(road, t_s, headway));
  return out;
}

}  // namespace

std::set<LinkId> MarkOversubscribedLinks(const Network& net, double t_s,
                                         std::optional<double> headway) {
  const auto roads = ReadRoads(net);
  return Mark(net, roads, OutgoingVolumes(roads, t_s, headway));
}

TrafficStepReport TrafficStep(Network& net, double t_s, const TrafficOptions& options, Rng& rng,
                              std::vector<NetworkCoupling>* couplings) {
  if (couplings != nullptr) {
    for (NetworkCoupling& c : *couplings) ApplyCoupling(c, c.related, net);
  }
  const auto roads = ReadRoads(net);
  const auto v_o = OutgoingVolumes(roads, t_s, options.headway);
  TrafficStepReport report;
  report.marked = Mark(net, roads, v_o);

  // Vehicles each road may still send and the volume each road would hold
  // counting inflow accepted so far this step.
  std::map<ObjectId, std::int64_t> sendable = v_o;
  std::map<ObjectId, std::int64_t> holding;
  for (const auto& [id, road] : roads) holding.emplace(id, road.current_volume);
  std::map<ObjectId, std::int64_t> delta;

  for (const auto& [lid, link] : net.links()) {
    const RoadParams& x = roads.at(link.from);
    const RoadParams& y = roads.at(link.to);
    const bool marked = report.marked.contains(lid);
    const std::int64_t room = std::max<std::int64_t>(0, y.capacity_total() - holding[link.to]);
    std::int64_t moved = 0;

    if (options.mode == TrafficMode::kDeterministic) {
      const std::int64_t sent = FloorCount(static_cast<double>(v_o.at(link.from)) * link.q);
      std::int64_t accept = IncomingCapacity(y);
      if (marked) accept = FloorCount(static_cast<double>(accept) * link.r);
      moved = sent < accept ? sent : accept;
    } else {
      const std::int64_t t_a = sendable[link.from];
      const std::int64_t c_b = options.literal_receiver_capacity ? v_o.at(link.from)
                                                                 : y.capacity_total();
      const std::int64_t t_b = holding[link.to];
      const std::int64_t candidate =
          ProbabilisticPropagation(x.capacity_total(), c_b, t_a, t_b, link.q, rng);
      if (marked) {
        const ReceiveResult rr = ProbabilisticReceiving(c_b, x.current_volume - delta[link.from],
                                                        t_b, candidate, link.r, rng);
        moved = rr.t_b - t_b;
      } else {
        moved = candidate;
      }
    }
    moved = std::clamp<std::int64_t>(moved, 0, std::min(room, sendable[link.from]));
    if (moved == 0) continue;
    sendable[link.from] -= moved;
    holding[link.to] += moved;
    delta[link.from] -= moved;
    delta[link.to] += moved;
    report.transferred[lid] = moved;
  }

  for (const auto& [id, road] : roads) {
    RoadParams next = road;
    next.current_volume += delta[id];
    if (next.capacity_total() > 0) {
      next.current_mean_speed =
          BprSpeed(next.free_flow_speed, static_cast<double>(next.current_volume),
                   static_cast<double>(next.capacity_total()), options.bpr);
    } else {
      next.current_mean_speed = std::min(next.current_mean_speed, next.free_flow_speed);
    }
    ParameterVector& params = net.mutable_object(id).params;
    params.Set(kCurrentVolume, next.current_volume);
    params.Set(kCurrentMeanSpeed, next.current_mean_speed);
  }
  return report;
}

namespace {

std::map<ObjectId, RoadState> Capture(const Network& net) {
  std::map<ObjectId, RoadState> s;
  for (const auto& [id, obj] : net.objects()) {
    s.emplace(id, RoadState{obj.params.GetInt(kCurrentVolume),
                            AsReal(obj.params.Get(kCurrentMeanSpeed))});
  }
  return s;
}

}  // namespace

TrafficRun RunTraffic(Network net, const TrafficOptions& options,
                      std::vector<NetworkCoupling> couplings, std::uint64_t steps,
                      std::uint64_t seed) {
  ValidateTrafficNetwork(net);
  TrafficRun run;
  run.time_step = DeriveTimeStep(net);
  Rng rng(seed);
  run.states.push_back(Capture(net));
  for (std::uint64_t step = 1; step <= steps; ++step) {
    run.reports.push_back(TrafficStep(net, run.time_step, options, rng, &couplings));
    run.states.push_back(Capture(net));
  }
  run.final_network = std::move(net);
  return run;
}

void WriteTrafficCsv(std::ostream& out, const TrafficRun& run) {
  out << "step,road_id,current_volume,current_mean_speed\n";
  for (std::size_t step = 0; step < run.states.size(); ++step) {
    for (const auto& [id, s] : run.states[step]) {
      out << step << ',' << id.value << ',' << s.current_volume << ','
          << ToString(ParamValue{s.current_mean_speed}) << '\n';
    }
  }
}

Network MakeTrafficGrid(const GridSpec& spec) {
  if (spec.size < 2 || !(spec.block_length_m > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs size >= 2 and a positive block length");
  }
  const int n = spec.size;
  struct Road {
    int from_node;
    int to_node;
    std::string direction;
    bool avenue;  // runs along a row divisible by two
  };
  std::vector<Road> roads;
  auto node = [n](int row, int col) { return row * n + col; };
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col + 1 < n; ++col) {
      roads.push_back({node(row, col), node(row, col + 1), "E", row % 2 == 0});
      roads.push_back({node(row, col + 1), node(row, col), "W", row % 2 == 0});
    }
  }
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row + 1 < n; ++row) {
      roads.push_back({node(row, col), node(row + 1, col), "S", col % 2 == 0});
      roads.push_back({node(row + 1, col), node(row, col), "N", col % 2 == 0});
    }
  }

  Network net(TopologyKind::kPolyline);
  auto coord = [&](int v) {
    return Point{(v % n) * spec.block_length_m, (v / n) * spec.block_length_m};
  };
  for (std::size_t i = 0; i < roads.size(); ++i) {
    const Road& rd = roads[i];
    RoadParams p;
    p.road_id = ObjectId(static_cast<std::int64_t>(i + 1));
    p.direction = rd.direction;
    p.length_m = spec.block_length_m * (1.0 + 0.25 * static_cast<double>(i % 3));
    p.lanes = rd.avenue ? 2 : 1;
    p.practical_capacity = rd.avenue ? 30 : 25;
    p.free_flow_speed = rd.avenue ? 16.0 : 12.5;
    p.current_volume = static_cast<std::int64_t>((i * 37 + 11) % (p.capacity_total() * 3 / 4 + 1));
    p.current_mean_speed =
        BprSpeed(p.free_flow_speed, static_cast<double>(p.current_volume),
                 static_cast<double>(p.capacity_total()));
    SpatialObject obj{.id = p.road_id,
                      .geometry = MakePolyline({coord(rd.from_node), coord(rd.to_node)}),
                      .category = std::nullopt,
                      .params = {}};
    WriteRoad(obj.params, p);
    net.AddObject(std::move(obj));
  }

  std::vector<std::vector<std::size_t>> turns(roads.size());
  std::vector<int> indeg(roads.size(), 0);
  for (std::size_t a = 0; a < roads.size(); ++a) {
    for (std::size_t b = 0; b < roads.size(); ++b) {
      if (roads[b].from_node != roads[a].to_node || roads[b].to_node == roads[a].from_node) {
        continue;
      }
      turns[a].push_back(b);
      ++indeg[b];
    }
  }
  for (std::size_t a = 0; a < roads.size(); ++a) {
    const double q = 1.0 / static_cast<double>(turns[a].size());
    for (std::size_t b : turns[a]) {
      net.Connect(ObjectId(static_cast<std::int64_t>(a + 1)),
                  ObjectId(static_cast<std::int64_t>(b + 1)), q,
                  1.0 / static_cast<double>(indeg[b]));
    }
  }
  return net;
}

}  // namespace spatnet::traffic
