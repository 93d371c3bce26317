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

#include "spatnet/simulation.h"

#include "spatnet/error.h"

namespace spatnet {

namespace {

void ApplyCouplings(std::vector<NetworkCoupling>& couplings, Network& net) {
  for (NetworkCoupling& c : couplings) ApplyCoupling(c, c.related, net);
}

// One synchronous round of interactions over `links`, in order. Every
// interaction reads the snapshot taken on entry; changes are committed
// together at the end. Stochastic sets instead see the sending object as
// left by its earlier outgoing draws this round, so independent draws over
// several links cannot overdraw it.
void RunInteractions(Network& net, const InteractionSet& iset, const std::vector<LinkId>& links,
                     Rng& rng, std::map<ObjectId, int>& counts) {
  std::map<ObjectId, ParameterVector> objects;
  std::map<LinkId, ParameterVector> link_vectors;
  std::map<ObjectId, PendingUpdates> object_updates;
  std::map<LinkId, PendingUpdates> link_updates;
  std::map<ObjectId, ParameterVector> sending;
  const auto cap = iset.max_interactions_per_object;

  for (LinkId id : links) {
    const Link& link = net.link(id);
    if (cap && (counts[link.from] >= *cap || counts[link.to] >= *cap)) continue;
    ++counts[link.from];
    ++counts[link.to];
    const ParameterVector& va =
        objects.try_emplace(link.from, net.object(link.from).params).first->second;
    const ParameterVector& vb =
        objects.try_emplace(link.to, net.object(link.to).params).first->second;
    const ParameterVector& ve = link_vectors.try_emplace(id, LinkVector(link)).first->second;
    if (iset.stochastic) {
      ParameterVector& from = sending.try_emplace(link.from, va).first->second;
      InteractionResult res = ApplyInteraction(iset, from, vb, ve, &rng);
      object_updates[link.from].Record(from, res.a);
      object_updates[link.to].Record(vb, res.b);
      link_updates[id].Record(ve, res.e);
      from = std::move(res.a);
      continue;
    }
    InteractionResult res = ApplyInteraction(iset, va, vb, ve, &rng);
    object_updates[link.from].Record(va, res.a);
    object_updates[link.to].Record(vb, res.b);
    link_updates[id].Record(ve, res.e);
  }
  for (const auto& [id, pending] : object_updates) {
    if (!pending.empty()) net.mutable_object(id).params = pending.Commit(objects.at(id));
  }
  for (const auto& [id, pending] : link_updates) {
    if (!pending.empty()) StoreLinkVector(net, id, pending.Commit(link_vectors.at(id)));
  }
}

std::set<ObjectId> ChangedObjects(const SimulationState& before, const Network& after) {
  std::set<ObjectId> changed;
  for (const auto& [id, obj] : after.objects()) {
    if (before.objects.at(id) != obj.params) changed.insert(id);
  }
  return changed;
}

}  // namespace

SimulationState CaptureState(const Network& net, std::uint64_t step, const Rng& rng) {
  SimulationState s;
  s.step = step;
  for (const auto& [id, obj] : net.objects()) s.objects.emplace(id, obj.params);
  for (const auto& [id, link] : net.links()) s.links.emplace(id, LinkVector(link));
  s.rng_seed = rng.seed();
  s.rng_position = rng.position();
  return s;
}

SimulationRun SimulateFull(Network net, const InteractionSet& iset,
                           std::vector<NetworkCoupling> couplings, std::uint64_t steps,
                           std::uint64_t seed) {
  Rng rng(seed);
  SimulationRun run{.states = {}, .final_network = Network(net.topology()), .interactions = {}};
  std::vector<LinkId> order;
  for (const auto& [id, link] : net.links()) order.push_back(id);

  run.states.push_back(CaptureState(net, 0, rng));
  for (std::uint64_t step = 1; step <= steps; ++step) {
    ApplyCouplings(couplings, net);
    RunInteractions(net, iset, order, rng, run.interactions);
    run.states.push_back(CaptureState(net, step, rng));
  }
  run.final_network = std::move(net);
  return run;
}

SimulationRun SimulateFrontier(Network net, const InteractionSet& iset,
                               std::vector<NetworkCoupling> couplings,
                               const std::set<ObjectId>& initial, std::uint64_t steps,
                               std::uint64_t seed, FrontierMode mode) {
  if (initial.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "frontier simulation needs initial objects");
  }
  for (ObjectId id : initial) net.object(id);

  Rng rng(seed);
  SimulationRun run{.states = {}, .final_network = Network(net.topology()), .interactions = {}};
  std::set<ObjectId> affected = initial;
  run.states.push_back(CaptureState(net, 0, rng));
  for (std::uint64_t step = 1; step <= steps; ++step) {
    const SimulationState& before = run.states.back();
    ApplyCouplings(couplings, net);
    std::vector<LinkId> order;
    for (ObjectId id : affected) {
      for (LinkId l : net.Outgoing(id)) order.push_back(l);
    }
    RunInteractions(net, iset, order, rng, run.interactions);
    std::set<ObjectId> changed = ChangedObjects(before, net);
    if (mode == FrontierMode::kCumulative) {
      affected.insert(changed.begin(), changed.end());
    } else {
      affected = std::move(changed);
    }
    run.states.push_back(CaptureState(net, step, rng));
  }
  run.final_network = std::move(net);
  return run;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void WriteStatesCsv(std::ostream& out, const std::vector<SimulationState>& states) {
  out << "step,element_kind,id,param,value\n";
  for (const SimulationState& s : states) {
    for (const auto& [id, params] : s.objects) {
      for (const auto& [name, value] : params) {
        out << s.step << ",object," << id.value << ',' << CsvField(name) << ','
            << CsvField(ToString(value)) << '\n';
      }
    }
    for (const auto& [id, params] : s.links) {
      for (const auto& [name, value] : params) {
        out << s.step << ",link," << id.value << ',' << CsvField(name) << ','
            << CsvField(ToString(value)) << '\n';
      }
    }
  }
}

}  // namespace spatnet
