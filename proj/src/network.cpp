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

#include "spatnet/network.h"

#include <algorithm>
#include <string>

#include "spatnet/error.h"

namespace spatnet {

namespace {

std::string Str(ObjectId id) { return std::to_string(id.value); }
std::string Str(LinkId id) { return std::to_string(id.value); }

void CheckFactor(double value, const char* name, LinkId id) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kFactorOutOfRange, "link " + Str(id) + ": factor " + name +
                                                  " = " + std::to_string(value) +
                                                  " outside [0, 1]");
  }
}

void InsertSorted(std::vector<LinkId>& ids, LinkId id) {
  ids.insert(std::lower_bound(ids.begin(), ids.end(), id), id);
}

}  // namespace

void Network::AddObject(SpatialObject object) {
  if (object.id.value <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "object id must be positive, got " + Str(object.id));
  }
  if (objects_.contains(object.id)) {
    throw Error(ErrorCode::kDuplicateId, "duplicate object id " + Str(object.id));
  }
  if (object.geometry && KindOf(*object.geometry) != topology_) {
    throw Error(ErrorCode::kTopologyMismatch,
                "object " + Str(object.id) + " has " +
                    std::string(TopologyKindName(KindOf(*object.geometry))) +
                    " geometry in a " + std::string(TopologyKindName(topology_)) +
                    " network");
  }
  if (object.category && category_count_ &&
      (*object.category < 1 || *object.category > *category_count_)) {
    throw Error(ErrorCode::kInvalidConfig, "object " + Str(object.id) + ": category " +
                                               std::to_string(*object.category) +
                                               " outside [1, " +
                                               std::to_string(*category_count_) + "]");
  }
  const ObjectId id = object.id;
  objects_.emplace(id, std::move(object));
  outgoing_[id];
  incoming_[id];
}

void Network::AddLink(Link link) {
  if (link.id.value <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "link id must be positive, got " + Str(link.id));
  }
  if (links_.contains(link.id)) {
    throw Error(ErrorCode::kDuplicateId, "duplicate link id " + Str(link.id));
  }
  for (ObjectId end : {link.from, link.to}) {
    if (!objects_.contains(end)) {
      throw Error(ErrorCode::kDanglingEndpoint,
                  "link " + Str(link.id) + ": endpoint " + Str(end) +
                      " does not reference an existing object");
    }
  }
  if (link.from == link.to) {
    throw Error(ErrorCode::kSelfLoop, "link " + Str(link.id) + " connects object " +
                                          Str(link.from) + " to itself");
  }
  if (auto existing = FindLink(link.from, link.to)) {
    throw Error(ErrorCode::kDuplicateDirectedPair,
                "link " + Str(link.id) + " duplicates link " + Str(*existing) + " (" +
                    Str(link.from) + " -> " + Str(link.to) + ")");
  }
  CheckFactor(link.q, "q", link.id);
  CheckFactor(link.r, "r", link.id);
  if (link.category && link_category_count_ &&
      (*link.category < 1 || *link.category > *link_category_count_)) {
    throw Error(ErrorCode::kInvalidConfig, "link " + Str(link.id) + ": category " +
                                               std::to_string(*link.category) +
                                               " outside [1, " +
                                               std::to_string(*link_category_count_) + "]");
  }
  const LinkId id = link.id;
  pairs_.emplace(std::pair(link.from, link.to), id);
  InsertSorted(outgoing_[link.from], id);
  InsertSorted(incoming_[link.to], id);
  links_.emplace(id, std::move(link));
}

LinkId Network::Connect(ObjectId from, ObjectId to, double q, double r) {
  const LinkId id{links_.empty() ? 1 : links_.rbegin()->first.value + 1};
  AddLink(Link{.id = id, .from = from, .to = to, .category = std::nullopt, .q = q, .r = r, .params = {}});
  return id;
}

const SpatialObject& Network::object(ObjectId id) const {
  auto it = objects_.find(id);
  if (it == objects_.end()) throw Error(ErrorCode::kUnknownObject, "unknown object " + Str(id));
  return it->second;
}

SpatialObject& Network::mutable_object(ObjectId id) {
  auto it = objects_.find(id);
  if (it == objects_.end()) throw Error(ErrorCode::kUnknownObject, "unknown object " + Str(id));
  return it->second;
}

const Link& Network::link(LinkId id) const {
  auto it = links_.find(id);
  if (it == links_.end()) throw Error(ErrorCode::kUnknownLink, "unknown link " + Str(id));
  return it->second;
}

Link& Network::mutable_link(LinkId id) {
  auto it = links_.find(id);
  if (it == links_.end()) throw Error(ErrorCode::kUnknownLink, "unknown link " + Str(id));
  return it->second;
}

std::optional<LinkId> Network::FindLink(ObjectId from, ObjectId to) const {
  auto it = pairs_.find(std::pair(from, to));
  if (it == pairs_.end()) return std::nullopt;
  return it->second;
}

std::span<const LinkId> Network::Outgoing(ObjectId id) const {
  auto it = outgoing_.find(id);
  if (it == outgoing_.end()) throw Error(ErrorCode::kUnknownObject, "unknown object " + Str(id));
  return it->second;
}

std::span<const LinkId> Network::Incoming(ObjectId id) const {
  auto it = incoming_.find(id);
  if (it == incoming_.end()) throw Error(ErrorCode::kUnknownObject, "unknown object " + Str(id));
  return it->second;
}

Degrees Network::DegreesOf(ObjectId id) const {
  return Degrees{.in = Incoming(id).size(), .out = Outgoing(id).size()};
}

void Network::SetFactors(LinkId id, double q, double r) {
  Link& l = mutable_link(id);
  CheckFactor(q, "q", id);
  CheckFactor(r, "r", id);
  l.q = q;
  l.r = r;
}

void Network::ClearLinks() {
  links_.clear();
  pairs_.clear();
  for (auto& [id, ids] : outgoing_) ids.clear();
  for (auto& [id, ids] : incoming_) ids.clear();
}

std::vector<Violation> ValidateRegistry(const Network& net) {
  std::vector<Violation> out;
  for (const auto& [id, obj] : net.objects()) {
    const Degrees d = net.DegreesOf(id);
    if (d.in == 0 && d.out == 0) {
      out.push_back({Rule::kIsolatedObject, id,
                     "object " + Str(id) + " takes part in no link"});
    }
  }
  return out;
}

void CheckFactorSums(const Network& net, double tolerance) {
  for (const auto& [id, obj] : net.objects()) {
    double q_sum = 0.0;
    for (LinkId l : net.Outgoing(id)) q_sum += net.link(l).q;
    if (q_sum > 1.0 + tolerance) {
      throw Error(ErrorCode::kSplitFactorSumExceedsOne,
                  "object " + Str(id) + ": outgoing q factors sum to " +
                      std::to_string(q_sum));
    }
    double r_sum = 0.0;
    for (LinkId l : net.Incoming(id)) r_sum += net.link(l).r;
    if (r_sum > 1.0 + tolerance) {
      throw Error(ErrorCode::kReceiveFactorSumExceedsOne,
                  "object " + Str(id) + ": incoming r factors sum to " +
                      std::to_string(r_sum));
    }
  }
}

void BuildRegistryFromGeometry(Network& net, const RegistryBuildOptions& options) {
  if (net.topology() != TopologyKind::kPolyline) {
    throw Error(ErrorCode::kUnsupportedTopology,
                "registry construction from geometry needs a polyline network, got " +
                    std::string(TopologyKindName(net.topology())));
  }
  std::vector<const SpatialObject*> objs;
  for (const auto& [id, obj] : net.objects()) {
    if (!obj.geometry) {
      throw Error(ErrorCode::kMissingGeometry, "object " + Str(id) + " has no geometry");
    }
    objs.push_back(&obj);
  }
  // objs is ascending by id, so i < j gives the lower id first.
  std::vector<std::pair<ObjectId, ObjectId>> pairs;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const auto& a = std::get<Polyline>(*objs[i]->geometry);
    for (std::size_t j = i + 1; j < objs.size(); ++j) {
      const auto& b = std::get<Polyline>(*objs[j]->geometry);
      if (!TouchesLineLine(a, b, options.epsilon)) continue;
      pairs.emplace_back(objs[i]->id, objs[j]->id);
      if (options.bidirectional) pairs.emplace_back(objs[j]->id, objs[i]->id);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  net.ClearLinks();
  std::int64_t next = 1;
  for (const auto& [from, to] : pairs) {
    net.AddLink(Link{.id = LinkId{next++},
                     .from = from,
                     .to = to,
                     .category = std::nullopt,
                     .q = 1.0,
                     .r = 1.0,
                     .params = {}});
  }
}

}  // namespace spatnet
