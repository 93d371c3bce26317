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

#ifndef SPATNET_NETWORK_H_
#define SPATNET_NETWORK_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "spatnet/geometry.h"
#include "spatnet/ids.h"
#include "spatnet/param_vector.h"
#include "spatnet/violation.h"

namespace spatnet {

struct SpatialObject {
  ObjectId id;
  std::optional<Geometry> geometry;
  // Hierarchy category; smaller is higher rank.
  std::optional<int> category;
  ParameterVector params;
};

// One row of the network registry: a directed link FROM -> TO.
struct Link {
  LinkId id;
  ObjectId from;
  ObjectId to;
  std::optional<int> category;
  double q = 1.0;  // splitting factor
  double r = 1.0;  // receiving factor
  ParameterVector params;
};

struct Degrees {
  std::size_t in = 0;
  std::size_t out = 0;
  friend bool operator==(const Degrees&, const Degrees&) = default;
};

// Objects plus the directed link registry. Every link endpoint resolves to a
// stored object and there is at most one link per ordered object pair; both
// are enforced on insertion. Objects and links iterate in ascending id order.
class Network {
 public:
  explicit Network(TopologyKind topology = TopologyKind::kPoint) : topology_(topology) {}

  TopologyKind topology() const { return topology_; }

  std::optional<int> category_count() const { return category_count_; }
  std::optional<int> link_category_count() const { return link_category_count_; }
  void set_category_count(std::optional<int> k) { category_count_ = k; }
  void set_link_category_count(std::optional<int> c) { link_category_count_ = c; }

  // Throws kDuplicateId, kTopologyMismatch, kInvalidArgument (id <= 0) or
  // kInvalidConfig (category outside [1, k] when k is declared).
  void AddObject(SpatialObject object);
  // Throws kDanglingEndpoint, kDuplicateDirectedPair, kSelfLoop,
  // kFactorOutOfRange, kDuplicateId, kInvalidArgument.
  void AddLink(Link link);
  // Adds the link with the next free id and returns that id.
  LinkId Connect(ObjectId from, ObjectId to, double q = 1.0, double r = 1.0);

  bool HasObject(ObjectId id) const { return objects_.contains(id); }
  bool HasLink(LinkId id) const { return links_.contains(id); }
  // Throw kUnknownObject / kUnknownLink.
  const SpatialObject& object(ObjectId id) const;
  SpatialObject& mutable_object(ObjectId id);
  const Link& link(LinkId id) const;
  Link& mutable_link(LinkId id);

  const std::map<ObjectId, SpatialObject>& objects() const { return objects_; }
  const std::map<LinkId, Link>& links() const { return links_; }
  std::size_t object_count() const { return objects_.size(); }
  std::size_t link_count() const { return links_.size(); }

  std::optional<LinkId> FindLink(ObjectId from, ObjectId to) const;
  // Link ids in ascending order. Throw kUnknownObject.
  std::span<const LinkId> Outgoing(ObjectId id) const;
  std::span<const LinkId> Incoming(ObjectId id) const;
  Degrees DegreesOf(ObjectId id) const;

  // Rewrites the link factors, validating the [0, 1] range.
  void SetFactors(LinkId id, double q, double r);

  void ClearLinks();

 private:
  TopologyKind topology_;
  std::optional<int> category_count_;
  std::optional<int> link_category_count_;
  std::map<ObjectId, SpatialObject> objects_;
  std::map<LinkId, Link> links_;
  std::map<ObjectId, std::vector<LinkId>> outgoing_;
  std::map<ObjectId, std::vector<LinkId>> incoming_;
  std::map<std::pair<ObjectId, ObjectId>, LinkId> pairs_;
};

// One IsolatedObject violation per object that takes part in no link.
std::vector<Violation> ValidateRegistry(const Network& net);

// Sum of q over outgoing links must not exceed 1 for any object, and the sum
// of r over incoming links likewise. Throws kSplitFactorSumExceedsOne or
// kReceiveFactorSumExceedsOne naming the first offending object.
void CheckFactorSums(const Network& net, double tolerance = 1e-9);

struct RegistryBuildOptions {
  double epsilon = kDefaultEpsilon;
  bool bidirectional = true;
};

// Replaces the registry with links computed from endpoint contact between
// line features. Only polyline networks are supported; every object needs
// geometry. Link ids are assigned from 1 in (from, to) order with q = r = 1.
// Throws kUnsupportedTopology, kMissingGeometry.
void BuildRegistryFromGeometry(Network& net, const RegistryBuildOptions& options = {});

}  // namespace spatnet

#endif  // SPATNET_NETWORK_H_
