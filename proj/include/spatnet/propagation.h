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

#ifndef SPATNET_PROPAGATION_H_
#define SPATNET_PROPAGATION_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spatnet/network.h"
#include "spatnet/rng.h"

namespace spatnet {

// Reserved names under which a link's splitting and receiving factors
// appear in the link parameter vector handed to interaction functions.
inline constexpr const char* kFactorQ = "q";
inline constexpr const char* kFactorR = "r";

// The link's params with its q and r factors added as reals.
ParameterVector LinkVector(const Link& link);
// Writes a vector produced by LinkVector back into the link, validating the
// factor range.
void StoreLinkVector(Network& net, LinkId id, const ParameterVector& v);

struct InteractionResult {
  ParameterVector a;  // V_A'
  ParameterVector b;  // V_B'
  ParameterVector e;  // V_E'
};

// Object interaction functions for one directed interaction A -> B over link
// E: V_B' = f(V_A, V_B, V_E), V_A' = e(V_A, V_B, V_E), V_E' = l(V_A, V_B).
// Empty functions act as the identity on their output.
struct InteractionSet {
  using ObjectFn = std::function<ParameterVector(const ParameterVector& a,
                                                 const ParameterVector& b,
                                                 const ParameterVector& e)>;
  using LinkFn = std::function<ParameterVector(const ParameterVector& a,
                                               const ParameterVector& b)>;
  // Randomised interaction drawing from the engine's generator. When set it
  // replaces f, e and l.
  using StochasticFn = std::function<InteractionResult(
      const ParameterVector& a, const ParameterVector& b, const ParameterVector& e, Rng& rng)>;

  std::string name;
  ObjectFn f;
  ObjectFn e;
  LinkFn l;
  StochasticFn stochastic;
  // Object parameters every interacting object must carry.
  std::vector<std::string> required;
  // Cap on interactions any single object takes part in during one run.
  std::optional<int> max_interactions_per_object;

  static InteractionSet Identity();
  // Moves min(rate, A.param) * q from A to B, where q is the link's
  // splitting factor. Integer parameters move floor of that amount. With
  // `probabilistic`, the amount is drawn by ProbabilisticPropagation with
  // t_a = min(rate, A.param) and the link's q.
  static InteractionSet ConservativeTransfer(std::string param, double rate,
                                             bool probabilistic = false);
};

// Applies the set to pre-interaction vectors; all three functions see the
// original inputs. Throws kSchemaMismatch when a required parameter is
// missing or an output does not keep its input's names and value kinds.
// `rng` is needed only for stochastic sets (kInvalidArgument otherwise).
InteractionResult ApplyInteraction(const InteractionSet& iset, const ParameterVector& a,
                                   const ParameterVector& b, const ParameterVector& e,
                                   Rng* rng = nullptr);

// Bifurcation split: delta_i = p_a * q_i. Throws kFactorOutOfRange.
std::vector<double> SplitOutflow(double p_a, std::span<const double> q);

// Capacity-limited merge: contributions are accepted unchanged while their
// sum fits max_p_a, otherwise each is limited to min(p_i, max_p_a * r_i).
// Throws kFactorOutOfRange, kInvalidArgument on length mismatch.
std::vector<double> CapInflow(double max_p_a, std::span<const double> contributions,
                              std::span<const double> r);

// Unit-by-unit propagation decision. Up to t_a uniform draws n_1; each
// n_1 <= q adds one unit, stopping once t_b + volume reaches c_b or when
// c_a is zero. Returns the candidate volume.
std::int64_t ProbabilisticPropagation(std::int64_t c_a, std::int64_t c_b, std::int64_t t_a,
                                      std::int64_t t_b, double q, Rng& rng);

struct ReceiveResult {
  std::int64_t t_a = 0;
  std::int64_t t_b = 0;
  friend bool operator==(const ReceiveResult&, const ReceiveResult&) = default;
};

// Unit-by-unit acceptance. Up to c_b uniform draws n_2 while volume remains
// and t_b < c_b; each n_2 <= r moves one unit from t_a to t_b.
// t_a + t_b is preserved.
ReceiveResult ProbabilisticReceiving(std::int64_t c_b, std::int64_t t_a, std::int64_t t_b,
                                     std::int64_t volume, double r, Rng& rng);

struct ObjectPair {
  ObjectId source;  // element of the related network N
  ObjectId target;  // element of the simulated network D
};

struct LinkPair {
  LinkId source;
  LinkId target;
};

struct StaticRelation {
  std::vector<ObjectPair> objects;
  std::vector<LinkPair> links;
};

// Pairs every object of N with every object of D whose geometries lie
// within `range` (Euclidean) of each other.
struct DynamicRelation {
  double range = 0.0;
};

// Interaction between two networks: for related objects A in N and B in D,
// V_B' = f(V_A, V_B) and V_A' = g(V_A, V_B); for related links E in N and L
// in D, V_L' = k(V_E, V_L) and V_E' = m(V_E, V_L). Empty functions are the
// identity.
struct NetworkCoupling {
  using Fn = std::function<ParameterVector(const ParameterVector& source,
                                           const ParameterVector& target)>;

  std::variant<StaticRelation, DynamicRelation> relation;
  Fn f;
  Fn g;
  Fn k;
  Fn m;
  // The related network N. Simulations evolve their own copy.
  Network related;
};

// Object pairs related under the coupling's relation, in (source, target)
// order. Throws kDanglingCouplingReference, kMissingGeometry.
std::vector<ObjectPair> RelatedObjects(const NetworkCoupling& coupling, const Network& n,
                                       const Network& d);

// Applies the coupling functions to every related pair, reading pre-update
// vectors of both networks. Quantitative changes from several pairs
// touching one element add up.
void ApplyCoupling(const NetworkCoupling& coupling, Network& n, Network& d);

// Collects changes to parameter vectors against a fixed snapshot and
// commits them together. Numeric parameters accumulate additively across
// writers; text parameters take the last written value.
class PendingUpdates {
 public:
  // Throws kSchemaMismatch when a value changes kind.
  void Record(const ParameterVector& before, const ParameterVector& after);
  bool empty() const { return deltas_.empty(); }
  ParameterVector Commit(const ParameterVector& before) const;

 private:
  struct Delta {
    ParamValue sum;
    ParamValue last;
    int writers = 0;
  };
  std::map<std::string, Delta, std::less<>> deltas_;
};

}  // namespace spatnet

#endif  // SPATNET_PROPAGATION_H_
