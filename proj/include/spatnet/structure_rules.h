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

#ifndef SPATNET_STRUCTURE_RULES_H_
#define SPATNET_STRUCTURE_RULES_H_

#include <optional>
#include <string_view>
#include <vector>

#include "spatnet/network.h"
#include "spatnet/violation.h"

namespace spatnet {

// Category configuration for hierarchically linked networks. Smaller
// category numbers are higher rank. `a` is the object-rule threshold and
// `a_link` the link-rule threshold.
struct HierarchyConfig {
  int k = 1;
  int a = 1;
  std::optional<int> c;
  std::optional<int> a_link;

  // Throws kInvalidConfig unless 1 <= a <= k and, when c is set,
  // 1 <= a_link <= c.
  void Validate() const;
  bool has_link_rules() const { return c.has_value(); }
};

// Parses "k,a" or "k,a,c,a_link". Throws kInvalidConfig.
HierarchyConfig ParseHierarchyConfig(std::string_view text);

// Object category rules, evaluated per object O with category p:
//   rule 1 (p < a): O needs an outgoing link to some object of category
//     <= p and an incoming link from some object of category >= p;
//   rule 2: an object of the highest present category must not link to one
//     of the lowest present category, nor the reverse (skipped when only one
//     category is present);
//   rule 3 (p >= a): O needs either of the two links of rule 1.
// Min and max are taken over categories present in the data.
// Throws kMissingCategory when an object has no category and
// kInvalidConfig when one lies outside [1, k].
std::vector<Violation> DetectInvalidObjectLinks(const Network& net, const HierarchyConfig& cfg);

// Link category rules, evaluated per link L from O_i to O_f with category l:
//   rule 1 (l < a_link): O_i needs another incoming link of category <= l
//     and O_f another outgoing link of category <= l;
//   rule 2: no object may be incident to both a link of the lowest and one
//     of the highest present link category (skipped when they coincide);
//   rule 3 (l >= a_link): either of the two links of rule 1 suffices.
// Rules 1 and 3 are attributed to O_i, rule 2 to the shared object.
// Throws kMissingLinkCategory, kInvalidConfig.
std::vector<Violation> DetectInvalidLinkCategories(const Network& net,
                                                   const HierarchyConfig& cfg);

}  // namespace spatnet

#endif  // SPATNET_STRUCTURE_RULES_H_
