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

#ifndef SPATNET_VIOLATION_H_
#define SPATNET_VIOLATION_H_

#include <string>
#include <string_view>
#include <vector>

#include "spatnet/ids.h"

namespace spatnet {

enum class Rule {
  kObjRule1,
  kObjRule2,
  kObjRule3,
  kLinkRule1,
  kLinkRule2,
  kLinkRule3,
  kIsolatedObject,
  kPointNoFlow,
};

std::string_view RuleName(Rule rule);

struct Violation {
  Rule rule;
  ObjectId subject;
  std::string detail;
};

// Sorts by (subject, rule) and drops repeated (subject, rule) pairs, keeping
// the first detail text.
void NormalizeViolations(std::vector<Violation>& violations);

}  // namespace spatnet

#endif  // SPATNET_VIOLATION_H_
