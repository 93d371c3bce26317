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

#include "spatnet/violation.h"

#include <algorithm>
#include <utility>

namespace spatnet {

std::string_view RuleName(Rule rule) {
  switch (rule) {
    case Rule::kObjRule1: return "ObjRule1";
    case Rule::kObjRule2: return "ObjRule2";
    case Rule::kObjRule3: return "ObjRule3";
    case Rule::kLinkRule1: return "LinkRule1";
    case Rule::kLinkRule2: return "LinkRule2";
    case Rule::kLinkRule3: return "LinkRule3";
    case Rule::kIsolatedObject: return "IsolatedObject";
    case Rule::kPointNoFlow: return "PointNoFlow";
  }
  return "Unknown";
}

void NormalizeViolations(std::vector<Violation>& violations) {
  std::stable_sort(violations.begin(), violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return std::pair(a.subject, a.rule) < std::pair(b.subject, b.rule);
                   });
  auto last = std::unique(violations.begin(), violations.end(),
                          [](const Violation& a, const Violation& b) {
                            return a.subject == b.subject && a.rule == b.rule;
                          });
  violations.erase(last, violations.end());
}

}  // namespace spatnet
