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

#include "spatnet/error.h"

namespace spatnet {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kTopologyMismatch: return "TopologyMismatch";
    case ErrorCode::kDanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::kDuplicateDirectedPair: return "DuplicateDirectedPair";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kFactorOutOfRange: return "FactorOutOfRange";
    case ErrorCode::kInvalidGeometry: return "InvalidGeometry";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kMissingGeometry: return "MissingGeometry";
    case ErrorCode::kUnsupportedTopology: return "UnsupportedTopology";
    case ErrorCode::kUnknownObject: return "UnknownObject";
    case ErrorCode::kUnknownLink: return "UnknownLink";
    case ErrorCode::kMissingCategory: return "MissingCategory";
    case ErrorCode::kMissingLinkCategory: return "MissingLinkCategory";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kMissingParameter: return "MissingParameter";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kNegativeCycle: return "NegativeCycle";
    case ErrorCode::kNegativeCapacity: return "NegativeCapacity";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kSplitFactorSumExceedsOne: return "SplitFactorSumExceedsOne";
    case ErrorCode::kReceiveFactorSumExceedsOne: return "ReceiveFactorSumExceedsOne";
    case ErrorCode::kDanglingCouplingReference: return "DanglingCouplingReference";
    case ErrorCode::kZeroCapacity: return "ZeroCapacity";
    case ErrorCode::kEmptyNetwork: return "EmptyNetwork";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kScenarioParseError: return "ScenarioParseError";
  }
  return "Unknown";
}

}  // namespace spatnet
