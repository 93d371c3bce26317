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

#ifndef SPATNET_ERROR_H_
#define SPATNET_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace spatnet {

enum class ErrorCode {
  kDuplicateId,
  kTopologyMismatch,
  kDanglingEndpoint,
  kDuplicateDirectedPair,
  kSelfLoop,
  kFactorOutOfRange,
  kInvalidGeometry,
  kNonFiniteValue,
  kMissingGeometry,
  kUnsupportedTopology,
  kUnknownObject,
  kUnknownLink,
  kMissingCategory,
  kMissingLinkCategory,
  kInvalidConfig,
  kMissingParameter,
  kNegativeWeight,
  kNegativeCycle,
  kNegativeCapacity,
  kInvalidArgument,
  kSchemaMismatch,
  kSplitFactorSumExceedsOne,
  kReceiveFactorSumExceedsOne,
  kDanglingCouplingReference,
  kZeroCapacity,
  kEmptyNetwork,
  kParseError,
  kScenarioParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code
// identifies the failure class; what() carries a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spatnet

#endif  // SPATNET_ERROR_H_
