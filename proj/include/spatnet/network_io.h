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

#ifndef SPATNET_NETWORK_IO_H_
#define SPATNET_NETWORK_IO_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "spatnet/network.h"

namespace spatnet {

using WarningSink = std::function<void(const std::string&)>;

// JSON network document:
//   {"topology": "point"|"polyline"|"polygon", "k"?: int, "c"?: int,
//    "objects": [{"id", "p"?, "geometry"?, "params"?}],
//    "links": [{"link_id", "from", "to", "l"?, "q"?, "r"?, "params"?}]}
// Geometry is {"type": "point", "coords": [x, y]} or
// {"type": "polyline"|"polygon", "coords": [[x, y], ...]}.
// Unknown fields are reported to `warn` and otherwise ignored. Structural
// problems (dangling endpoints, duplicate ids, bad values) throw kParseError
// with the offending element named; the original error code is kept in the
// message.
Network NetworkFromJson(const nlohmann::json& doc, const WarningSink& warn = {});
Network ParseNetwork(std::string_view text, const WarningSink& warn = {});
Network LoadNetwork(const std::filesystem::path& path, const WarningSink& warn = {});

nlohmann::json NetworkToJson(const Network& net);
void SaveNetwork(const Network& net, const std::filesystem::path& path);

nlohmann::json ParamsToJson(const ParameterVector& params);
// Throws kParseError naming `context` for unsupported value kinds.
ParameterVector ParamsFromJson(const nlohmann::json& obj, const std::string& context);

nlohmann::json GeometryToJson(const Geometry& geometry);
Geometry GeometryFromJson(const nlohmann::json& obj, const std::string& context);

std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace spatnet

#endif  // SPATNET_NETWORK_IO_H_
