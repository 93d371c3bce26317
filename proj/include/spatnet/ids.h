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

#ifndef SPATNET_IDS_H_
#define SPATNET_IDS_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>

namespace spatnet {

// Integer identifier tagged by the kind of element it names, so object ids
// and link ids cannot be swapped by accident.
template <typename Tag>
struct StrongId {
  std::int64_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::int64_t v) : value(v) {}

  friend constexpr auto operator<=>(StrongId, StrongId) = default;
  friend std::ostream& operator<<(std::ostream& os, StrongId id) {
    return os << id.value;
  }
};

struct ObjectIdTag {};
struct LinkIdTag {};

using ObjectId = StrongId<ObjectIdTag>;
using LinkId = StrongId<LinkIdTag>;

}  // namespace spatnet

template <typename Tag>
struct std::hash<spatnet::StrongId<Tag>> {
  std::size_t operator()(spatnet::StrongId<Tag> id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};

#endif  // SPATNET_IDS_H_
