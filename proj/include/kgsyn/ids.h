// Copyright 2026 The kgsyn Authors.
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

#ifndef KGSYN_IDS_H_
#define KGSYN_IDS_H_

#include <compare>
#include <cstdint>
#include <functional>

namespace kgsyn {

// Dense handle of an entity (instance or concept) in a knowledge graph.
struct EntityId {
  std::uint32_t value = 0;
  auto operator<=>(const EntityId &) const = default;
};

// Dense handle of a relation name.
struct RelationId {
  std::uint32_t value = 0;
  auto operator<=>(const RelationId &) const = default;
};

}  // namespace kgsyn

template <>
struct std::hash<kgsyn::EntityId> {
  std::size_t operator()(kgsyn::EntityId id) const noexcept {
    return std::hash<std::uint32_t>()(id.value);
  }
};

template <>
struct std::hash<kgsyn::RelationId> {
  std::size_t operator()(kgsyn::RelationId id) const noexcept {
    return std::hash<std::uint32_t>()(id.value);
  }
};

#endif  // KGSYN_IDS_H_
