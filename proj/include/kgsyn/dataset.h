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

#ifndef KGSYN_DATASET_H_
#define KGSYN_DATASET_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgsyn/ids.h"

namespace kgsyn {

enum class Split : std::uint8_t { kTrain, kDev, kTest };

std::string_view split_name(Split split);
std::optional<Split> parse_split(std::string_view tag);

// One annotated mention-entity synonym pair.
struct Pair {
  std::string mention;
  EntityId entity;
  Split split = Split::kTrain;

  bool operator==(const Pair &) const = default;
};

struct PairDataset {
  std::vector<Pair> pairs;

  std::vector<Pair> select(Split split) const;
  std::size_t count(Split split) const;

  bool operator==(const PairDataset &) const = default;
};

}  // namespace kgsyn

#endif  // KGSYN_DATASET_H_
