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

#include "kgsyn/dataset.h"

#include <algorithm>

namespace kgsyn {

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view tag) {
  if (tag == "train") return Split::kTrain;
  if (tag == "dev") return Split::kDev;
  if (tag == "test") return Split::kTest;
  return std::nullopt;
}

std::vector<Pair> PairDataset::select(Split split) const {
  std::vector<Pair> out;
  std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
               [split](const Pair &p) { return p.split == split; });
  return out;
}

std::size_t PairDataset::count(Split split) const {
  return static_cast<std::size_t>(std::count_if(
      pairs.begin(), pairs.end(), [split](const Pair &p) { return p.split == split; }));
}

}  // namespace kgsyn
