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

#ifndef KGSYN_SYNTHETIC_H_
#define KGSYN_SYNTHETIC_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgsyn/dataset.h"
#include "kgsyn/kg.h"

namespace kgsyn {

enum class Perturbation : std::uint8_t {
  kIdentity,
  kCharDrop,
  kCharSwap,
  kSubwordSubstitution,  // one character replaced by an unrelated formal character
  kParaphrase,           // colloquial characters only, never shares a subword
};
inline constexpr std::size_t kNumPerturbations = 5;

std::string_view perturbation_name(Perturbation p);
std::optional<Perturbation> parse_perturbation(std::string_view name);

struct SyntheticSpec {
  std::size_t depth = 3;
  std::size_t branching = 3;
  std::size_t instances_per_leaf = 5;
  std::size_t relation_types = 4;
  std::size_t instance_links = 2;          // S_l triples per instance
  std::size_t instance_concept_links = 2;  // S_IC triples per instance
  std::size_t concept_links = 2;           // S_CC triples per concept
  std::size_t variants = 5;                // mentions per entity
  std::vector<Perturbation> perturbations = {
      Perturbation::kIdentity, Perturbation::kCharDrop, Perturbation::kCharSwap,
      Perturbation::kSubwordSubstitution, Perturbation::kParaphrase};
  std::array<double, 3> split = {0.8, 0.1, 0.1};  // train, dev, test
  std::size_t colloquial_per_concept = 4;
  std::size_t corpus_lines_per_entity = 3;
  std::uint64_t seed = 0;

  // Throws kSpecInvalid.
  void validate() const;
};

struct SyntheticData {
  std::vector<RawTriple> triples;
  KindRegistry kinds;
  KnowledgeGraph kg;
  PairDataset pairs;
  std::vector<std::string> corpus;
  // Indices into pairs.pairs built from kParaphrase.
  std::vector<std::size_t> paraphrase_pairs;
};

SyntheticData generate_synthetic(const SyntheticSpec &spec);

// triples.tsv, kinds.tsv, pairs.tsv and corpus.txt; creates dir if needed.
void write_bundle(const std::string &dir, const SyntheticData &data);

}  // namespace kgsyn

#endif  // KGSYN_SYNTHETIC_H_
