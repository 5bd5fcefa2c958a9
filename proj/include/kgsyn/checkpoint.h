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

#ifndef KGSYN_CHECKPOINT_H_
#define KGSYN_CHECKPOINT_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgsyn/kg.h"
#include "kgsyn/kge.h"
#include "kgsyn/matcher.h"
#include "kgsyn/semantic.h"

namespace kgsyn {

// Versioned binary container.
//
//   "KGSYNCKP"                      8-byte magic
//   u32 version
//   str kind                        "kge", "matcher", ...
//   u64 seed, u64 config_hash
//   u32 count, then (str name, u64 value) header counters (n, |I|, ...)
//   u32 count, then sections in insertion order:
//     u8 type, str name
//     type 1 (f64 tensor): u32 rank, u64 dims[rank], f64 values[]
//     type 2 (strings):    u64 count, str values[]
//   u64 FNV-1a checksum of every preceding byte
//
// Integers and IEEE-754 doubles are little-endian; str is u32 length + bytes.
class Checkpoint {
 public:
  static constexpr std::uint32_t kVersion = 1;
  static constexpr std::string_view kMagic = "KGSYNCKP";

  struct Tensor {
    std::vector<std::uint64_t> dims;
    std::vector<double> values;
    bool operator==(const Tensor &) const = default;
  };

  std::string kind;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<std::pair<std::string, std::uint64_t>> counters;

  void put_matrix(const std::string &name, const Matrix &m);
  void put_vector(const std::string &name, std::span<const double> v);
  void put_strings(const std::string &name, std::vector<std::string> values);

  Matrix matrix(const std::string &name) const;
  Vector vector(const std::string &name) const;
  const std::vector<std::string> &strings(const std::string &name) const;
  std::uint64_t counter(const std::string &name) const;
  bool has(const std::string &name) const;

  std::string serialize() const;
  // Throws kVersionMismatch or kCorruptChecksum.
  static Checkpoint parse(std::string_view bytes);

  void save(const std::string &path) const;
  static Checkpoint load(const std::string &path);

  bool operator==(const Checkpoint &) const = default;

 private:
  enum class Type : std::uint8_t { kTensor = 1, kStrings = 2 };
  struct Section {
    std::string name;
    Type type;
    Tensor tensor;
    std::vector<std::string> strings;
    bool operator==(const Section &) const = default;
  };

  const Section &section(const std::string &name, Type type) const;
  void put(Section s);

  std::vector<Section> sections_;
};

Checkpoint store_to_checkpoint(const KnowledgeGraph &kg, const EmbeddingStore &store,
                               std::uint64_t seed, std::uint64_t config_hash);
// Throws kMissingEmbedding when the checkpoint was trained on another graph.
EmbeddingStore store_from_checkpoint(const Checkpoint &ckpt, const KnowledgeGraph &kg);

Checkpoint model_to_checkpoint(const MatcherModel &model, std::uint64_t seed,
                               std::uint64_t config_hash);
MatcherModel model_from_checkpoint(const Checkpoint &ckpt);

}  // namespace kgsyn

#endif  // KGSYN_CHECKPOINT_H_
