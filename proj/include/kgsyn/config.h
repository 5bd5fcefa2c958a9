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

#ifndef KGSYN_CONFIG_H_
#define KGSYN_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kgsyn/kg.h"
#include "kgsyn/kge.h"
#include "kgsyn/matcher.h"
#include "kgsyn/semantic.h"
#include "kgsyn/synthetic.h"
#include "kgsyn/tokenizer.h"

namespace kgsyn {

enum class AblationVariant : std::uint8_t {
  kFull,            // every component
  kNoKnowledge,     // -KE
  kNoTransC,        // -TransC: only the translation subsets train
  kDirectAddition,  // ->DA
  kFcFusion,        // ->EF
};
inline constexpr std::size_t kNumVariants = 5;
std::string_view variant_name(AblationVariant v);
std::optional<AblationVariant> parse_variant(std::string_view name);

struct SemanticSettings {
  bool pretrain = true;  // skip-gram over the corpus before matcher training
  SkipGramConfig skipgram;
};

struct PathSettings {
  std::string data_dir;  // fills in any empty path below
  std::string triples;
  std::string kinds;
  std::string pairs;
  std::string corpus;
  void resolve();
};

struct RunConfig {
  std::uint64_t seed = 0;
  TokenizerMode tokenizer = TokenizerMode::kUnicodeChar;
  DuplicatePolicy duplicates = DuplicatePolicy::kStrict;
  KgeConfig kge;
  SemanticSettings semantic;
  MatcherConfig matcher;
  SyntheticSpec synthetic;
  bool synthetic_seed_set = false;  // otherwise synthetic.seed follows seed
  PathSettings paths;
  std::vector<AblationVariant> variants = {
      AblationVariant::kFull, AblationVariant::kNoKnowledge, AblationVariant::kNoTransC,
      AblationVariant::kDirectAddition, AblationVariant::kFcFusion};
  bool jaccard_baseline = true;
  std::vector<std::size_t> ks = {3, 5, 10};

  // Copies seed into every sub-config; call after any override.
  void propagate_seed();
  // Throws kConfigError.
  void validate() const;

  nlohmann::ordered_json to_json() const;
  std::uint64_t hash() const;
  std::string fingerprint() const;  // hex of hash()
};

// Missing keys keep their defaults. Unknown keys and bad values throw kConfigError.
RunConfig parse_run_config(const nlohmann::json &doc, RunConfig base = {});
RunConfig load_run_config(const std::string &path);

SyntheticSpec parse_synthetic_spec(const nlohmann::json &doc, SyntheticSpec base = {});
SyntheticSpec load_synthetic_spec(const std::string &path);
nlohmann::ordered_json synthetic_spec_to_json(const SyntheticSpec &spec);

}  // namespace kgsyn

#endif  // KGSYN_CONFIG_H_
