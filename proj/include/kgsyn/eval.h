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

#ifndef KGSYN_EVAL_H_
#define KGSYN_EVAL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kgsyn/dataset.h"
#include "kgsyn/ids.h"
#include "kgsyn/kg.h"
#include "kgsyn/tokenizer.h"

namespace kgsyn {

// Scores every entity of the universe (indexed by EntityId) for a mention.
using Scorer = std::function<std::vector<double>(std::string_view mention)>;

// Drops filter_set members from `ranking` (gold kept) and reports whether
// gold then sits within the first k positions. Throws kGoldMissing if gold is
// absent or filtered.
bool filtered_hits_at_k(std::span<const EntityId> ranking, EntityId gold,
                        const std::unordered_set<EntityId> &filter_set, std::size_t k);

// Orders the universe by descending score. Equal scores are ordered by
// ascending id except that `pessimistic_for`, when set, is placed after every
// entity it ties with.
std::vector<EntityId> rank_entities(std::span<const double> scores,
                                    std::optional<EntityId> pessimistic_for = std::nullopt);

enum class CaseGroup : std::uint8_t { kAll, kRegular, kDifficult };
inline constexpr std::size_t kNumGroups = 3;
std::string_view group_name(CaseGroup group);

// True when mention and entity surface share at least one subword.
bool is_regular(std::string_view mention, std::string_view entity_surface,
                TokenizerMode mode);

struct CaseSplit {
  std::vector<Pair> regular;
  std::vector<Pair> difficult;
};

CaseSplit split_cases(std::span<const Pair> pairs,
                      std::span<const std::string> entity_surfaces, TokenizerMode mode);

// |A ∩ B| / |A ∪ B| over subword sets.
double jaccard_similarity(std::string_view q, std::string_view t, TokenizerMode mode);

Scorer make_jaccard_scorer(std::span<const std::string> entity_surfaces, TokenizerMode mode);

inline const std::vector<std::size_t> kDefaultKs = {3, 5, 10};

struct EvalReport {
  std::vector<std::size_t> ks;
  // hits[group][ki] counts trials with a filtered hit at ks[ki].
  std::array<std::vector<std::size_t>, kNumGroups> hits;
  std::array<std::size_t, kNumGroups> counts{};
  std::string fingerprint;

  double ratio(CaseGroup group, std::size_t ki) const;
  bool operator==(const EvalReport &) const = default;
};

struct EvalOptions {
  std::vector<std::size_t> ks = kDefaultKs;
  TokenizerMode mode = TokenizerMode::kUnicodeChar;
  std::string fingerprint;
};

// Ranks the full universe for every pair and aggregates filtered hits@k by
// All, Regular and Difficult. The filter of a pair is every other gold entity
// of the same mention.
EvalReport evaluate(const Scorer &scorer, std::span<const Pair> pairs,
                    const SynonymIndex &synonyms,
                    std::span<const std::string> entity_surfaces, const EvalOptions &options);

// Table rows: method name and report.
struct ReportRow {
  std::string method;
  EvalReport report;
};

std::string report_table_tsv(std::span<const ReportRow> rows);
std::string report_table_json(std::span<const ReportRow> rows);

}  // namespace kgsyn

#endif  // KGSYN_EVAL_H_
