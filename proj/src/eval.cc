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

#include "kgsyn/eval.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "kgsyn/error.h"

namespace kgsyn {

bool filtered_hits_at_k(std::span<const EntityId> ranking, EntityId gold,
                        const std::unordered_set<EntityId> &filter_set, std::size_t k) {
  if (filter_set.count(gold)) {
    throw Error(ErrorCode::kGoldMissing, "gold entity is in its own filter set");
  }
  std::size_t position = 0;
  for (EntityId e : ranking) {
    if (e != gold && filter_set.count(e)) continue;
    ++position;
    if (e == gold) return position <= k;
  }
  throw Error(ErrorCode::kGoldMissing, "gold entity " + std::to_string(gold.value) +
                                           " not in ranking");
}

std::vector<EntityId> rank_entities(std::span<const double> scores,
                                    std::optional<EntityId> pessimistic_for) {
  std::vector<EntityId> order(scores.size());
  for (std::uint32_t i = 0; i < scores.size(); ++i) order[i] = EntityId{i};
  std::sort(order.begin(), order.end(), [&](EntityId a, EntityId b) {
    const double sa = scores[a.value];
    const double sb = scores[b.value];
    if (sa != sb) return sa > sb;
    if (pessimistic_for) {
      if (a == *pessimistic_for) return false;
      if (b == *pessimistic_for) return true;
    }
    return a < b;
  });
  return order;
}

std::string_view group_name(CaseGroup group) {
  switch (group) {
    case CaseGroup::kAll: return "All";
    case CaseGroup::kRegular: return "Regular";
    case CaseGroup::kDifficult: return "Difficult";
  }
  return "?";
}

namespace {

std::set<std::string> subword_set(std::string_view s, TokenizerMode mode) {
  auto tokens = tokenize(s, mode);
  return {tokens.begin(), tokens.end()};
}

std::set<std::string> nonempty_subword_set(std::string_view s, TokenizerMode mode) {
  auto set = subword_set(s, mode);
  if (set.empty()) throw Error(ErrorCode::kEmptySurface, "no subwords in '" + std::string(s) + "'");
  return set;
}

}  // namespace

bool is_regular(std::string_view mention, std::string_view entity_surface,
                TokenizerMode mode) {
  const auto a = subword_set(mention, mode);
  const auto b = subword_set(entity_surface, mode);
  return std::any_of(a.begin(), a.end(), [&b](const std::string &t) { return b.count(t); });
}

CaseSplit split_cases(std::span<const Pair> pairs,
                      std::span<const std::string> entity_surfaces, TokenizerMode mode) {
  CaseSplit split;
  for (const Pair &p : pairs) {
    if (p.entity.value >= entity_surfaces.size()) {
      throw Error(ErrorCode::kUnknownEntity, "entity id " + std::to_string(p.entity.value));
    }
    (is_regular(p.mention, entity_surfaces[p.entity.value], mode) ? split.regular
                                                                  : split.difficult)
        .push_back(p);
  }
  return split;
}

double jaccard_similarity(std::string_view q, std::string_view t, TokenizerMode mode) {
  const auto a = nonempty_subword_set(q, mode);
  const auto b = nonempty_subword_set(t, mode);
  std::size_t common = 0;
  for (const auto &x : a) common += b.count(x);
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

Scorer make_jaccard_scorer(std::span<const std::string> entity_surfaces, TokenizerMode mode) {
  std::vector<std::set<std::string>> sets;
  sets.reserve(entity_surfaces.size());
  for (const auto &s : entity_surfaces) sets.push_back(nonempty_subword_set(s, mode));
  return [sets = std::move(sets), mode](std::string_view mention) {
    const auto q = nonempty_subword_set(mention, mode);
    std::vector<double> scores(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
      std::size_t common = 0;
      for (const auto &x : q) common += sets[i].count(x);
      scores[i] = static_cast<double>(common) /
                  static_cast<double>(q.size() + sets[i].size() - common);
    }
    return scores;
  };
}

double EvalReport::ratio(CaseGroup group, std::size_t ki) const {
  const auto g = static_cast<std::size_t>(group);
  if (counts[g] == 0) return 0.0;
  return static_cast<double>(hits[g][ki]) / static_cast<double>(counts[g]);
}

EvalReport evaluate(const Scorer &scorer, std::span<const Pair> pairs,
                    const SynonymIndex &synonyms,
                    std::span<const std::string> entity_surfaces, const EvalOptions &options) {
  EvalReport report;
  report.ks = options.ks;
  report.fingerprint = options.fingerprint;
  for (auto &h : report.hits) h.assign(options.ks.size(), 0);

  for (const Pair &p : pairs) {
    if (p.entity.value >= entity_surfaces.size()) {
      throw Error(ErrorCode::kUnknownEntity, "entity id " + std::to_string(p.entity.value));
    }
    const auto scores = scorer(p.mention);
    check_dims(scores.size(), entity_surfaces.size(), "scorer output");
    const auto ranking = rank_entities(scores, p.entity);
    // Other golds of the same mention are not counted against this one.
    auto golds = synonyms.golds(p.mention);
    std::unordered_set<EntityId> filter(golds.begin(), golds.end());
    filter.erase(p.entity);

    const bool regular = is_regular(p.mention, entity_surfaces[p.entity.value], options.mode);
    const auto group = static_cast<std::size_t>(regular ? CaseGroup::kRegular
                                                        : CaseGroup::kDifficult);
    ++report.counts[0];
    ++report.counts[group];
    for (std::size_t ki = 0; ki < options.ks.size(); ++ki) {
      if (filtered_hits_at_k(ranking, p.entity, filter, options.ks[ki])) {
        ++report.hits[0][ki];
        ++report.hits[group][ki];
      }
    }
  }
  return report;
}

namespace {

std::string percent(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * r);
  return buf;
}

}  // namespace

std::string report_table_tsv(std::span<const ReportRow> rows) {
  std::ostringstream out;
  if (rows.empty()) return "";
  const auto &ks = rows.front().report.ks;
  out << "method";
  for (std::size_t k : ks) {
    for (std::size_t g = 0; g < kNumGroups; ++g) {
      out << "\thits@" << k << "_" << group_name(static_cast<CaseGroup>(g));
    }
  }
  for (std::size_t g = 0; g < kNumGroups; ++g) {
    out << "\tn_" << group_name(static_cast<CaseGroup>(g));
  }
  out << "\n";
  for (const auto &row : rows) {
    out << row.method;
    for (std::size_t ki = 0; ki < row.report.ks.size(); ++ki) {
      for (std::size_t g = 0; g < kNumGroups; ++g) {
        out << "\t" << percent(row.report.ratio(static_cast<CaseGroup>(g), ki));
      }
    }
    for (std::size_t g = 0; g < kNumGroups; ++g) out << "\t" << row.report.counts[g];
    out << "\n";
  }
  return out.str();
}

std::string report_table_json(std::span<const ReportRow> rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto &row : rows) {
    nlohmann::ordered_json r;
    r["method"] = row.method;
    r["fingerprint"] = row.report.fingerprint;
    for (std::size_t g = 0; g < kNumGroups; ++g) {
      const auto group = static_cast<CaseGroup>(g);
      nlohmann::ordered_json entry;
      entry["count"] = row.report.counts[g];
      for (std::size_t ki = 0; ki < row.report.ks.size(); ++ki) {
        entry["hits@" + std::to_string(row.report.ks[ki])] = row.report.ratio(group, ki);
      }
      r["groups"][std::string(group_name(group))] = entry;
    }
    doc.push_back(r);
  }
  return doc.dump(2) + "\n";
}

}  // namespace kgsyn
